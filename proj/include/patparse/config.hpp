#pragma once

// Pipeline configuration: axis layers in the same block syntax as the axis
// database (without AXIS lines), plus a few global keys:
//
//   INVENTORY <path>          tag inventory file (default: built-in tag set)
//   READING_CAP <n>
//   STRICT_GAPS <yes|no>
//   LAYER_SKIP <yes|no>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "patparse/axis_db.hpp"
#include "patparse/parser.hpp"
#include "patparse/tagset.hpp"

namespace patparse {

struct PipelineConfig {
  std::vector<LayerSpec> layers;
  TagInventory inventory = default_inventory();
  DisambiguationConfig disambiguation;
};

inline void validate_config(const PipelineConfig &cfg) {
  validate_layer_specs(cfg.layers);
  cfg.disambiguation.validate();
  auto known = [&](const Tag &t) { return cfg.inventory.contains(t) || t == punct_tag(); };
  for (const auto &l : cfg.layers) {
    for (const auto &t : l.tagset)
      if (!known(t)) fail("UnknownTag", "layer " + l.id + " uses tag " + t.symbol() + " missing from the inventory");
    l.eq.validate(cfg.inventory);
    for (const auto &[cls, members] : l.eq.classes())
      for (const auto &m : members)
        if (!known(m)) fail("UnknownTag", "class " + cls + " uses tag " + m.symbol() + " missing from the inventory");
  }
}

/// `base_dir` resolves a relative INVENTORY path.
inline PipelineConfig parse_config(std::istream &in, const std::filesystem::path &base_dir = {}) {
  PipelineConfig cfg;
  auto yes_no = [](const std::string &v) {
    if (v == "yes") return true;
    if (v == "no") return false;
    fail("MalformedConfig", "expected yes or no, got '" + v + "'");
  };
  auto blocks = parse_layer_blocks(in, "MalformedConfig", [&](const std::vector<std::string> &w) {
    if (w.size() != 2) return false;
    if (w[0] == "INVENTORY") {
      std::filesystem::path p = w[1];
      if (p.is_relative()) p = base_dir / p;
      std::ifstream f(p);
      if (!f) fail("IOError", "cannot open inventory " + p.string());
      cfg.inventory = load_inventory(f);
    } else if (w[0] == "READING_CAP") {
      auto &cap = cfg.disambiguation.reading_cap;
      auto res = std::from_chars(w[1].data(), w[1].data() + w[1].size(), cap);
      if (res.ec != std::errc{} || res.ptr != w[1].data() + w[1].size()) fail("MalformedConfig", "bad READING_CAP '" + w[1] + "'");
    } else if (w[0] == "STRICT_GAPS") {
      cfg.disambiguation.strict_gaps = yes_no(w[1]);
    } else if (w[0] == "LAYER_SKIP") {
      cfg.disambiguation.layer_skip = yes_no(w[1]);
    } else {
      return false;
    }
    return true;
  });
  for (auto &b : blocks) {
    if (!b.axis_lines.empty()) fail("MalformedConfig", "line " + std::to_string(b.axis_lines.front().first) + ": AXIS in a config file");
    cfg.layers.push_back(std::move(b.spec));
  }
  validate_config(cfg);
  return cfg;
}

} // namespace patparse
