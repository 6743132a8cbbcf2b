#pragma once

// Strictness-ordered layers of sentence axes, their construction from a gold
// corpus, and the ".adb" text format:
//
//   LAYER <id> PRIORITY <int> GENERALISE <yes|no>
//   TAGS <tag> <tag> ...
//   CLASS <class-symbol> = <tag> <tag> ...
//   AXIS <elements>

#include <algorithm>
#include <compare>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "patparse/axis.hpp"
#include "patparse/corpus.hpp"
#include "patparse/error.hpp"
#include "patparse/tagset.hpp"

namespace patparse {

struct AxisLayer {
  LayerSpec spec;
  std::vector<Axis> axes; // sorted by rendered text, no duplicates

  const std::string &id() const { return spec.id; }
  friend bool operator==(const AxisLayer &, const AxisLayer &) = default;
};

struct AxisDB {
  std::vector<AxisLayer> layers; // strictest first

  std::size_t axis_count() const {
    std::size_t n = 0;
    for (const auto &l : layers) n += l.axes.size();
    return n;
  }
  friend bool operator==(const AxisDB &, const AxisDB &) = default;
};

/// Total order, strictest first: higher priority, then more tags, then id.
/// validate_layer_specs guarantees that a tag superset never has a lower
/// priority, so a superset layer always comes before its subsets.
inline std::strong_ordering compare_strictness(const LayerSpec &a, const LayerSpec &b) {
  if (a.priority != b.priority) return b.priority <=> a.priority;
  if (a.tagset.size() != b.tagset.size()) return b.tagset.size() <=> a.tagset.size();
  return a.id <=> b.id;
}

inline std::strong_ordering compare_strictness(const AxisLayer &a, const AxisLayer &b) {
  return compare_strictness(a.spec, b.spec);
}

inline bool is_strict_superset(const std::set<Tag> &a, const std::set<Tag> &b) {
  return a.size() > b.size() && std::includes(a.begin(), a.end(), b.begin(), b.end());
}

inline void validate_layer_specs(const std::vector<LayerSpec> &specs) {
  std::set<std::string> ids;
  for (const auto &s : specs) {
    if (s.id.empty()) fail("InvalidLayer", "layer without id");
    if (!ids.insert(s.id).second) fail("InvalidLayer", "duplicate layer id " + s.id);
    if (s.tagset.empty()) fail("InvalidLayer", "layer " + s.id + " has no tags");
    for (const auto &t : s.tagset)
      if (is_reserved_word(t.symbol())) fail("InvalidLayer", "reserved word used as tag: " + t.symbol());
  }
  for (const auto &a : specs)
    for (const auto &b : specs)
      if (is_strict_superset(a.tagset, b.tagset) && a.priority < b.priority)
        fail("PriorityConflict", "layer " + a.id + " covers the tags of " + b.id + " but has lower priority");
}

inline void sort_layers(std::vector<AxisLayer> &layers) {
  std::sort(layers.begin(), layers.end(), [](const AxisLayer &a, const AxisLayer &b) { return compare_strictness(a, b) < 0; });
}

namespace detail {

inline void add_axis(AxisLayer &layer, Axis axis) {
  std::string key = render_axis(axis);
  auto pos = std::lower_bound(layer.axes.begin(), layer.axes.end(), key,
                              [](const Axis &a, const std::string &k) { return render_axis(a) < k; });
  if (pos != layer.axes.end() && render_axis(*pos) == key) return;
  layer.axes.insert(pos, std::move(axis));
}

} // namespace detail

/// One axis per gold sentence and layer, generalised when the layer asks
/// for it, deduplicated. Sentences without any tag of a layer carry no
/// axis for that layer.
inline AxisDB build_axis_db(const Corpus &gold, const std::vector<LayerSpec> &specs) {
  if (gold.sentences.empty()) fail("EmptyCorpus", "gold corpus has no sentences");
  if (specs.empty()) fail("InvalidLayer", "no layers configured");
  validate_layer_specs(specs);

  std::vector<Reading> readings;
  readings.reserve(gold.sentences.size());
  for (const auto &s : gold.sentences) readings.push_back(gold_reading(s));

  AxisDB db;
  for (const auto &spec : specs) {
    AxisLayer layer{spec, {}};
    std::map<std::string, Axis> uniq;
    for (const auto &r : readings) {
      Axis axis{spec.id, project_sentence(r, spec)};
      if (!detail::contains_sym(axis.elements)) continue;
      if (spec.generalise) axis = generalize_repeats(axis);
      uniq.emplace(render_axis(axis), std::move(axis));
    }
    if (uniq.empty()) fail("EmptyLayer", "layer " + spec.id + " received no axis from the corpus");
    for (auto &kv : uniq) layer.axes.push_back(std::move(kv.second));
    db.layers.push_back(std::move(layer));
  }
  sort_layers(db.layers);
  return db;
}

// ---------------------------------------------------------------------------
// Text format.

inline void render_layer_header(const LayerSpec &spec, std::ostream &out) {
  out << "LAYER " << spec.id << " PRIORITY " << spec.priority << " GENERALISE " << (spec.generalise ? "yes" : "no") << '\n';
  out << "TAGS";
  for (const auto &t : spec.tagset) out << ' ' << t.symbol();
  out << '\n';
  for (const auto &[cls, members] : spec.eq.classes()) {
    out << "CLASS " << cls << " =";
    for (const auto &m : members) out << ' ' << m.symbol();
    out << '\n';
  }
}

inline void render_axis_db(const AxisDB &db, std::ostream &out) {
  bool first = true;
  for (const auto &layer : db.layers) {
    if (!first) out << '\n';
    first = false;
    render_layer_header(layer.spec, out);
    for (const auto &axis : layer.axes) out << "AXIS " << render_axis(axis) << '\n';
  }
}

/// Parsed LAYER blocks. Lines whose keyword is not a layer keyword are
/// offered to `extra`, which returns false to reject them.
struct LayerBlock {
  LayerSpec spec;
  std::vector<std::pair<std::size_t, std::string>> axis_lines; // (line number, elements)
};

inline std::vector<LayerBlock> parse_layer_blocks(std::istream &in, const std::string &error_code,
                                                  const std::function<bool(const std::vector<std::string> &)> &extra = {}) {
  std::vector<LayerBlock> blocks;
  std::string line;
  std::size_t lineno = 0;
  auto bad = [&](const std::string &what) { fail(error_code, "line " + std::to_string(lineno) + ": " + what); };

  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    std::string_view view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto words = detail::split_ws(view);
    const std::string &kw = words.front();
    try {
      if (kw == "LAYER") {
        if (words.size() != 6 || words[2] != "PRIORITY" || words[4] != "GENERALISE")
          bad("expected LAYER <id> PRIORITY <int> GENERALISE <yes|no>");
        LayerBlock b;
        b.spec.id = words[1];
        std::size_t used = 0;
        try {
          b.spec.priority = std::stoi(words[3], &used);
        } catch (const std::exception &) {
          used = 0;
        }
        if (used != words[3].size()) bad("bad priority '" + words[3] + "'");
        if (words[5] != "yes" && words[5] != "no") bad("GENERALISE must be yes or no");
        b.spec.generalise = words[5] == "yes";
        blocks.push_back(std::move(b));
      } else if (kw == "TAGS" || kw == "CLASS" || kw == "AXIS") {
        if (blocks.empty()) bad(kw + " before any LAYER");
        LayerBlock &b = blocks.back();
        if (kw == "TAGS") {
          if (words.size() < 2) bad("TAGS needs at least one tag");
          for (std::size_t i = 1; i < words.size(); ++i)
            if (!b.spec.tagset.insert(Tag{words[i]}).second) bad("duplicate tag " + words[i]);
        } else if (kw == "CLASS") {
          if (words.size() < 4 || words[2] != "=") bad("expected CLASS <symbol> = <tag> ...");
          std::set<Tag> members;
          for (std::size_t i = 3; i < words.size(); ++i) members.insert(Tag{words[i]});
          b.spec.eq.add_class(words[1], members);
        } else {
          b.axis_lines.emplace_back(lineno, std::string(view.substr(4)));
        }
      } else if (!extra || !extra(words)) {
        bad("unknown keyword '" + kw + "'");
      }
    } catch (const Error &e) {
      if (e.code() == error_code) throw;
      bad(e.what());
    }
  }
  return blocks;
}

inline AxisDB parse_axis_db(std::istream &in) {
  auto blocks = parse_layer_blocks(in, "MalformedAxisFile");
  AxisDB db;
  std::vector<LayerSpec> specs;
  for (auto &b : blocks) {
    if (b.axis_lines.empty()) fail("EmptyLayer", "layer " + b.spec.id + " has no axes");
    AxisLayer layer{b.spec, {}};
    const auto alphabet = b.spec.alphabet();
    for (const auto &[lineno, text] : b.axis_lines) {
      try {
        Axis axis{b.spec.id, parse_elements(text)};
        validate_axis(axis, &alphabet);
        detail::add_axis(layer, std::move(axis));
      } catch (const Error &e) {
        fail("MalformedAxisFile", "line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    specs.push_back(b.spec);
    db.layers.push_back(std::move(layer));
  }
  try {
    validate_layer_specs(specs);
  } catch (const Error &e) {
    if (e.code() == "PriorityConflict") throw;
    fail("MalformedAxisFile", e.what());
  }
  sort_layers(db.layers);
  return db;
}

} // namespace patparse
