#pragma once

// Two-stage disambiguation. Axis layers are tried strictest first and each
// one that accepts some of the remaining readings narrows the set; joints
// then rank the survivors by the summed length of their longest matched
// contexts.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "patparse/axis.hpp"
#include "patparse/axis_db.hpp"
#include "patparse/corpus.hpp"
#include "patparse/error.hpp"
#include "patparse/joint.hpp"

namespace patparse {

struct DisambiguationConfig {
  std::uint64_t reading_cap = 100000;
  bool strict_gaps = false;
  bool layer_skip = true;       // false: the first layer rejecting everything ends axis filtering
  std::size_t beam_width = 256; // joints-only decoding above the reading cap

  void validate() const {
    if (reading_cap < 1) fail("InvalidParams", "reading cap must be >= 1");
    if (beam_width < 1) fail("InvalidParams", "beam width must be >= 1");
  }
};

struct AxisFilterResult {
  std::vector<Reading> readings;
  std::vector<std::string> matched_layers;
  std::size_t fallback_depth = 0;
};

struct ParseResult {
  Reading chosen;
  std::size_t survivors_after_axes = 0;
  std::vector<std::string> matched_layers;
  std::size_t score = 0;
  std::size_t fallback_depth = 0;
  bool joints_only = false; // reading cap exceeded, axes not applied

  friend bool operator==(const ParseResult &, const ParseResult &) = default;
};

namespace detail {

// Readings as rows of candidate indices, in lexicographic order.
struct ReadingSet {
  std::size_t width = 0;
  std::vector<std::uint16_t> cells;

  std::size_t size() const { return width ? cells.size() / width : 0; }
  const std::uint16_t *row(std::size_t r) const { return cells.data() + r * width; }
};

inline ReadingSet enumerate_indices(const Sentence &s) {
  ReadingSet set;
  set.width = s.tokens.size();
  for (const auto &t : s.tokens)
    if (t.candidates.size() > 0xFFFF) fail("TooManyReadings", "token with more than 65535 candidates");
  set.cells.reserve(static_cast<std::size_t>(reading_count(s)) * set.width);
  std::vector<std::uint16_t> idx(set.width, 0);
  for (;;) {
    set.cells.insert(set.cells.end(), idx.begin(), idx.end());
    std::size_t i = set.width;
    for (;;) {
      if (i == 0) return set;
      --i;
      if (++idx[i] < s.tokens[i].candidates.size()) break;
      idx[i] = 0;
    }
  }
}

inline Reading to_reading(const Sentence &s, const std::uint16_t *row) {
  Reading r;
  r.reserve(s.tokens.size());
  for (std::size_t i = 0; i < s.tokens.size(); ++i) r.push_back(s.tokens[i].candidates[row[i]]);
  return r;
}

// Matches readings of one sentence against one layer, memoised on the
// projection since many readings share it.
class LayerMatcher {
public:
  LayerMatcher(const Sentence &s, const AxisLayer &layer, bool strict_gaps) : layer_(layer), strict_(strict_gaps) {
    std::unordered_map<std::string, std::uint32_t> ids;
    proj_.resize(s.tokens.size());
    for (std::size_t i = 0; i < s.tokens.size(); ++i)
      for (const auto &t : s.tokens[i].candidates) {
        if (!layer.spec.tagset.count(t)) {
          proj_[i].push_back(0);
          continue;
        }
        std::string sym = project_symbol(t, layer.spec.eq);
        auto [it, fresh] = ids.emplace(sym, static_cast<std::uint32_t>(names_.size() + 1));
        if (fresh) names_.push_back(sym);
        proj_[i].push_back(it->second);
      }
  }

  bool matches(const std::uint16_t *row) {
    key_.clear();
    for (std::size_t i = 0; i < proj_.size(); ++i) {
      std::uint32_t id = proj_[i][row[i]];
      if (id != 0 || key_.empty() || key_.back() != 0) key_.push_back(id);
    }
    auto it = memo_.find(key_);
    if (it != memo_.end()) return it->second;
    Projection p;
    p.reserve(key_.size());
    for (auto id : key_) p.push_back(id == 0 ? AxisElement::gap() : AxisElement::sym(names_[id - 1]));
    bool ok = std::any_of(layer_.axes.begin(), layer_.axes.end(), [&](const Axis &a) { return axis_matches(a, p, strict_); });
    memo_.emplace(key_, ok);
    return ok;
  }

private:
  const AxisLayer &layer_;
  bool strict_;
  std::vector<std::vector<std::uint32_t>> proj_; // 0 = outside the layer
  std::vector<std::string> names_;
  std::u32string key_;
  std::unordered_map<std::u32string, bool> memo_;
};

inline ReadingSet filter_indices(const Sentence &s, const AxisDB &db, const DisambiguationConfig &cfg, ReadingSet set,
                                 std::vector<std::string> &matched, std::size_t &fallback) {
  for (std::size_t li = 0; li < db.layers.size(); ++li) {
    const auto &layer = db.layers[li];
    LayerMatcher matcher(s, layer, cfg.strict_gaps);
    ReadingSet kept;
    kept.width = set.width;
    for (std::size_t r = 0; r < set.size(); ++r)
      if (matcher.matches(set.row(r))) kept.cells.insert(kept.cells.end(), set.row(r), set.row(r) + set.width);
    if (kept.size() > 0) {
      set = std::move(kept);
      matched.push_back(layer.id());
    } else if (cfg.layer_skip) {
      ++fallback;
    } else {
      fallback += db.layers.size() - li;
      break;
    }
  }
  return set;
}

// Joint scores of readings of one sentence, memoised per position on the
// candidate indices inside that position's context window.
class ReadingScorer {
public:
  ReadingScorer(const Sentence &s, const JointDB &db) : db_(db), n_(s.tokens.size()), radius_(db.params().max_len) {
    ids_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (const auto &t : s.tokens[i].candidates) ids_[i].push_back(db.encode_tag(t));
    memo_.resize(n_);
    buf_.resize(n_);
  }

  std::size_t score(const std::uint16_t *row) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < n_; ++i) total += at(row, i);
    return total;
  }

  // Longest match at position i; only row[i - radius .. i + radius] is read.
  std::size_t at(const std::uint16_t *row, std::size_t i) {
    const std::size_t lo = i >= radius_ ? i - radius_ : 0;
    const std::size_t hi = std::min(n_, i + radius_ + 1);
    key_.assign(row + lo, row + hi);
    auto it = memo_[i].find(key_);
    if (it != memo_[i].end()) return it->second;
    for (std::size_t j = lo; j < hi; ++j) buf_[j] = ids_[j][row[j]];
    std::size_t len = db_.longest_match(buf_, i);
    memo_[i].emplace(key_, len);
    return len;
  }

private:
  const JointDB &db_;
  std::size_t n_, radius_;
  std::vector<std::vector<std::uint32_t>> ids_;
  std::vector<std::unordered_map<std::u16string, std::size_t>> memo_;
  std::vector<std::uint32_t> buf_;
  std::u16string key_;
};

inline std::vector<std::uint16_t> index_row(const Sentence &s, const Reading &r) {
  if (!is_reading_of(s, r)) fail("InvalidReading", "reading does not fit sentence " + s.id);
  std::vector<std::uint16_t> row;
  row.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) row.push_back(static_cast<std::uint16_t>(s.tokens[i].index_of(r[i])));
  return row;
}

} // namespace detail

inline AxisFilterResult filter_by_axes(const Sentence &sentence, const AxisDB &db, const DisambiguationConfig &cfg) {
  cfg.validate();
  check_reading_cap(sentence, cfg.reading_cap);
  AxisFilterResult res;
  auto set = detail::filter_indices(sentence, db, cfg, detail::enumerate_indices(sentence), res.matched_layers, res.fallback_depth);
  for (std::size_t r = 0; r < set.size(); ++r) res.readings.push_back(detail::to_reading(sentence, set.row(r)));
  return res;
}

/// Highest score first; ties go to the reading whose tags come earlier in
/// the tokens' candidate order, comparing positions left to right.
inline std::vector<std::pair<Reading, std::size_t>> rank_by_joints(const Sentence &sentence, const std::vector<Reading> &readings,
                                                                   const JointDB *db) {
  if (readings.empty()) fail("EmptyReadingSet", "no readings to rank for sentence " + sentence.id);
  struct Entry {
    std::vector<std::uint16_t> row;
    std::size_t score;
    const Reading *reading;
  };
  std::vector<Entry> entries;
  std::optional<detail::ReadingScorer> scorer;
  if (db) scorer.emplace(sentence, *db);
  for (const auto &r : readings) {
    auto row = detail::index_row(sentence, r);
    std::size_t sc = scorer ? scorer->score(row.data()) : 0;
    entries.push_back({std::move(row), sc, &r});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry &a, const Entry &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.row < b.row;
  });
  std::vector<std::pair<Reading, std::size_t>> out;
  out.reserve(entries.size());
  for (auto &e : entries) out.emplace_back(*e.reading, e.score);
  return out;
}

/// Either database may be null to run a single stage.
inline ParseResult disambiguate(const Sentence &sentence, const AxisDB *axes, const JointDB *joints, const DisambiguationConfig &cfg) {
  cfg.validate();
  check_reading_cap(sentence, cfg.reading_cap);
  ParseResult res;
  auto set = detail::enumerate_indices(sentence);
  if (axes) set = detail::filter_indices(sentence, *axes, cfg, std::move(set), res.matched_layers, res.fallback_depth);
  res.survivors_after_axes = set.size();

  // Survivors stay in lexicographic order, so the first best score wins ties.
  std::size_t best = 0, best_score = 0;
  if (joints) {
    detail::ReadingScorer scorer(sentence, *joints);
    for (std::size_t r = 0; r < set.size(); ++r) {
      std::size_t sc = scorer.score(set.row(r));
      if (r == 0 || sc > best_score) {
        best = r;
        best_score = sc;
      }
    }
  }
  res.chosen = detail::to_reading(sentence, set.row(best));
  res.score = best_score;
  return res;
}

/// Beam search over the candidate lattice using joints only; for sentences
/// whose reading count exceeds the cap. Hypotheses agreeing on the last
/// 2 * max_len tags are merged.
inline ParseResult disambiguate_joints_only(const Sentence &sentence, const JointDB *joints, const DisambiguationConfig &cfg) {
  cfg.validate();
  ParseResult res;
  res.joints_only = true;
  const std::size_t n = sentence.tokens.size();
  if (!joints) {
    for (const auto &t : sentence.tokens) res.chosen.push_back(t.candidates.front());
    res.survivors_after_axes = 0;
    return res;
  }
  const std::size_t m = joints->params().max_len;
  std::vector<std::vector<std::uint32_t>> ids(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto &t : sentence.tokens[i].candidates) ids[i].push_back(joints->encode_tag(t));

  struct Hyp {
    std::vector<std::uint16_t> row;
    std::size_t score;
  };
  auto better = [](const Hyp &a, const Hyp &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.row < b.row;
  };
  std::vector<std::uint32_t> buf(n);
  auto position_score = [&](const std::vector<std::uint16_t> &row, std::size_t pos) {
    const std::size_t lo = pos >= m ? pos - m : 0;
    const std::size_t hi = std::min(n, pos + m + 1);
    for (std::size_t j = lo; j < hi; ++j) buf[j] = ids[j][row[j]];
    return joints->longest_match(std::span<const std::uint32_t>(buf.data(), n), pos);
  };

  std::vector<Hyp> beam{Hyp{{}, 0}};
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Hyp> next;
    for (const auto &h : beam)
      for (std::uint16_t c = 0; c < sentence.tokens[j].candidates.size(); ++c) {
        Hyp e{h.row, h.score};
        e.row.push_back(c);
        // position j - m now has its full right context
        if (j >= m) e.score += position_score(e.row, j - m);
        next.push_back(std::move(e));
      }
    std::sort(next.begin(), next.end(), better);
    std::vector<Hyp> kept;
    std::map<std::vector<std::uint16_t>, bool> states;
    const std::size_t tail = std::min<std::size_t>(2 * m, j + 1);
    for (auto &h : next) {
      std::vector<std::uint16_t> state(h.row.end() - static_cast<std::ptrdiff_t>(tail), h.row.end());
      if (!states.emplace(std::move(state), true).second) continue;
      kept.push_back(std::move(h));
      if (kept.size() == cfg.beam_width) break;
    }
    beam = std::move(kept);
  }
  for (auto &h : beam) {
    std::vector<std::uint16_t> full = h.row;
    for (std::size_t pos = n > m ? n - m : 0; pos < n; ++pos) h.score += position_score(full, pos);
  }
  std::sort(beam.begin(), beam.end(), better);
  res.chosen = detail::to_reading(sentence, beam.front().row.data());
  res.score = beam.front().score;
  return res;
}

/// disambiguate, or the joints-only decoder when the sentence exceeds the reading cap.
inline ParseResult disambiguate_with_fallback(const Sentence &sentence, const AxisDB *axes, const JointDB *joints,
                                              const DisambiguationConfig &cfg) {
  if (reading_count(sentence) > cfg.reading_cap) return disambiguate_joints_only(sentence, joints, cfg);
  return disambiguate(sentence, axes, joints, cfg);
}

} // namespace patparse
