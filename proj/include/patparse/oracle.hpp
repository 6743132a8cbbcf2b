#pragma once

// Reference disambiguator for small sentences: enumerates every reading,
// replays the layer filter literally, scores each survivor by scanning all
// stored joints, and sorts. It shares no code with disambiguate beyond
// projection and axis matching.

#include <algorithm>
#include <string>
#include <vector>

#include "patparse/axis.hpp"
#include "patparse/axis_db.hpp"
#include "patparse/corpus.hpp"
#include "patparse/joint.hpp"
#include "patparse/parser.hpp"

namespace patparse {

inline constexpr std::uint64_t kOracleReadingCap = 64;

namespace detail {

inline void oracle_enumerate(const Sentence &s, std::size_t pos, Reading &prefix, std::vector<Reading> &out) {
  if (pos == s.tokens.size()) {
    out.push_back(prefix);
    return;
  }
  for (const auto &t : s.tokens[pos].candidates) {
    prefix.push_back(t);
    oracle_enumerate(s, pos + 1, prefix, out);
    prefix.pop_back();
  }
}

inline bool joint_fits(const JointContext &c, const Reading &r, std::size_t pos) {
  if (r[pos] != c.target) return false;
  const long n = static_cast<long>(r.size());
  const long l = static_cast<long>(c.left.size());
  for (long k = 0; k < l; ++k) {
    long at = static_cast<long>(pos) - (l - k);
    if (at < -1) return false;
    const std::string &want = at == -1 ? std::string(kBos) : r[static_cast<std::size_t>(at)].symbol();
    if (c.left[static_cast<std::size_t>(k)] != want) return false;
  }
  for (std::size_t k = 0; k < c.right.size(); ++k) {
    long at = static_cast<long>(pos) + 1 + static_cast<long>(k);
    if (at > n) return false;
    const std::string &want = at == n ? std::string(kEos) : r[static_cast<std::size_t>(at)].symbol();
    if (c.right[k] != want) return false;
  }
  return true;
}

} // namespace detail

/// Longest stored joint around `pos`, by linear scan of the database.
inline std::size_t oracle_longest_match(const JointDB &db, const Reading &r, std::size_t pos) {
  std::size_t best = 0;
  for (const auto &j : db.joints())
    if (j.length() > best && detail::joint_fits(j.context, r, pos)) best = j.length();
  return best;
}

inline ParseResult oracle_disambiguate(const Sentence &sentence, const AxisDB *axes, const JointDB *joints,
                                       const DisambiguationConfig &cfg) {
  if (reading_count(sentence) > kOracleReadingCap)
    fail("TooManyReadings", "oracle handles at most 64 readings, sentence " + sentence.id + " has more");
  std::vector<Reading> current;
  Reading prefix;
  detail::oracle_enumerate(sentence, 0, prefix, current);

  ParseResult res;
  if (axes) {
    for (std::size_t li = 0; li < axes->layers.size(); ++li) {
      const auto &layer = axes->layers[li];
      std::vector<Reading> accepted;
      for (const auto &r : current) {
        Projection p = project_sentence(r, layer.spec);
        for (const auto &a : layer.axes)
          if (axis_matches(a, p, cfg.strict_gaps)) {
            accepted.push_back(r);
            break;
          }
      }
      if (!accepted.empty()) {
        current = std::move(accepted);
        res.matched_layers.push_back(layer.id());
      } else if (cfg.layer_skip) {
        ++res.fallback_depth;
      } else {
        res.fallback_depth += axes->layers.size() - li;
        break;
      }
    }
  }
  res.survivors_after_axes = current.size();

  struct Scored {
    Reading reading;
    std::size_t score;
    std::vector<std::size_t> order;
  };
  std::vector<Scored> scored;
  for (auto &r : current) {
    Scored s{r, 0, {}};
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (joints) s.score += oracle_longest_match(*joints, r, i);
      s.order.push_back(sentence.tokens[i].index_of(r[i]));
    }
    scored.push_back(std::move(s));
  }
  std::sort(scored.begin(), scored.end(), [](const Scored &a, const Scored &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.order < b.order;
  });
  res.chosen = scored.front().reading;
  res.score = scored.front().score;
  return res;
}

} // namespace patparse
