#pragma once

// Independent oracles and random generators shared by the unit and
// acceptance suites.

#include <cstdint>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "patparse/patparse.hpp"

#ifndef PATPARSE_DATA_DIR
#define PATPARSE_DATA_DIR "data"
#endif

namespace patparse::testing {

inline std::string data_path(const std::string &rel) { return std::string(PATPARSE_DATA_DIR) + "/" + rel; }

inline Corpus load_fixture(const std::string &rel, ReadMode mode) {
  std::ifstream f(data_path(rel));
  if (!f) throw std::runtime_error("missing fixture " + rel);
  return read_corpus(f, mode, rel);
}

inline Corpus corpus_from_text(const std::string &text, ReadMode mode) {
  std::istringstream in(text);
  return read_corpus(in, mode);
}

/// Gold sentence from "form/TAG form/TAG ..." shorthand.
inline Sentence gold_sentence(const std::string &text, const std::string &id = "t") {
  Sentence s{id, {}};
  std::istringstream in(text);
  std::string w;
  while (in >> w) {
    auto slash = w.rfind('/');
    Tag t{w.substr(slash + 1)};
    s.tokens.push_back(Token{w.substr(0, slash), {t}, t});
  }
  return s;
}

/// Ambiguous sentence from "form/T1|T2 form/T3" shorthand.
inline Sentence ambiguous_sentence(const std::string &text, const std::string &id = "t") {
  Sentence s{id, {}};
  std::istringstream in(text);
  std::string w;
  while (in >> w) {
    auto slash = w.find('/');
    Token tok{w.substr(0, slash), {}, std::nullopt};
    std::string rest = w.substr(slash + 1);
    std::size_t pos = 0;
    for (;;) {
      auto bar = rest.find('|', pos);
      tok.candidates.emplace_back(rest.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos));
      if (bar == std::string::npos) break;
      pos = bar + 1;
    }
    s.tokens.push_back(std::move(tok));
  }
  return s;
}

inline Projection projection_of(const std::string &text) {
  Projection p;
  std::istringstream in(text);
  std::string w;
  while (in >> w) p.push_back(w == "..." ? AxisElement::gap() : AxisElement::sym(w));
  return p;
}

// ---------------------------------------------------------------------------
// Brute-force axis matcher: expands every gap choice and repeat count up to
// the projection length and compares the concrete sequences.

namespace detail {

inline void expand(const std::vector<AxisElement> &elems, std::size_t i, std::vector<std::string> &prefix, std::size_t limit,
                   bool strict, std::set<std::vector<std::string>> &out);

inline void expand_repeat(const AxisElement &rep, const std::vector<AxisElement> &rest, std::size_t i,
                          std::vector<std::string> &prefix, std::size_t limit, bool strict, std::set<std::vector<std::string>> &out,
                          bool at_least_one_done) {
  // one more copy of the body, then optionally stop
  std::set<std::vector<std::string>> copies;
  std::vector<std::string> empty;
  expand(rep.body(), 0, empty, limit - prefix.size(), strict, copies);
  for (const auto &c : copies) {
    if (c.empty() || prefix.size() + c.size() > limit) continue;
    std::size_t before = prefix.size();
    prefix.insert(prefix.end(), c.begin(), c.end());
    expand(rest, i + 1, prefix, limit, strict, out);
    expand_repeat(rep, rest, i, prefix, limit, strict, out, true);
    prefix.resize(before);
  }
  (void)at_least_one_done;
}

inline void expand(const std::vector<AxisElement> &elems, std::size_t i, std::vector<std::string> &prefix, std::size_t limit,
                   bool strict, std::set<std::vector<std::string>> &out) {
  if (prefix.size() > limit) return;
  if (i == elems.size()) {
    out.insert(prefix);
    return;
  }
  const AxisElement &e = elems[i];
  if (e.is_sym()) {
    prefix.push_back(e.symbol());
    expand(elems, i + 1, prefix, limit, strict, out);
    prefix.pop_back();
  } else if (e.is_gap()) {
    prefix.push_back("...");
    expand(elems, i + 1, prefix, limit, strict, out);
    prefix.pop_back();
    if (!strict) expand(elems, i + 1, prefix, limit, strict, out);
  } else {
    expand_repeat(e, elems, i, prefix, limit, strict, out, false);
  }
}

} // namespace detail

inline bool brute_force_matches(const std::vector<AxisElement> &axis, const Projection &proj, bool strict = false) {
  std::vector<std::string> target;
  for (const auto &p : proj) target.push_back(p.is_gap() ? "..." : p.symbol());
  std::set<std::vector<std::string>> all;
  std::vector<std::string> prefix;
  detail::expand(axis, 0, prefix, target.size(), strict, all);
  return all.count(target) != 0;
}

// ---------------------------------------------------------------------------
// Random generators.

class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool coin(double p = 0.5) { return double(rng_() >> 11) * 0x1.0p-53 < p; }

  /// Element list without adjacent gaps; repeats nest up to `depth`.
  std::vector<AxisElement> axis_elements(const std::vector<std::string> &alphabet, std::size_t max_items, int depth) {
    std::vector<AxisElement> out;
    std::size_t items = 1 + below(max_items);
    for (std::size_t k = 0; k < items; ++k) {
      std::size_t kind = below(depth > 0 ? 5 : 4);
      if (kind == 0 && (out.empty() || !out.back().is_gap())) {
        out.push_back(AxisElement::gap());
      } else if (kind == 4) {
        auto body = axis_elements(alphabet, 3, depth - 1);
        if (!patparse::detail::contains_sym(body)) body.push_back(AxisElement::sym(alphabet[below(alphabet.size())]));
        if (body.size() == 1 && body.front().is_repeat()) body.push_back(AxisElement::sym(alphabet[below(alphabet.size())]));
        out.push_back(AxisElement::repeat(std::move(body)));
      } else {
        out.push_back(AxisElement::sym(alphabet[below(alphabet.size())]));
      }
    }
    if (!patparse::detail::contains_sym(out)) out.push_back(AxisElement::sym(alphabet[below(alphabet.size())]));
    return out;
  }

  Projection projection(const std::vector<std::string> &alphabet, std::size_t max_len) {
    Projection p;
    std::size_t len = below(max_len + 1);
    while (p.size() < len) {
      if (coin(0.35) && (p.empty() || !p.back().is_gap())) p.push_back(AxisElement::gap());
      else p.push_back(AxisElement::sym(alphabet[below(alphabet.size())]));
    }
    return p;
  }

  /// Gold corpus over a small tag alphabet.
  Corpus gold_corpus(const std::vector<std::string> &tags, std::size_t sentences, std::size_t max_tokens) {
    Corpus c{"random", {}};
    for (std::size_t s = 0; s < sentences; ++s) {
      Sentence sent{"r" + std::to_string(s), {}};
      std::size_t n = 1 + below(max_tokens);
      for (std::size_t i = 0; i < n; ++i) {
        Tag t{tags[below(tags.size())]};
        sent.tokens.push_back(Token{"w" + std::to_string(i), {t}, t});
      }
      c.sentences.push_back(std::move(sent));
    }
    return c;
  }

  /// Ambiguous sentence with at most `max_readings` readings.
  Sentence ambiguous_sentence(const std::vector<std::string> &tags, std::size_t max_tokens, std::size_t max_readings) {
    Sentence s{"q", {}};
    std::size_t n = 1 + below(max_tokens);
    std::size_t readings = 1;
    for (std::size_t i = 0; i < n; ++i) {
      Token t{"w" + std::to_string(i), {}, std::nullopt};
      std::size_t k = 1 + below(3);
      while (k > 1 && readings * k > max_readings) --k;
      std::vector<std::string> pool = tags;
      for (std::size_t c = 0; c < k && !pool.empty(); ++c) {
        std::size_t at = below(pool.size());
        t.candidates.emplace_back(pool[at]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
      }
      readings *= t.candidates.size();
      s.tokens.push_back(std::move(t));
    }
    return s;
  }

  std::mt19937_64 &engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

} // namespace patparse::testing
