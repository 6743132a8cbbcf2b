#pragma once

// Tokens with candidate tag sets, sentences, readings, and the vertical
// corpus format:
//
//   # id=<sentence id>
//   form<TAB>TAG1/TAG2/...[<TAB>GOLD]
//   <blank line>

#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "patparse/error.hpp"
#include "patparse/tagset.hpp"

namespace patparse {

struct Token {
  std::string form;
  std::vector<Tag> candidates; // input order is the final tie-breaker downstream
  std::optional<Tag> gold;

  bool ambiguous() const { return candidates.size() > 1; }
  std::size_t index_of(const Tag &t) const {
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (candidates[i] == t) return i;
    return candidates.size();
  }

  friend bool operator==(const Token &, const Token &) = default;
};

struct Sentence {
  std::string id;
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  friend bool operator==(const Sentence &, const Sentence &) = default;
};

/// One tag per token.
using Reading = std::vector<Tag>;

struct Corpus {
  std::string name;
  std::vector<Sentence> sentences;

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const auto &s : sentences) n += s.tokens.size();
    return n;
  }
  friend bool operator==(const Corpus &, const Corpus &) = default;
};

enum class ReadMode { gold, ambiguous };

inline bool is_punctuation(const Token &t) {
  return t.candidates.size() == 1 && t.candidates.front() == punct_tag();
}

inline bool is_reading_of(const Sentence &s, const Reading &r) {
  if (r.size() != s.tokens.size()) return false;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (s.tokens[i].index_of(r[i]) == s.tokens[i].candidates.size()) return false;
  return true;
}

/// The gold tags of a sentence as a reading; MissingGold if any token lacks one.
inline Reading gold_reading(const Sentence &s) {
  Reading r;
  r.reserve(s.tokens.size());
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    if (!s.tokens[i].gold)
      fail("MissingGold", "sentence " + s.id + " token " + std::to_string(i) + " has no gold tag");
    r.push_back(*s.tokens[i].gold);
  }
  return r;
}

inline Corpus read_corpus(std::istream &in, ReadMode mode, std::string name = {}) {
  Corpus corpus;
  corpus.name = std::move(name);
  std::set<std::string> seen_ids;
  Sentence current;
  std::optional<std::string> pending_id;
  std::size_t lineno = 0;

  auto bad = [&](const std::string &code, const std::string &what) {
    fail(code, "line " + std::to_string(lineno) + ": " + what);
  };
  auto close_sentence = [&] {
    if (current.tokens.empty()) {
      if (pending_id) bad("EmptySentence", "sentence " + *pending_id + " has no tokens");
      return;
    }
    current.id = pending_id ? *pending_id : "s" + std::to_string(corpus.sentences.size() + 1);
    if (!seen_ids.insert(current.id).second) bad("DuplicateSentenceId", "duplicate sentence id " + current.id);
    corpus.sentences.push_back(std::move(current));
    current = Sentence{};
    pending_id.reset();
  };

  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (detail::trim(line).empty()) {
      close_sentence();
      continue;
    }
    if (line.find('\t') == std::string::npos) {
      if (line.front() != '#') bad("MalformedLine", "expected form<TAB>tags, got '" + line + "'");
      std::string_view body = detail::trim(std::string_view(line).substr(1));
      if (body.rfind("id=", 0) == 0) {
        if (!current.tokens.empty()) bad("MalformedLine", "sentence id inside a sentence");
        std::string id(detail::trim(body.substr(3)));
        if (id.empty()) bad("MalformedLine", "empty sentence id");
        pending_id = std::move(id);
      }
      continue;
    }

    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
      auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() > 3) bad("MalformedLine", "too many columns");
    Token tok;
    tok.form = cols[0];
    if (tok.form.empty()) bad("MalformedLine", "empty word form");
    try {
      std::size_t pos = 0;
      const std::string &tags = cols[1];
      for (;;) {
        auto slash = tags.find('/', pos);
        Tag t = parse_tag(std::string_view(tags).substr(pos, slash == std::string::npos ? std::string::npos : slash - pos));
        if (tok.index_of(t) != tok.candidates.size()) bad("MalformedLine", "duplicate candidate " + t.symbol());
        tok.candidates.push_back(std::move(t));
        if (slash == std::string::npos) break;
        pos = slash + 1;
      }
      if (cols.size() == 3) tok.gold = parse_tag(cols[2]);
    } catch (const Error &e) {
      if (e.code() == "MalformedTag") bad("MalformedLine", e.what());
      throw;
    }
    if (mode == ReadMode::gold) {
      if (tok.candidates.size() != 1) bad("GoldModeAmbiguity", "token '" + tok.form + "' has several tags in a gold corpus");
      if (tok.gold && *tok.gold != tok.candidates.front()) bad("MalformedLine", "gold column disagrees with tag");
      tok.gold = tok.candidates.front();
    }
    current.tokens.push_back(std::move(tok));
  }
  close_sentence();
  return corpus;
}

inline void write_corpus(const Corpus &corpus, std::ostream &out, bool include_gold) {
  for (const auto &s : corpus.sentences) {
    out << "# id=" << s.id << '\n';
    for (const auto &t : s.tokens) {
      out << t.form << '\t';
      for (std::size_t i = 0; i < t.candidates.size(); ++i) out << (i ? "/" : "") << t.candidates[i].symbol();
      if (include_gold && t.gold) out << '\t' << t.gold->symbol();
      out << '\n';
    }
    out << '\n';
  }
}

/// Product of candidate-set sizes, saturating at the max of uint64.
inline std::uint64_t reading_count(const Sentence &s) {
  std::uint64_t n = 1;
  for (const auto &t : s.tokens) {
    std::uint64_t k = t.candidates.size();
    if (k != 0 && n > std::numeric_limits<std::uint64_t>::max() / k) return std::numeric_limits<std::uint64_t>::max();
    n *= k;
  }
  return n;
}

inline void check_reading_cap(const Sentence &s, std::uint64_t cap) {
  std::uint64_t n = reading_count(s);
  if (n > cap)
    fail("TooManyReadings", "sentence " + s.id + " has " + std::to_string(n) + " readings (cap " + std::to_string(cap) + ")");
}

/// All readings, leftmost token varying slowest.
inline std::vector<Reading> enumerate_readings(const Sentence &s, std::uint64_t cap) {
  if (cap < 1) fail("InvalidParams", "reading cap must be >= 1");
  check_reading_cap(s, cap);
  std::vector<Reading> out;
  out.reserve(static_cast<std::size_t>(reading_count(s)));
  const std::size_t n = s.tokens.size();
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    Reading r;
    r.reserve(n);
    for (std::size_t i = 0; i < n; ++i) r.push_back(s.tokens[i].candidates[idx[i]]);
    out.push_back(std::move(r));
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++idx[i] < s.tokens[i].candidates.size()) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
    if (n == 0) return out;
  }
}

struct CorpusStats {
  std::size_t words = 0;     // punctuation excluded
  std::size_t ambiguous = 0; // >= 2 candidates
  std::size_t errors = 0;    // gold not among candidates
  bool gold_complete = true;

  double ambiguity_rate() const { return words ? double(ambiguous) / double(words) : 0.0; }
  std::optional<double> error_rate() const {
    if (!gold_complete) return std::nullopt;
    return words ? double(errors) / double(words) : 0.0;
  }
};

inline CorpusStats corpus_stats(const Corpus &c, bool count_punctuation = false) {
  CorpusStats st;
  for (const auto &s : c.sentences)
    for (const auto &t : s.tokens) {
      if (!count_punctuation && is_punctuation(t)) continue;
      ++st.words;
      if (t.ambiguous()) ++st.ambiguous;
      if (!t.gold)
        st.gold_complete = false;
      else if (t.index_of(*t.gold) == t.candidates.size())
        ++st.errors;
    }
  return st;
}

} // namespace patparse
