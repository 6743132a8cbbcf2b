#pragma once

// Per-text evaluation: word counts, ambiguity and error rates of the
// analyser output, and success rates of the disambiguated output.

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "patparse/corpus.hpp"
#include "patparse/error.hpp"

namespace patparse {

struct EvalCounts {
  std::size_t words = 0;
  std::size_t ambiguous = 0;
  std::size_t errors = 0;
  std::size_t correct = 0;

  double ambiguity_rate() const { return words ? double(ambiguous) / double(words) : 0.0; }
  double error_rate() const { return words ? double(errors) / double(words) : 0.0; }
  double success_rate() const { return words ? double(correct) / double(words) : 0.0; }

  EvalCounts &operator+=(const EvalCounts &o) {
    words += o.words;
    ambiguous += o.ambiguous;
    errors += o.errors;
    correct += o.correct;
    return *this;
  }
};

struct EvalRow {
  std::string name;
  EvalCounts counts;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  EvalRow total{"total", {}};
};

/// A named sample: `gold` carries the analyser's candidates plus gold tags,
/// `pred` the disambiguated output for the same tokens.
struct EvalSample {
  std::string name;
  const Corpus *gold = nullptr;
  const Corpus *pred = nullptr;
};

namespace detail {

inline const Tag &gold_tag(const Sentence &s, std::size_t i) {
  const Token &t = s.tokens[i];
  if (t.gold) return *t.gold;
  if (t.candidates.size() == 1) return t.candidates.front();
  fail("MissingGold", "sentence " + s.id + " token " + std::to_string(i) + " is ambiguous and has no gold tag");
}

[[noreturn]] inline void misaligned(const std::string &id, std::size_t pos, const std::string &what) {
  fail("AlignmentMismatch", "sentence " + id + " position " + std::to_string(pos) + ": " + what);
}

} // namespace detail

inline EvalCounts evaluate(const Corpus &gold, const Corpus &pred, bool count_punctuation = false) {
  EvalCounts c;
  const std::size_t ns = std::min(gold.sentences.size(), pred.sentences.size());
  for (std::size_t si = 0; si < ns; ++si) {
    const Sentence &g = gold.sentences[si];
    const Sentence &p = pred.sentences[si];
    if (g.id != p.id) detail::misaligned(g.id, 0, "predicted sentence id is " + p.id);
    const std::size_t nt = std::min(g.tokens.size(), p.tokens.size());
    for (std::size_t i = 0; i < nt; ++i) {
      const Token &gt = g.tokens[i];
      const Token &pt = p.tokens[i];
      if (gt.form != pt.form) detail::misaligned(g.id, i, "form '" + gt.form + "' vs '" + pt.form + "'");
      if (pt.candidates.size() != 1)
        fail("NotDisambiguated", "sentence " + p.id + " position " + std::to_string(i) + " still has several tags");
      if (!count_punctuation && is_punctuation(gt)) continue;
      const Tag &want = detail::gold_tag(g, i);
      ++c.words;
      if (gt.ambiguous()) ++c.ambiguous;
      if (gt.index_of(want) == gt.candidates.size()) ++c.errors;
      if (pt.candidates.front() == want) ++c.correct;
    }
    if (g.tokens.size() != p.tokens.size())
      detail::misaligned(g.id, nt, std::to_string(g.tokens.size()) + " gold tokens vs " + std::to_string(p.tokens.size()) + " predicted");
  }
  if (gold.sentences.size() != pred.sentences.size()) {
    const Corpus &longer = gold.sentences.size() > pred.sentences.size() ? gold : pred;
    detail::misaligned(longer.sentences[ns].id, 0, "sentence missing from the " + std::string(&longer == &gold ? "prediction" : "gold corpus"));
  }
  return c;
}

inline double success_rate(const Corpus &pred, const Corpus &gold, bool count_punctuation = false) {
  return evaluate(gold, pred, count_punctuation).success_rate();
}

/// One row per sample; the total row pools the token counts.
inline EvalReport build_report(const std::vector<EvalSample> &samples, bool count_punctuation = false) {
  EvalReport report;
  for (const auto &s : samples) {
    EvalRow row{s.name, evaluate(*s.gold, *s.pred, count_punctuation)};
    report.total.counts += row.counts;
    report.rows.push_back(std::move(row));
  }
  return report;
}

/// Splits a corpus by text name: the sentence id prefix before the first ':'
/// (the whole id when there is none), in order of first appearance.
inline std::vector<Corpus> split_by_text(const Corpus &c) {
  std::vector<Corpus> out;
  std::map<std::string, std::size_t> where;
  for (const auto &s : c.sentences) {
    std::string text = s.id.substr(0, s.id.find(':'));
    auto [it, fresh] = where.emplace(text, out.size());
    if (fresh) out.push_back(Corpus{text, {}});
    out[it->second].sentences.push_back(s);
  }
  return out;
}

inline std::string format_percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f %%", v * 100.0);
  return buf;
}

inline void render_report_table(const EvalReport &r, std::ostream &out) {
  std::size_t w = 5;
  for (const auto &row : r.rows) w = std::max(w, row.name.size());
  auto pad = [](std::string s, std::size_t width, bool right) {
    if (s.size() >= width) return s;
    return right ? std::string(width - s.size(), ' ') + s : s + std::string(width - s.size(), ' ');
  };
  auto line = [&](const EvalRow &row) {
    out << pad(row.name, w, false) << "  " << pad(std::to_string(row.counts.words), 8, true) << "  "
        << pad(format_percent(row.counts.ambiguity_rate()), 10, true) << "  " << pad(format_percent(row.counts.error_rate()), 8, true)
        << "  " << pad(format_percent(row.counts.success_rate()), 8, true) << '\n';
  };
  out << pad("text", w, false) << "  " << pad("words", 8, true) << "  " << pad("ambiguity", 10, true) << "  " << pad("error", 8, true)
      << "  " << pad("success", 8, true) << '\n';
  for (const auto &row : r.rows) line(row);
  line(r.total);
}

inline void render_report_csv(const EvalReport &r, std::ostream &out) {
  auto pct = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v * 100.0);
    return std::string(buf);
  };
  out << "text,words,ambiguity_rate,error_rate,success_rate\n";
  auto line = [&](const EvalRow &row) {
    out << row.name << ',' << row.counts.words << ',' << pct(row.counts.ambiguity_rate()) << ',' << pct(row.counts.error_rate()) << ','
        << pct(row.counts.success_rate()) << '\n';
  };
  for (const auto &row : r.rows) line(row);
  line(r.total);
}

} // namespace patparse
