#include <gtest/gtest.h>

#include <sstream>

#include "patparse/eval.hpp"
#include "support/test_support.hpp"

using namespace patparse;
using patparse::testing::corpus_from_text;

namespace {

std::string code_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  return "";
}

// n tokens, the first `wrong` of them mispredicted
std::pair<Corpus, Corpus> sample(const std::string &id, std::size_t n, std::size_t wrong) {
  Corpus gold{id, {Sentence{id, {}}}}, pred{id, {Sentence{id, {}}}};
  for (std::size_t i = 0; i < n; ++i) {
    Token g{"w" + std::to_string(i), {Tag{"A"}, Tag{"B"}}, Tag{"A"}};
    Token p{g.form, {Tag{i < wrong ? "B" : "A"}}, std::nullopt};
    gold.sentences[0].tokens.push_back(g);
    pred.sentences[0].tokens.push_back(p);
  }
  return {gold, pred};
}

Corpus single_tags(const Corpus &c) {
  Corpus out = c;
  for (auto &s : out.sentences)
    for (auto &t : s.tokens) {
      t.candidates = {*t.gold};
      t.gold.reset();
    }
  return out;
}

} // namespace

TEST(Eval, SuccessRateExamples) {
  auto [gold, pred] = sample("t", 10, 0);
  EXPECT_DOUBLE_EQ(success_rate(pred, gold), 1.0);
  auto [g2, p2] = sample("t", 10, 1);
  EXPECT_DOUBLE_EQ(success_rate(p2, g2), 0.9);
}

TEST(Eval, IdentityOnDisambiguatedCorpus) {
  patparse::testing::Gen gen(6);
  for (int i = 0; i < 20; ++i) {
    auto c = gen.gold_corpus({"A", "B", "C"}, 10, 8);
    EXPECT_DOUBLE_EQ(success_rate(single_tags(c), c), 1.0);
  }
}

TEST(Eval, CountsAmbiguityAndErrors) {
  auto gold = corpus_from_text("# id=x\na\tA/B\tA\nb\tC\tD\n.\tPUNCT\n", ReadMode::ambiguous);
  auto pred = corpus_from_text("# id=x\na\tA\nb\tC\n.\tPUNCT\n", ReadMode::ambiguous);
  auto c = evaluate(gold, pred);
  EXPECT_EQ(c.words, 2u);
  EXPECT_EQ(c.ambiguous, 1u);
  EXPECT_EQ(c.errors, 1u);
  EXPECT_EQ(c.correct, 1u);
  EXPECT_EQ(evaluate(gold, pred, true).words, 3u);
}

TEST(Eval, AlignmentErrors) {
  auto gold = corpus_from_text("# id=x\na\tA\tA\nb\tB\tB\n", ReadMode::ambiguous);
  EXPECT_EQ(code_of([&] { evaluate(gold, corpus_from_text("# id=y\na\tA\nb\tB\n", ReadMode::ambiguous)); }), "AlignmentMismatch");
  EXPECT_EQ(code_of([&] { evaluate(gold, corpus_from_text("# id=x\na\tA\nc\tB\n", ReadMode::ambiguous)); }), "AlignmentMismatch");
  EXPECT_EQ(code_of([&] { evaluate(gold, corpus_from_text("# id=x\na\tA\n", ReadMode::ambiguous)); }), "AlignmentMismatch");
  EXPECT_EQ(code_of([&] { evaluate(gold, corpus_from_text("# id=x\na\tA\nb\tB\n\n# id=z\nc\tC\n", ReadMode::ambiguous)); }),
            "AlignmentMismatch");
  EXPECT_EQ(code_of([&] { evaluate(gold, corpus_from_text("# id=x\na\tA/B\nb\tB\n", ReadMode::ambiguous)); }), "NotDisambiguated");
  auto no_gold = corpus_from_text("# id=x\na\tA/B\nb\tB\n", ReadMode::ambiguous);
  EXPECT_EQ(code_of([&] { evaluate(no_gold, corpus_from_text("# id=x\na\tA\nb\tB\n", ReadMode::ambiguous)); }), "MissingGold");
}

TEST(Eval, MicroAveragedTotals) {
  auto [g1, p1] = sample("a", 10, 0);
  auto [g2, p2] = sample("b", 10, 2);
  auto r = build_report({{"a", &g1, &p1}, {"b", &g2, &p2}});
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_DOUBLE_EQ(r.total.counts.success_rate(), 0.9);
  EXPECT_EQ(format_percent(r.total.counts.success_rate()), "90.0 %");

  auto [g3, p3] = sample("c", 30, 3);
  auto single = build_report({{"c", &g3, &p3}});
  EXPECT_EQ(single.total.counts.words, single.rows[0].counts.words);
  EXPECT_EQ(single.total.counts.correct, single.rows[0].counts.correct);
}

TEST(Eval, FigureOneWordTotal) {
  std::vector<std::pair<Corpus, Corpus>> s;
  for (auto [name, n] : std::vector<std::pair<std::string, std::size_t>>{{"t1", 1734}, {"t2", 1674}, {"t3", 1599}, {"t4", 2309}})
    s.push_back(sample(name, n, n / 10));
  std::vector<EvalSample> samples;
  for (auto &[g, p] : s) samples.push_back({g.name, &g, &p});
  auto r = build_report(samples);
  EXPECT_EQ(r.total.counts.words, 7316u);
}

TEST(Eval, TotalsArePermutationInvariantAndPooled) {
  patparse::testing::Gen gen(12);
  std::vector<std::pair<Corpus, Corpus>> s;
  for (int i = 0; i < 5; ++i) s.push_back(sample("s" + std::to_string(i), 1 + gen.below(40), gen.below(5)));
  std::vector<EvalSample> fwd, rev;
  Corpus pooled_gold, pooled_pred;
  for (auto &[g, p] : s) {
    fwd.push_back({g.name, &g, &p});
    pooled_gold.sentences.push_back(g.sentences[0]);
    pooled_pred.sentences.push_back(p.sentences[0]);
  }
  rev.assign(fwd.rbegin(), fwd.rend());
  auto a = build_report(fwd), b = build_report(rev);
  auto pooled = evaluate(pooled_gold, pooled_pred);
  EXPECT_EQ(a.total.counts.words, b.total.counts.words);
  EXPECT_EQ(a.total.counts.correct, b.total.counts.correct);
  EXPECT_EQ(a.total.counts.words, pooled.words);
  EXPECT_EQ(a.total.counts.correct, pooled.correct);
  EXPECT_EQ(a.total.counts.ambiguous, pooled.ambiguous);
}

TEST(Eval, SplitByText) {
  auto c = corpus_from_text("# id=wsj:1\na\tA\n\n# id=hb:1\nb\tB\n\n# id=wsj:2\nc\tC\n\n# id=lone\nd\tD\n", ReadMode::gold);
  auto parts = split_by_text(c);
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[0].name, "wsj");
  EXPECT_EQ(parts[0].sentences.size(), 2u);
  EXPECT_EQ(parts[1].name, "hb");
  EXPECT_EQ(parts[2].name, "lone");
}

TEST(Eval, Rendering) {
  auto [g, p] = sample("wsj", 200, 23);
  auto r = build_report({{"wsj", &g, &p}});
  std::ostringstream table, csv;
  render_report_table(r, table);
  render_report_csv(r, csv);
  EXPECT_NE(table.str().find("88.5 %"), std::string::npos);
  EXPECT_EQ(csv.str(), "text,words,ambiguity_rate,error_rate,success_rate\nwsj,200,100.0,0.0,88.5\ntotal,200,100.0,0.0,88.5\n");
}
