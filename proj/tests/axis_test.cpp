#include <gtest/gtest.h>

#include "patparse/axis.hpp"
#include "support/test_support.hpp"

using namespace patparse;
using patparse::testing::gold_sentence;
using patparse::testing::projection_of;

namespace {

LayerSpec layer(const std::string &id, std::initializer_list<const char *> tags) {
  LayerSpec spec;
  spec.id = id;
  for (const char *t : tags) spec.tagset.insert(Tag{t});
  return spec;
}

std::string code_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  return "";
}

const Sentence &worked() {
  static const Sentence s = patparse::testing::load_fixture("fixtures/worked_sentence.vrt", ReadMode::gold).sentences.at(0);
  return s;
}

std::string raw(const Sentence &s, const LayerSpec &spec) { return render_axis(extract_axis(s, spec)); }
std::string general(const Sentence &s, const LayerSpec &spec) { return render_axis(generalize_repeats(extract_axis(s, spec))); }

} // namespace

TEST(Axis, RenderParseRoundTrip) {
  for (const char *text : {"SUBJ", "... SUBJ +FAUXV ... SUBJ ...", "[ ... -FMAINV ]+", "A [ B [ C ... D ]+ ]+ ... E"}) {
    EXPECT_EQ(render_elements(parse_elements(text)), text);
  }
}

TEST(Axis, ParseRejectsMalformed) {
  auto check = [](const char *text) { validate_axis(Axis{"l", parse_elements(text)}); };
  EXPECT_EQ(code_of([&] { check("[ A"); }), "MalformedAxis");
  EXPECT_EQ(code_of([&] { check("A ]+"); }), "MalformedAxis");
  EXPECT_EQ(code_of([&] { check("A ... ..."); }), "MalformedAxis");
  EXPECT_EQ(code_of([&] { check("[ ... ]+ A"); }), "MalformedAxis");
  EXPECT_EQ(code_of([&] { check("[ [ A ]+ ]+"); }), "MalformedAxis");
  EXPECT_EQ(code_of([&] { check("A <s>"); }), "MalformedAxis");
  EXPECT_EQ(code_of([&] { check("..."); }), "NoSymbolInAxis");
  EXPECT_EQ(code_of([&] { check(""); }), "NoSymbolInAxis");
  std::set<std::string> alphabet{"SUBJ"};
  EXPECT_EQ(code_of([&] { validate_axis(Axis{"l", parse_elements("SUBJ ... OBJ")}, &alphabet); }), "MalformedAxis");
}

TEST(Axis, ProjectionRules) {
  auto s = gold_sentence("the/DN> cat/SUBJ sleeps/+FMAINV");
  EXPECT_EQ(render_elements(project_sentence(gold_reading(s), layer("l", {"SUBJ", "+FMAINV"}))), "... SUBJ +FMAINV");
  EXPECT_EQ(render_elements(project_sentence(gold_reading(s), layer("l", {"OBJ"}))), "...");
  auto t = gold_sentence("cat/SUBJ a/DN> b/AN> sleeps/+FMAINV c/ADVL");
  EXPECT_EQ(render_elements(project_sentence(gold_reading(t), layer("l", {"SUBJ", "+FMAINV"}))), "SUBJ ... +FMAINV ...");
}

TEST(Axis, ProjectionAppliesClasses) {
  auto spec = layer("l", {"-FMAINV", "<P-FMAINV", "OBJ"});
  spec.eq.add_class("nonfinv", {Tag{"-FMAINV"}, Tag{"<P-FMAINV"}});
  auto s = gold_sentence("to/INFMARK> go/-FMAINV by/ADVL seeing/<P-FMAINV it/OBJ");
  EXPECT_EQ(render_elements(project_sentence(gold_reading(s), spec)), "... nonfinv ... nonfinv OBJ");
  EXPECT_EQ(spec.alphabet(), (std::set<std::string>{"nonfinv", "OBJ"}));
}

TEST(Axis, ExtractNeedsASymbol) {
  auto s = gold_sentence("yes/ADVL");
  EXPECT_EQ(code_of([&] { extract_axis(s, layer("l", {"SUBJ"})); }), "NoSymbolInAxis");
  Sentence ungold = patparse::testing::ambiguous_sentence("x/SUBJ|OBJ");
  EXPECT_EQ(code_of([&] { extract_axis(ungold, layer("l", {"SUBJ"})); }), "MissingGold");
}

TEST(Axis, WorkedSentenceSubjectLayer) {
  EXPECT_EQ(raw(worked(), layer("t1", {"SUBJ", "+FAUXV", "+FMAINV"})), "SUBJ +FAUXV ... SUBJ ...");
}

TEST(Axis, WorkedSentenceVerbLayer) {
  auto spec = layer("t2", {"+FAUXV", "+FMAINV", "-FMAINV", "INFMARK>"});
  EXPECT_EQ(raw(worked(), spec), "... +FAUXV ... -FMAINV ... -FMAINV ... -FMAINV ... -FMAINV ... INFMARK> -FMAINV ...");
  EXPECT_EQ(general(worked(), spec), "... +FAUXV [ ... -FMAINV ]+ ... INFMARK> -FMAINV ...");
}

TEST(Axis, WorkedSentenceClauseLayer) {
  auto spec = layer("t3", {"-FMAINV", "<NOM-FMAINV", "+FAUXV", "SUBJ", "OBJ"});
  EXPECT_EQ(general(worked(), spec),
            "SUBJ +FAUXV [ ... -FMAINV ... OBJ ]+ ... <NOM-FMAINV ... OBJ ... -FMAINV SUBJ ... -FMAINV ...");
  spec.tagset.insert(Tag{"<P-FMAINV"});
  spec.eq.add_class("nonfinv", {Tag{"-FMAINV"}, Tag{"<NOM-FMAINV"}, Tag{"<P-FMAINV"}});
  EXPECT_EQ(general(worked(), spec), "SUBJ +FAUXV [ ... nonfinv ... OBJ ]+ ... nonfinv SUBJ ... nonfinv ...");
}

TEST(Axis, RelaxAdjacency) {
  EXPECT_EQ(render_elements(relax_adjacency(parse_elements("-FMAINV OBJ"))), "-FMAINV ... OBJ");
  EXPECT_EQ(render_elements(relax_adjacency(parse_elements("... SUBJ ..."))), "... SUBJ ...");
  EXPECT_EQ(render_elements(relax_adjacency(parse_elements("SUBJ +FAUXV"))), "SUBJ ... +FAUXV");
}

TEST(Axis, GeneralizeSmallCases) {
  auto g = [](const char *text) { return render_elements(generalize_repeats(parse_elements(text))); };
  EXPECT_EQ(g("SUBJ +FAUXV ... OBJ"), "SUBJ +FAUXV ... OBJ");
  EXPECT_EQ(g("A A A"), "[ A ]+");
  EXPECT_EQ(g("X A B A B Y"), "X [ A B ]+ Y");
  EXPECT_EQ(g("A ... A"), "[ ... A ]+");
  EXPECT_EQ(g("A B A B A B A B"), "[ A B ]+");
  EXPECT_EQ(g("A A B A A B"), "[ [ A ]+ B ]+");
}

TEST(Axis, GeneralizeIsIdempotent) {
  patparse::testing::Gen gen(21);
  const std::vector<std::string> alpha{"A", "B", "C"};
  for (int i = 0; i < 500; ++i) {
    auto e = gen.axis_elements(alpha, 10, 0);
    auto once = generalize_repeats(e);
    ASSERT_EQ(generalize_repeats(once), once) << render_elements(e);
    ASSERT_NO_THROW(detail::check_elements(once, nullptr)) << render_elements(once);
  }
}

TEST(Axis, MatchingExamples) {
  auto worked_axis = parse_elements("... SUBJ +FAUXV ... SUBJ ...");
  EXPECT_TRUE(axis_matches(worked_axis, projection_of("... SUBJ +FAUXV ... SUBJ ...")));
  EXPECT_TRUE(axis_matches(worked_axis, projection_of("SUBJ +FAUXV ... SUBJ ...")));
  EXPECT_FALSE(axis_matches(worked_axis, projection_of("SUBJ +FAUXV ... SUBJ ..."), true));
  EXPECT_FALSE(axis_matches(parse_elements("SUBJ +FMAINV"), projection_of("SUBJ ... +FMAINV")));
  EXPECT_TRUE(axis_matches(parse_elements("+FAUXV [ ... -FMAINV ]+"), projection_of("+FAUXV ... -FMAINV ... -FMAINV")));
  EXPECT_FALSE(axis_matches(parse_elements("+FAUXV [ ... -FMAINV ]+"), projection_of("+FAUXV")));
}

TEST(Axis, ExtractionIsSelfMatching) {
  patparse::testing::Gen gen(8);
  auto corpus = gen.gold_corpus({"A", "B", "C", "D", "E"}, 300, 12);
  auto spec = layer("l", {"A", "B", "C"});
  for (const auto &s : corpus.sentences) {
    auto proj = project_sentence(gold_reading(s), spec);
    if (!detail::contains_sym(proj)) continue;
    auto axis = extract_axis(s, spec);
    ASSERT_TRUE(axis_matches(axis, proj));
    ASSERT_TRUE(axis_matches(axis, proj, true));
    ASSERT_TRUE(axis_matches(generalize_repeats(axis), proj)) << render_axis(generalize_repeats(axis));
  }
}

TEST(Axis, MatcherAgreesWithBruteForce) {
  patparse::testing::Gen gen(99);
  const std::vector<std::string> alpha{"A", "B"};
  int positives = 0;
  for (int i = 0; i < 3000; ++i) {
    auto axis = gen.axis_elements(alpha, 4, 2);
    auto proj = gen.projection(alpha, 7);
    for (bool strict : {false, true}) {
      bool expect = patparse::testing::brute_force_matches(axis, proj, strict);
      positives += expect;
      ASSERT_EQ(axis_matches(axis, proj, strict), expect) << render_elements(axis) << " vs " << render_elements(proj);
    }
  }
  EXPECT_GT(positives, 50);
}

TEST(Axis, WideningProperties) {
  patparse::testing::Gen gen(1234);
  const std::vector<std::string> alpha{"A", "B", "C"};
  for (int i = 0; i < 1000; ++i) {
    auto axis = gen.axis_elements(alpha, 8, 0);
    auto relaxed = relax_adjacency(axis);
    auto general = generalize_repeats(axis);
    for (int k = 0; k < 10; ++k) {
      auto proj = gen.projection(alpha, 9);
      if (axis_matches(axis, proj)) {
        ASSERT_TRUE(axis_matches(relaxed, proj)) << render_elements(axis);
        ASSERT_TRUE(axis_matches(general, proj)) << render_elements(axis) << " -> " << render_elements(general);
      }
    }
  }
}
