#pragma once

// Synthetic tagged English-like sentences and a deterministic confusion
// procedure that turns a gold corpus into analyser-style ambiguous input.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "patparse/corpus.hpp"
#include "patparse/error.hpp"
#include "patparse/tagset.hpp"

namespace patparse {

struct SynthOptions {
  std::size_t sentences = 50;
  std::size_t max_words = 10; // punctuation not counted
  std::uint64_t seed = 1;
  std::string id_prefix = "syn";
};

struct AmbiguateOptions {
  std::uint64_t seed = 7;
  double probability = 1.0; // chance that a word gains distractors
  std::size_t min_distractors = 1;
  std::size_t max_distractors = 2;
};

namespace detail {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool chance(double p) { return double(engine_() >> 11) * 0x1.0p-53 < p; }
  template <class T> const T &pick(const std::vector<T> &v) { return v[below(v.size())]; }

private:
  std::mt19937_64 engine_;
};

struct SentenceBuilder {
  Sentence s;
  std::size_t words = 0;
  void add(std::string form, std::string_view tag) {
    Tag t{std::string(tag)};
    s.tokens.push_back(Token{std::move(form), {t}, t});
    if (t != punct_tag()) ++words;
  }
};

struct Lexicon {
  std::vector<std::string> det{"the", "a", "this", "every"};
  std::vector<std::string> quant{"some", "two", "many", "more"};
  std::vector<std::string> gen{"his", "their", "my", "our"};
  std::vector<std::string> adj{"old", "new", "small", "local", "fair", "blue", "serious"};
  std::vector<std::string> premod{"car", "child", "city", "school", "water", "capital"};
  std::vector<std::string> noun{"man", "woman", "council", "rule", "report", "dog", "book", "letter", "house", "industry", "plan", "benefit"};
  std::vector<std::string> subj_pron{"he", "she", "they", "we", "I"};
  std::vector<std::string> obj_pron{"him", "her", "them", "us"};
  std::vector<std::string> verb_fin{"gives", "sees", "reads", "wants", "finds", "makes", "sells", "likes", "relaxes"};
  std::vector<std::string> verb_inf{"give", "see", "read", "find", "make", "sell", "help", "spend", "increase"};
  std::vector<std::string> aux{"would", "can", "will", "may", "must"};
  std::vector<std::string> cop{"is", "was", "seems"};
  std::vector<std::string> prep{"in", "with", "on", "for", "near"};
  std::vector<std::string> adverb{"also", "then", "today", "often", "soon"};
  std::vector<std::string> intens{"very", "quite", "rather", "much"};
  std::vector<std::string> compl_adj{"happy", "ready", "late", "busy", "attentive"};
  std::vector<std::string> coord{"and", "but"};
};

inline void noun_phrase(SentenceBuilder &b, Rng &rng, const Lexicon &lx, std::string_view role, bool allow_post) {
  if ((role == "SUBJ" || role == "OBJ") && rng.chance(0.3)) {
    b.add(rng.pick(role == "SUBJ" ? lx.subj_pron : lx.obj_pron), role);
    return;
  }
  std::size_t det_kind = rng.below(5);
  if (det_kind <= 2) b.add(rng.pick(lx.det), "DN>");
  else if (det_kind == 3) b.add(rng.pick(lx.quant), "QN>");
  else b.add(rng.pick(lx.gen), "GN>");
  if (rng.chance(0.45)) b.add(rng.pick(lx.adj), "AN>");
  if (rng.chance(0.35)) b.add(rng.pick(lx.premod), "NN>");
  b.add(rng.pick(lx.noun), role);
  if (allow_post && rng.chance(0.2)) {
    if (rng.chance(0.5)) b.add("of", "<NOM-OF");
    else b.add(rng.pick(lx.prep), "<NOM");
    noun_phrase(b, rng, lx, "<P", false);
  }
}

inline SentenceBuilder synth_sentence(Rng &rng, const Lexicon &lx) {
  SentenceBuilder b;
  switch (rng.below(7)) {
  case 0:
    noun_phrase(b, rng, lx, "SUBJ", true);
    b.add(rng.pick(lx.verb_fin), "+FMAINV");
    noun_phrase(b, rng, lx, "OBJ", true);
    if (rng.chance(0.5)) {
      if (rng.chance(0.5)) {
        b.add(rng.pick(lx.adverb), "ADVL");
      } else {
        b.add(rng.pick(lx.prep), "ADVL");
        noun_phrase(b, rng, lx, "<P", false);
      }
    }
    break;
  case 1:
    noun_phrase(b, rng, lx, "SUBJ", true);
    b.add(rng.pick(lx.aux), "+FAUXV");
    if (rng.chance(0.4)) b.add(rng.pick(lx.adverb), "ADVL");
    b.add(rng.pick(lx.verb_inf), "-FMAINV");
    noun_phrase(b, rng, lx, "OBJ", true);
    break;
  case 2:
    noun_phrase(b, rng, lx, "SUBJ", true);
    b.add(rng.pick(lx.cop), "+FMAINV");
    if (rng.chance(0.5)) b.add(rng.pick(lx.intens), "AD-A>");
    b.add(rng.pick(lx.compl_adj), "PCOMPL-S");
    break;
  case 3:
    noun_phrase(b, rng, lx, "SUBJ", false);
    b.add("gives", "+FMAINV");
    b.add(rng.pick(lx.obj_pron), "I-OBJ");
    noun_phrase(b, rng, lx, "OBJ", false);
    break;
  case 4:
    noun_phrase(b, rng, lx, "SUBJ", false);
    b.add(rng.pick(lx.verb_fin), "+FMAINV");
    b.add("to", "INFMARK>");
    b.add(rng.pick(lx.verb_inf), "-FMAINV");
    noun_phrase(b, rng, lx, "OBJ", false);
    break;
  case 5:
    b.add(rng.pick(lx.adverb), "ADVL");
    b.add(",", "PUNCT");
    noun_phrase(b, rng, lx, "SUBJ", false);
    b.add(rng.pick(lx.verb_fin), "+FMAINV");
    noun_phrase(b, rng, lx, "OBJ", false);
    break;
  default:
    noun_phrase(b, rng, lx, "SUBJ", false);
    b.add(rng.pick(lx.verb_fin), "+FMAINV");
    noun_phrase(b, rng, lx, "OBJ", false);
    b.add(rng.pick(lx.coord), "CC");
    b.add(rng.pick(lx.verb_fin), "+FMAINV");
    noun_phrase(b, rng, lx, "OBJ", false);
    break;
  }
  b.add(".", "PUNCT");
  return b;
}

// Plausible analyser confusions for each tag.
inline const std::map<std::string, std::vector<std::string>> &confusions() {
  static const std::map<std::string, std::vector<std::string>> table{
      {"SUBJ", {"OBJ", "PCOMPL-S", "I-OBJ", "NN>"}},
      {"OBJ", {"SUBJ", "I-OBJ", "PCOMPL-O", "<P", "NN>"}},
      {"I-OBJ", {"OBJ", "SUBJ"}},
      {"PCOMPL-S", {"OBJ", "<NOM", "AN>"}},
      {"AN>", {"NN>", "PCOMPL-S", "SUBJ"}},
      {"NN>", {"AN>", "SUBJ", "OBJ", "<P"}},
      {"DN>", {"QN>", "GN>"}},
      {"QN>", {"DN>", "SUBJ", "ADVL"}},
      {"GN>", {"DN>", "OBJ"}},
      {"+FMAINV", {"-FMAINV", "OBJ", "SUBJ"}},
      {"-FMAINV", {"+FMAINV", "<NOM-FMAINV", "<P-FMAINV"}},
      {"+FAUXV", {"-FAUXV", "+FMAINV"}},
      {"INFMARK>", {"ADVL", "<NOM"}},
      {"ADVL", {"<NOM", "AD-A>", "CS"}},
      {"<P", {"NN>", "OBJ", "SUBJ"}},
      {"<NOM", {"ADVL", "<NOM-OF"}},
      {"<NOM-OF", {"ADVL", "<NOM"}},
      {"CC", {"CS", "ADVL"}},
      {"AD-A>", {"ADVL", "AN>"}},
  };
  return table;
}

} // namespace detail

/// Gold corpus from a small clause grammar; deterministic in the seed.
inline Corpus synthesize_corpus(const SynthOptions &opt) {
  detail::Rng rng(opt.seed);
  detail::Lexicon lx;
  Corpus c;
  c.name = opt.id_prefix;
  while (c.sentences.size() < opt.sentences) {
    detail::SentenceBuilder b = detail::synth_sentence(rng, lx);
    if (b.words > opt.max_words) continue;
    Sentence &s = b.s;
    char id[64];
    std::snprintf(id, sizeof id, "%s:%04zu", opt.id_prefix.c_str(), c.sentences.size() + 1);
    s.id = id;
    c.sentences.push_back(std::move(s));
  }
  return c;
}

/// Adds distractor candidates to non-punctuation tokens; the gold tag lands
/// at a random position among the candidates and stays in the gold column.
inline Corpus ambiguate(const Corpus &gold, const AmbiguateOptions &opt) {
  detail::Rng rng(opt.seed);
  std::vector<std::string> fallback;
  for (const auto &t : default_inventory().tags()) fallback.push_back(t.symbol());
  Corpus out = gold;
  for (auto &s : out.sentences)
    for (auto &t : s.tokens) {
      if (!t.gold) fail("MissingGold", "sentence " + s.id + " token '" + t.form + "' has no gold tag");
      t.candidates = {*t.gold};
      if (is_punctuation(t) || !rng.chance(opt.probability)) continue;
      const std::size_t span = opt.max_distractors - opt.min_distractors + 1;
      std::size_t want = opt.min_distractors + rng.below(span);
      auto it = detail::confusions().find(t.gold->symbol());
      std::vector<std::string> pool = it != detail::confusions().end() ? it->second : fallback;
      std::vector<Tag> extra;
      while (extra.size() < want && !pool.empty()) {
        std::size_t k = rng.below(pool.size());
        Tag d{pool[k]};
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
        if (d != *t.gold) extra.push_back(d);
      }
      std::size_t at = rng.below(extra.size() + 1);
      extra.insert(extra.begin() + static_cast<std::ptrdiff_t>(at), *t.gold);
      t.candidates = std::move(extra);
    }
  return out;
}

/// Expected accuracy of picking a candidate uniformly at random: mean of
/// 1/|candidates| over non-punctuation tokens (0 for a gold miss).
inline double random_choice_baseline(const Corpus &ambiguous) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto &s : ambiguous.sentences)
    for (const auto &t : s.tokens) {
      if (is_punctuation(t)) continue;
      ++n;
      if (t.gold && t.index_of(*t.gold) != t.candidates.size()) sum += 1.0 / double(t.candidates.size());
    }
  return n ? sum / double(n) : 0.0;
}

} // namespace patparse
