#pragma once

// Syntactic function tags, tag inventories and equivalence-class projection.

#include <algorithm>
#include <array>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "patparse/error.hpp"

namespace patparse {

namespace detail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline void strip_cr(std::string &line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

} // namespace detail

/// An opaque syntactic function tag such as "SUBJ", "+FAUXV" or "<NOM-OF".
/// The sign and angle-bracket characters carry no meaning here.
class Tag {
public:
  Tag() = default;

  explicit Tag(std::string symbol) : symbol_(std::move(symbol)) {
    if (symbol_.empty()) fail("MalformedTag", "empty tag");
    for (char c : symbol_) {
      if (c == '/') fail("MalformedTag", "tag contains '/': " + symbol_);
      if (detail::is_space(c)) fail("MalformedTag", "tag contains whitespace: '" + symbol_ + "'");
    }
  }

  const std::string &symbol() const noexcept { return symbol_; }

  friend bool operator==(const Tag &, const Tag &) = default;
  friend auto operator<=>(const Tag &, const Tag &) = default;

private:
  std::string symbol_;
};

inline std::ostream &operator<<(std::ostream &os, const Tag &t) { return os << t.symbol(); }

/// Candidate tag carried by punctuation tokens; such tokens only ever fall
/// into axis gaps and are left out of rate denominators.
inline const Tag &punct_tag() {
  static const Tag t{"PUNCT"};
  return t;
}

/// Words with structural meaning in the pattern file formats.
inline bool is_reserved_word(std::string_view s) {
  static constexpr std::array<std::string_view, 9> words{"...", "[", "]+", "=", ":", "_", "|", "<s>", "</s>"};
  return std::find(words.begin(), words.end(), s) != words.end();
}

inline Tag parse_tag(std::string_view text) { return Tag{std::string(detail::trim(text))}; }

class TagInventory {
public:
  TagInventory() = default;

  void add(const Tag &tag, std::string gloss = {}) {
    if (!glosses_.emplace(tag, std::move(gloss)).second) fail("DuplicateTag", "duplicate tag: " + tag.symbol());
  }

  bool contains(const Tag &tag) const { return glosses_.count(tag) != 0; }
  bool contains(std::string_view symbol) const {
    return std::any_of(glosses_.begin(), glosses_.end(), [&](const auto &kv) { return kv.first.symbol() == symbol; });
  }
  std::size_t size() const { return glosses_.size(); }
  bool empty() const { return glosses_.empty(); }
  const std::map<Tag, std::string> &entries() const { return glosses_; }

  std::vector<Tag> tags() const {
    std::vector<Tag> out;
    out.reserve(glosses_.size());
    for (const auto &kv : glosses_) out.push_back(kv.first);
    return out;
  }

  friend bool operator==(const TagInventory &, const TagInventory &) = default;

private:
  std::map<Tag, std::string> glosses_;
};

/// Reads "SYMBOL<TAB>gloss" lines; '#' starts a comment line, blank lines are skipped.
inline TagInventory load_inventory(std::istream &in) {
  TagInventory inv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    std::string_view view = line;
    if (detail::trim(view).empty() || detail::trim(view).front() == '#') continue;
    std::string gloss;
    auto tab = view.find('\t');
    std::string_view sym = view;
    if (tab != std::string_view::npos) {
      sym = view.substr(0, tab);
      gloss = std::string(view.substr(tab + 1));
    }
    try {
      inv.add(parse_tag(sym), std::move(gloss));
    } catch (const Error &e) {
      throw Error(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (inv.empty()) fail("EmptyInventory", "inventory declares no tags");
  return inv;
}

inline void write_inventory(const TagInventory &inv, std::ostream &out) {
  for (const auto &[tag, gloss] : inv.entries()) {
    out << tag.symbol();
    if (!gloss.empty()) out << '\t' << gloss;
    out << '\n';
  }
}

/// The ENGCG syntactic tag set.
inline const TagInventory &default_inventory() {
  static const TagInventory inv = [] {
    static constexpr std::pair<std::string_view, std::string_view> rows[] = {
        {"+FAUXV", "Finite Auxiliary Predicate"},
        {"-FAUXV", "Nonfinite Auxiliary Predicate"},
        {"+FMAINV", "Finite Main Predicate"},
        {"-FMAINV", "Nonfinite Main Predicate"},
        {"NPHR", "Stray NP"},
        {"SUBJ", "Subject"},
        {"F-SUBJ", "Formal Subject"},
        {"OBJ", "Object"},
        {"I-OBJ", "Indirect Object"},
        {"PCOMPL-S", "Subject Complement"},
        {"PCOMPL-O", "Object Complement"},
        {"ADVL", "Adverbial"},
        {"O-ADVL", "Object Adverbial"},
        {"APP", "Apposition"},
        {"N", "Title"},
        {"DN>", "Determiner"},
        {"NN>", "Premodifying Noun"},
        {"AN>", "Premodifying Adjective"},
        {"QN>", "Premodifying Quantifier"},
        {"GN>", "Premodifying Genitive"},
        {"AD-A>", "Premodifying Ad-Adjective"},
        {"<NOM-OF", "Postmodifying Of"},
        {"<NOM-FMAINV", "Postmodifying Nonfinite Verb"},
        {"<AD-A", "Postmodifying Ad-Adjective"},
        {"<NOM", "Other Postmodifier"},
        {"INFMARK>", "Infinitive Marker"},
        {"<P-FMAINV", "Nonfinite Verb as Complement of Preposition"},
        {"<P", "Other Complement of Preposition"},
        {"CC", "Coordinator"},
        {"CS", "Subordinator"},
    };
    TagInventory out;
    for (const auto &[sym, gloss] : rows) out.add(Tag{std::string(sym)}, std::string(gloss));
    return out;
  }();
  return inv;
}

/// Maps class symbols to member tags, e.g. nonfinv = {-FMAINV, <NOM-FMAINV, <P-FMAINV}.
/// A tag belongs to at most one class so that projection stays a function.
class EquivalenceClassMap {
public:
  EquivalenceClassMap() = default;

  void add_class(const std::string &symbol, const std::set<Tag> &members) {
    if (symbol.empty() || is_reserved_word(symbol))
      fail("InvalidClassMap", "bad class symbol '" + symbol + "'");
    (void)Tag{symbol}; // same lexical rules as tags
    if (members.empty()) fail("InvalidClassMap", "class " + symbol + " has no members");
    if (classes_.count(symbol)) fail("InvalidClassMap", "class " + symbol + " declared twice");
    for (const auto &m : members) {
      if (m.symbol() == symbol) fail("InvalidClassMap", "class " + symbol + " contains itself");
      auto it = owner_.find(m);
      if (it != owner_.end())
        fail("InvalidClassMap", "tag " + m.symbol() + " in both " + it->second + " and " + symbol);
    }
    for (const auto &m : members) {
      if (classes_.count(m.symbol())) fail("InvalidClassMap", "tag " + m.symbol() + " is also a class symbol");
      owner_.emplace(m, symbol);
    }
    for (const auto &[cls, tags] : classes_)
      if (members.count(Tag{cls})) fail("InvalidClassMap", "class symbol " + cls + " used as a member");
    classes_.emplace(symbol, members);
  }

  /// Class symbols must not collide with tag symbols of the active inventory.
  void validate(const TagInventory &inv) const {
    for (const auto &[cls, members] : classes_)
      if (inv.contains(std::string_view(cls)))
        fail("InvalidClassMap", "class symbol " + cls + " collides with a tag");
  }

  const std::string *class_of(const Tag &tag) const {
    auto it = owner_.find(tag);
    return it == owner_.end() ? nullptr : &it->second;
  }

  bool empty() const { return classes_.empty(); }
  const std::map<std::string, std::set<Tag>> &classes() const { return classes_; }

  friend bool operator==(const EquivalenceClassMap &a, const EquivalenceClassMap &b) {
    return a.classes_ == b.classes_;
  }

private:
  std::map<std::string, std::set<Tag>> classes_;
  std::map<Tag, std::string> owner_;
};

inline std::string project_symbol(const Tag &tag, const EquivalenceClassMap &eq) {
  if (const std::string *cls = eq.class_of(tag)) return *cls;
  return tag.symbol();
}

} // namespace patparse
