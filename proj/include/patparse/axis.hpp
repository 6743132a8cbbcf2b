#pragma once

// Sentence axes: the order of appearance of a chosen tag subset in a
// sentence, with "..." gaps standing for intervening material and
// "[ ... ]+" groups for material that may be repeated.

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "patparse/corpus.hpp"
#include "patparse/error.hpp"
#include "patparse/tagset.hpp"

namespace patparse {

class AxisElement {
public:
  enum class Kind { sym, gap, repeat };

  static AxisElement sym(std::string symbol) {
    AxisElement e(Kind::sym);
    e.symbol_ = std::move(symbol);
    return e;
  }
  static AxisElement gap() { return AxisElement(Kind::gap); }
  static AxisElement repeat(std::vector<AxisElement> body) {
    AxisElement e(Kind::repeat);
    e.body_ = std::move(body);
    return e;
  }

  Kind kind() const { return kind_; }
  bool is_sym() const { return kind_ == Kind::sym; }
  bool is_gap() const { return kind_ == Kind::gap; }
  bool is_repeat() const { return kind_ == Kind::repeat; }
  const std::string &symbol() const { return symbol_; }
  const std::vector<AxisElement> &body() const { return body_; }

  friend bool operator==(const AxisElement &a, const AxisElement &b) {
    return a.kind_ == b.kind_ && a.symbol_ == b.symbol_ && a.body_ == b.body_;
  }

private:
  explicit AxisElement(Kind k) : kind_(k) {}
  Kind kind_;
  std::string symbol_;
  std::vector<AxisElement> body_;
};

/// A sentence projected onto a layer: Sym and Gap items only, never two gaps in a row.
using Projection = std::vector<AxisElement>;

struct Axis {
  std::string layer_id;
  std::vector<AxisElement> elements;

  friend bool operator==(const Axis &a, const Axis &b) {
    return a.layer_id == b.layer_id && a.elements == b.elements;
  }
};

/// Tag subset T plus the class projection applied to it.
struct LayerSpec {
  std::string id;
  std::set<Tag> tagset;
  EquivalenceClassMap eq;
  int priority = 0;
  bool generalise = true;

  std::set<std::string> alphabet() const {
    std::set<std::string> out;
    for (const auto &t : tagset) out.insert(project_symbol(t, eq));
    return out;
  }

  friend bool operator==(const LayerSpec &, const LayerSpec &) = default;
};

// ---------------------------------------------------------------------------
// Rendering and parsing of the element notation.

inline void render_elements(const std::vector<AxisElement> &elems, std::ostream &out) {
  bool first = true;
  for (const auto &e : elems) {
    if (!first) out << ' ';
    first = false;
    switch (e.kind()) {
    case AxisElement::Kind::sym: out << e.symbol(); break;
    case AxisElement::Kind::gap: out << "..."; break;
    case AxisElement::Kind::repeat:
      out << "[ ";
      render_elements(e.body(), out);
      out << " ]+";
      break;
    }
  }
}

inline std::string render_elements(const std::vector<AxisElement> &elems) {
  std::ostringstream os;
  render_elements(elems, os);
  return os.str();
}

inline std::string render_axis(const Axis &axis) { return render_elements(axis.elements); }

namespace detail {

inline std::vector<AxisElement> parse_element_words(const std::vector<std::string> &words, std::size_t &pos, bool nested) {
  std::vector<AxisElement> out;
  while (pos < words.size()) {
    const std::string &w = words[pos];
    if (w == "]+") {
      if (!nested) fail("MalformedAxis", "unbalanced ']+'");
      ++pos;
      return out;
    }
    ++pos;
    if (w == "...") {
      out.push_back(AxisElement::gap());
    } else if (w == "[") {
      out.push_back(AxisElement::repeat(parse_element_words(words, pos, true)));
    } else {
      if (is_reserved_word(w)) fail("MalformedAxis", "unexpected '" + w + "'");
      (void)Tag{w};
      out.push_back(AxisElement::sym(w));
    }
  }
  if (nested) fail("MalformedAxis", "unterminated '['");
  return out;
}

inline bool contains_sym(const std::vector<AxisElement> &elems) {
  for (const auto &e : elems)
    if (e.is_sym() || (e.is_repeat() && contains_sym(e.body()))) return true;
  return false;
}

inline void check_elements(const std::vector<AxisElement> &elems, const std::set<std::string> *alphabet) {
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const auto &e = elems[i];
    if (e.is_gap() && i + 1 < elems.size() && elems[i + 1].is_gap()) fail("MalformedAxis", "two adjacent gaps");
    if (e.is_sym() && alphabet && !alphabet->count(e.symbol()))
      fail("MalformedAxis", "symbol " + e.symbol() + " outside the layer alphabet");
    if (e.is_repeat()) {
      if (!contains_sym(e.body())) fail("MalformedAxis", "repeat group without a symbol");
      if (e.body().size() == 1 && e.body().front().is_repeat()) fail("MalformedAxis", "repeat nested as sole element");
      check_elements(e.body(), alphabet);
    }
  }
}

} // namespace detail

inline std::vector<AxisElement> parse_elements(std::string_view text) {
  auto words = detail::split_ws(text);
  std::size_t pos = 0;
  return detail::parse_element_words(words, pos, false);
}

/// Throws MalformedAxis unless the axis satisfies the structural invariants
/// (and, when given, the symbol alphabet).
inline void validate_axis(const Axis &axis, const std::set<std::string> *alphabet = nullptr) {
  if (!detail::contains_sym(axis.elements)) fail("NoSymbolInAxis", "axis has no symbol");
  detail::check_elements(axis.elements, alphabet);
}

// ---------------------------------------------------------------------------
// Projection and extraction.

inline Projection project_sentence(const Reading &reading, const LayerSpec &layer) {
  Projection out;
  for (const auto &tag : reading) {
    if (layer.tagset.count(tag)) {
      out.push_back(AxisElement::sym(project_symbol(tag, layer.eq)));
    } else if (out.empty() || !out.back().is_gap()) {
      out.push_back(AxisElement::gap());
    }
  }
  return out;
}

inline Axis extract_axis(const Sentence &sentence, const LayerSpec &layer) {
  Axis axis{layer.id, project_sentence(gold_reading(sentence), layer)};
  if (!detail::contains_sym(axis.elements))
    fail("NoSymbolInAxis", "sentence " + sentence.id + " has no tag of layer " + layer.id);
  return axis;
}

// ---------------------------------------------------------------------------
// Generalisation.

inline std::vector<AxisElement> relax_adjacency(const std::vector<AxisElement> &elems) {
  std::vector<AxisElement> out;
  for (const auto &e : elems) {
    if (e.is_sym() && !out.empty() && out.back().is_sym()) out.push_back(AxisElement::gap());
    out.push_back(e.is_repeat() ? AxisElement::repeat(relax_adjacency(e.body())) : e);
  }
  return out;
}

inline Axis relax_adjacency(const Axis &axis) { return Axis{axis.layer_id, relax_adjacency(axis.elements)}; }

namespace detail {

// Non-gap items with one gap flag before each item plus one trailing flag.
struct Skeleton {
  std::vector<AxisElement> items;
  std::vector<bool> gaps;

  static Skeleton of(const std::vector<AxisElement> &elems) {
    Skeleton s;
    bool pending = false;
    for (const auto &e : elems) {
      if (e.is_gap()) {
        pending = true;
        continue;
      }
      s.gaps.push_back(pending);
      s.items.push_back(e);
      pending = false;
    }
    s.gaps.push_back(pending);
    return s;
  }

  std::vector<AxisElement> elements() const {
    std::vector<AxisElement> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (gaps[i]) out.push_back(AxisElement::gap());
      out.push_back(items[i]);
    }
    if (gaps.back()) out.push_back(AxisElement::gap());
    return out;
  }
};

inline bool same_run(const std::vector<AxisElement> &items, std::size_t a, std::size_t b, std::size_t len) {
  for (std::size_t j = 0; j < len; ++j)
    if (!(items[a + j] == items[b + j])) return false;
  return true;
}

// Finds the shortest-period, then leftmost, tandem repeat and folds it.
inline bool fold_one_repeat(Skeleton &s) {
  const std::size_t k = s.items.size();
  for (std::size_t p = 1; 2 * p <= k; ++p) {
    for (std::size_t i = 0; i + 2 * p <= k; ++i) {
      if (!same_run(s.items, i, i + p, p)) continue;
      std::size_t copies = 2;
      while (i + (copies + 1) * p <= k && same_run(s.items, i, i + copies * p, p)) ++copies;
      const std::size_t end = i + copies * p;

      // Gap placement is harmonised across copies: an extra dot wherever any copy has one.
      bool joint = false;
      for (std::size_t c = 1; c < copies; ++c) joint = joint || s.gaps[i + c * p];
      std::vector<bool> inner(p, false);
      for (std::size_t c = 0; c < copies; ++c)
        for (std::size_t j = 1; j < p; ++j) inner[j] = inner[j] || s.gaps[i + c * p + j];

      std::vector<AxisElement> body;
      if (p == 1 && s.items[i].is_repeat()) {
        body = s.items[i].body();
        if (joint && !body.front().is_gap() && !body.back().is_gap()) body.insert(body.begin(), AxisElement::gap());
        joint = body.front().is_gap();
      } else {
        if (joint) body.push_back(AxisElement::gap());
        for (std::size_t j = 0; j < p; ++j) {
          if (j > 0 && inner[j]) body.push_back(AxisElement::gap());
          body.push_back(s.items[i + j]);
        }
      }

      bool before = s.gaps[i];
      if (joint && body.front().is_gap()) before = false;
      bool after = s.gaps[end];
      if (joint && body.front().is_gap() && end < k) after = true;

      Skeleton next;
      next.items.assign(s.items.begin(), s.items.begin() + static_cast<std::ptrdiff_t>(i));
      next.gaps.assign(s.gaps.begin(), s.gaps.begin() + static_cast<std::ptrdiff_t>(i));
      next.items.push_back(AxisElement::repeat(std::move(body)));
      next.gaps.push_back(before);
      next.gaps.push_back(after);
      next.items.insert(next.items.end(), s.items.begin() + static_cast<std::ptrdiff_t>(end), s.items.end());
      next.gaps.insert(next.gaps.end(), s.gaps.begin() + static_cast<std::ptrdiff_t>(end) + 1, s.gaps.end());
      s = std::move(next);
      return true;
    }
  }
  return false;
}

} // namespace detail

/// Anything that is repeated may be repeated any number of times: folds
/// tandem repetitions into "[ body ]+" groups until none remain.
inline std::vector<AxisElement> generalize_repeats(const std::vector<AxisElement> &elems) {
  auto skel = detail::Skeleton::of(elems);
  while (detail::fold_one_repeat(skel)) {
  }
  return skel.elements();
}

inline Axis generalize_repeats(const Axis &axis) { return Axis{axis.layer_id, generalize_repeats(axis.elements)}; }

// ---------------------------------------------------------------------------
// Matching.

namespace detail {

using PositionSet = std::vector<char>;

inline bool any(const PositionSet &s) { return std::find(s.begin(), s.end(), 1) != s.end(); }

inline PositionSet advance(const std::vector<AxisElement> &elems, const Projection &proj, PositionSet cur, bool strict_gaps);

inline PositionSet advance_one(const AxisElement &e, const Projection &proj, const PositionSet &cur, bool strict_gaps) {
  const std::size_t n = proj.size();
  PositionSet next(n + 1, 0);
  switch (e.kind()) {
  case AxisElement::Kind::sym:
    for (std::size_t i = 0; i < n; ++i)
      if (cur[i] && proj[i].is_sym() && proj[i].symbol() == e.symbol()) next[i + 1] = 1;
    break;
  case AxisElement::Kind::gap:
    if (!strict_gaps) next = cur;
    for (std::size_t i = 0; i < n; ++i)
      if (cur[i] && proj[i].is_gap()) next[i + 1] = 1;
    break;
  case AxisElement::Kind::repeat: {
    PositionSet reached = advance(e.body(), proj, cur, strict_gaps);
    PositionSet frontier = reached;
    while (any(frontier)) {
      PositionSet more = advance(e.body(), proj, frontier, strict_gaps);
      for (std::size_t i = 0; i <= n; ++i) {
        frontier[i] = more[i] && !reached[i];
        reached[i] = reached[i] || more[i];
      }
    }
    next = std::move(reached);
    break;
  }
  }
  return next;
}

inline PositionSet advance(const std::vector<AxisElement> &elems, const Projection &proj, PositionSet cur, bool strict_gaps) {
  for (const auto &e : elems) {
    cur = advance_one(e, proj, cur, strict_gaps);
    if (!any(cur)) break;
  }
  return cur;
}

} // namespace detail

/// Whether the projection lies in the axis language. A gap in the axis
/// matches one projected gap or nothing (exactly one gap with strict_gaps);
/// a projected gap always needs an axis gap.
inline bool axis_matches(const std::vector<AxisElement> &axis, const Projection &proj, bool strict_gaps = false) {
  detail::PositionSet start(proj.size() + 1, 0);
  start[0] = 1;
  return detail::advance(axis, proj, std::move(start), strict_gaps)[proj.size()] != 0;
}

inline bool axis_matches(const Axis &axis, const Projection &proj, bool strict_gaps = false) {
  return axis_matches(axis.elements, proj, strict_gaps);
}

} // namespace patparse
