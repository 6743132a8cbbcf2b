#pragma once

// Joints: left/right tag contexts of a target tag, mined from a
// disambiguated corpus with a relative-frequency threshold (error margin)
// and an absolute support threshold (absolute margin), and the ".jdb" format:
//
//   PARAMS error_margin=<f> absolute_margin=<n> max_len=<n> algorithm=<name>
//   TARGETCOUNT <tag> <n>
//   JOINT <tag> : <left items> _ <right items> | COUNT <n>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "patparse/corpus.hpp"
#include "patparse/error.hpp"
#include "patparse/tagset.hpp"

namespace patparse {

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";

enum class JointAlgorithm { exhaustive, incremental };

inline std::string_view to_string(JointAlgorithm a) {
  return a == JointAlgorithm::exhaustive ? "exhaustive" : "incremental";
}

inline JointAlgorithm parse_algorithm(std::string_view s) {
  if (s == "exhaustive") return JointAlgorithm::exhaustive;
  if (s == "incremental") return JointAlgorithm::incremental;
  fail("InvalidParams", "unknown algorithm '" + std::string(s) + "'");
}

struct JointParams {
  double error_margin = 0.01;
  std::size_t absolute_margin = 5;
  std::size_t max_len = 4;
  JointAlgorithm algorithm = JointAlgorithm::incremental;

  void validate() const {
    if (!(error_margin >= 0.0 && error_margin <= 1.0)) fail("InvalidParams", "error margin must lie in [0,1]");
    if (absolute_margin < 1) fail("InvalidParams", "absolute margin must be >= 1");
    if (max_len < 1) fail("InvalidParams", "max_len must be >= 1");
  }

  bool passes(std::size_t support, std::size_t target_count) const {
    return support >= absolute_margin && double(support) / double(target_count) >= error_margin;
  }

  friend bool operator==(const JointParams &, const JointParams &) = default;
};

/// Context around one target slot. `left` is read outward-in (innermost
/// last), `right` inward-out (innermost first).
struct JointContext {
  Tag target;
  std::vector<std::string> left;
  std::vector<std::string> right;

  std::size_t length() const { return left.size() + right.size(); }
  friend bool operator==(const JointContext &, const JointContext &) = default;
  friend auto operator<=>(const JointContext &, const JointContext &) = default;
};

struct Joint {
  JointContext context;
  std::size_t support = 0;
  double freq = 0.0;

  const Tag &target() const { return context.target; }
  std::size_t length() const { return context.length(); }
};

/// Per-corpus event: a token's gold tag and its neighbourhood, padded with
/// one <s> / </s> at the sentence edges and truncated to max_len per side.
struct TrainingEvent {
  Tag target;
  std::vector<std::string> left;
  std::vector<std::string> right;
};

inline std::vector<TrainingEvent> training_events(const Corpus &corpus, std::size_t max_len) {
  std::vector<TrainingEvent> out;
  for (const auto &s : corpus.sentences) {
    Reading r = gold_reading(s);
    for (const auto &t : r)
      if (is_reserved_word(t.symbol())) fail("ReservedSymbol", "tag '" + t.symbol() + "' is reserved");
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i) {
      TrainingEvent ev{r[i], {}, {}};
      std::size_t from = i >= max_len ? i - max_len : 0;
      if (i < max_len) ev.left.emplace_back(kBos);
      for (std::size_t j = from; j < i; ++j) ev.left.push_back(r[j].symbol());
      while (ev.left.size() > max_len) ev.left.erase(ev.left.begin());
      for (std::size_t j = i + 1; j < n && ev.right.size() < max_len; ++j) ev.right.push_back(r[j].symbol());
      if (ev.right.size() < max_len) ev.right.emplace_back(kEos);
      out.push_back(std::move(ev));
    }
  }
  return out;
}

namespace detail {

// Dense ids for context symbols; 0 separates left and right in lookup keys.
class SymbolTable {
public:
  static constexpr std::uint32_t kSep = 0, kBosId = 1, kEosId = 2;
  static constexpr std::uint32_t kUnknown = 0xFFFFFFFFu;

  SymbolTable() {
    ids_.emplace(std::string(kBos), kBosId);
    ids_.emplace(std::string(kEos), kEosId);
  }
  std::uint32_t intern(const std::string &s) {
    auto [it, fresh] = ids_.emplace(s, next_);
    if (fresh) ++next_;
    return it->second;
  }
  std::uint32_t find(const std::string &s) const {
    auto it = ids_.find(s);
    return it == ids_.end() ? kUnknown : it->second;
  }

private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::uint32_t next_ = 3;
};

using Key = std::u32string;

} // namespace detail

class JointDB {
public:
  JointDB() = default;
  JointDB(JointParams params, std::map<Tag, std::size_t> target_counts, std::vector<Joint> joints)
      : params_(params), target_counts_(std::move(target_counts)), joints_(std::move(joints)) {
    for (auto &j : joints_) {
      auto it = target_counts_.find(j.target());
      if (it == target_counts_.end() || it->second == 0) fail("InvalidJointDB", "joint target without count: " + j.target().symbol());
      j.freq = double(j.support) / double(it->second);
    }
    std::sort(joints_.begin(), joints_.end(), [](const Joint &a, const Joint &b) {
      if (a.target() != b.target()) return a.target() < b.target();
      if (a.length() != b.length()) return a.length() < b.length();
      return a.context < b.context;
    });
    for (std::size_t i = 1; i < joints_.size(); ++i)
      if (joints_[i].context == joints_[i - 1].context) fail("InvalidJointDB", "duplicate joint");
    build_index();
  }

  const JointParams &params() const { return params_; }
  const std::map<Tag, std::size_t> &target_counts() const { return target_counts_; }
  const std::vector<Joint> &joints() const { return joints_; }
  std::size_t size() const { return joints_.size(); }

  std::optional<std::size_t> support_of(const JointContext &c) const {
    auto it = index_.find(encode(c));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Symbol ids of a tag sequence, for repeated matching.
  std::vector<std::uint32_t> encode_tags(std::span<const Tag> tags) const {
    std::vector<std::uint32_t> out;
    out.reserve(tags.size());
    for (const auto &t : tags) out.push_back(symbols_.find(t.symbol()));
    return out;
  }
  std::uint32_t encode_tag(const Tag &t) const { return symbols_.find(t.symbol()); }

  /// Longest stored context around `pos` in an encoded tag sequence.
  std::size_t longest_match(std::span<const std::uint32_t> ids, std::size_t pos) const {
    const std::size_t n = ids.size();
    const std::size_t max_left = std::min(params_.max_len, pos + 1);
    const std::size_t max_right = std::min(params_.max_len, n - pos);
    detail::Key key;
    for (std::size_t len = std::min(params_.max_len, max_left + max_right); len >= 1; --len) {
      for (std::size_t l = len > max_right ? len - max_right : 0; l <= std::min(len, max_left); ++l) {
        const std::size_t r = len - l;
        key.clear();
        key.push_back(ids[pos]);
        for (std::size_t j = l; j >= 1; --j) key.push_back(j > pos ? detail::SymbolTable::kBosId : ids[pos - j]);
        key.push_back(detail::SymbolTable::kSep);
        for (std::size_t j = 1; j <= r; ++j) key.push_back(pos + j >= n ? detail::SymbolTable::kEosId : ids[pos + j]);
        if (index_.count(key)) return len;
      }
    }
    return 0;
  }

private:
  detail::Key encode(const JointContext &c) const {
    detail::Key k;
    k.push_back(symbols_.find(c.target.symbol()));
    for (const auto &s : c.left) k.push_back(symbols_.find(s));
    k.push_back(detail::SymbolTable::kSep);
    for (const auto &s : c.right) k.push_back(symbols_.find(s));
    return k;
  }

  void build_index() {
    for (const auto &[tag, count] : target_counts_) symbols_.intern(tag.symbol());
    for (const auto &j : joints_) {
      symbols_.intern(j.target().symbol());
      for (const auto &s : j.context.left) symbols_.intern(s);
      for (const auto &s : j.context.right) symbols_.intern(s);
    }
    for (const auto &j : joints_) index_.emplace(encode(j.context), j.support);
  }

  JointParams params_;
  std::map<Tag, std::size_t> target_counts_;
  std::vector<Joint> joints_;
  detail::SymbolTable symbols_;
  std::unordered_map<detail::Key, std::size_t> index_;
};

namespace detail {

/// Thresholds per context length; the public generators use the same
/// thresholds at every length.
using LevelMargins = std::function<JointParams(std::size_t length)>;

struct EncodedEvents {
  SymbolTable symbols;
  std::vector<std::string> names{std::string(kBos), std::string(kEos)}; // id - 1 -> symbol, ids >= 1
  struct Event {
    std::uint32_t target;
    std::vector<std::uint32_t> left; // outermost first
    std::vector<std::uint32_t> right;
  };
  std::vector<Event> events;
  std::map<Tag, std::size_t> target_counts;
  std::unordered_map<std::uint32_t, std::size_t> count_by_id;

  std::uint32_t intern(const std::string &s) {
    std::uint32_t id = symbols.intern(s);
    if (id - 1 >= names.size()) names.push_back(s);
    return id;
  }
  const std::string &name(std::uint32_t id) const { return names[id - 1]; }
};

inline EncodedEvents encode_events(const Corpus &corpus, std::size_t max_len) {
  if (corpus.sentences.empty()) fail("EmptyCorpus", "training corpus has no sentences");
  EncodedEvents enc;
  for (auto &ev : training_events(corpus, max_len)) {
    EncodedEvents::Event e;
    e.target = enc.intern(ev.target.symbol());
    for (const auto &s : ev.left) e.left.push_back(enc.intern(s));
    for (const auto &s : ev.right) e.right.push_back(enc.intern(s));
    ++enc.target_counts[ev.target];
    ++enc.count_by_id[e.target];
    enc.events.push_back(std::move(e));
  }
  return enc;
}

// Key of the (l, r) context of an event: l items nearest on the left, r on the right.
inline void context_key(const EncodedEvents::Event &e, std::size_t l, std::size_t r, Key &key) {
  key.clear();
  key.push_back(e.target);
  key.append(e.left.end() - static_cast<std::ptrdiff_t>(l), e.left.end());
  key.push_back(SymbolTable::kSep);
  key.append(e.right.begin(), e.right.begin() + static_cast<std::ptrdiff_t>(r));
}

inline std::vector<Joint> to_joints(const EncodedEvents &enc, const std::unordered_map<Key, std::size_t> &selected) {
  std::vector<Joint> out;
  out.reserve(selected.size());
  for (const auto &[key, support] : selected) {
    Joint j;
    j.context.target = Tag{enc.name(key[0])};
    std::size_t i = 1;
    for (; key[i] != SymbolTable::kSep; ++i) j.context.left.push_back(enc.name(key[i]));
    for (++i; i < key.size(); ++i) j.context.right.push_back(enc.name(key[i]));
    j.support = support;
    out.push_back(std::move(j));
  }
  return out;
}

inline JointDB generate_exhaustive(const Corpus &corpus, const JointParams &params, const LevelMargins &margins) {
  params.validate();
  EncodedEvents enc = encode_events(corpus, params.max_len);
  std::unordered_map<Key, std::size_t> counts;
  Key key;
  for (const auto &e : enc.events)
    for (std::size_t l = 0; l <= std::min(params.max_len, e.left.size()); ++l)
      for (std::size_t r = l == 0 ? 1 : 0; l + r <= params.max_len && r <= e.right.size(); ++r) {
        context_key(e, l, r, key);
        ++counts[key];
      }
  std::unordered_map<Key, std::size_t> kept;
  for (const auto &[k, support] : counts) {
    std::size_t len = k.size() - 2;
    if (margins(len).passes(support, enc.count_by_id.at(k[0]))) kept.emplace(k, support);
  }
  return JointDB(params, enc.target_counts, to_joints(enc, kept));
}

inline JointDB generate_incremental(const Corpus &corpus, const JointParams &params, const LevelMargins &margins) {
  params.validate();
  EncodedEvents enc = encode_events(corpus, params.max_len);
  std::unordered_map<Key, std::size_t> all, level;
  Key key, parent;
  for (std::size_t len = 1; len <= params.max_len; ++len) {
    std::unordered_map<Key, std::size_t> counts;
    for (const auto &e : enc.events)
      for (std::size_t l = 0; l <= std::min(len, e.left.size()); ++l) {
        const std::size_t r = len - l;
        if (r > e.right.size()) continue;
        if (len > 1) {
          // only extensions of contexts selected one level down
          bool extends = false;
          if (l > 0) {
            context_key(e, l - 1, r, parent);
            extends = level.count(parent) != 0;
          }
          if (!extends && r > 0) {
            context_key(e, l, r - 1, parent);
            extends = level.count(parent) != 0;
          }
          if (!extends) continue;
        }
        context_key(e, l, r, key);
        ++counts[key];
      }
    level.clear();
    const JointParams m = margins(len);
    for (const auto &[k, support] : counts)
      if (m.passes(support, enc.count_by_id.at(k[0]))) level.emplace(k, support);
    if (level.empty()) break;
    all.insert(level.begin(), level.end());
  }
  return JointDB(params, enc.target_counts, to_joints(enc, all));
}

} // namespace detail

/// Every realised context of every length, filtered by both margins.
inline JointDB generate_joints_exhaustive(const Corpus &corpus, JointParams params) {
  params.algorithm = JointAlgorithm::exhaustive;
  return detail::generate_exhaustive(corpus, params, [&](std::size_t) { return params; });
}

/// Length-1 contexts first, then one-symbol extensions (left or right) of the
/// contexts selected at the previous length.
inline JointDB generate_joints_incremental(const Corpus &corpus, JointParams params) {
  params.algorithm = JointAlgorithm::incremental;
  return detail::generate_incremental(corpus, params, [&](std::size_t) { return params; });
}

inline JointDB generate_joints(const Corpus &corpus, const JointParams &params) {
  return params.algorithm == JointAlgorithm::exhaustive ? generate_joints_exhaustive(corpus, params)
                                                        : generate_joints_incremental(corpus, params);
}

inline std::size_t longest_context_match(const JointDB &db, const Reading &reading, std::size_t position) {
  if (position >= reading.size()) fail("InvalidArgument", "position out of range");
  auto ids = db.encode_tags(reading);
  return db.longest_match(ids, position);
}

inline std::size_t score_reading(const JointDB &db, const Reading &reading) {
  auto ids = db.encode_tags(reading);
  std::size_t total = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) total += db.longest_match(ids, i);
  return total;
}

// ---------------------------------------------------------------------------
// Invariant checks.

/// First joint of length >= 2 with neither truncation stored, if any.
inline std::optional<Joint> find_prefix_closure_violation(const JointDB &db) {
  for (const auto &j : db.joints()) {
    if (j.length() < 2) continue;
    bool ok = false;
    if (!j.context.left.empty()) {
      JointContext p = j.context;
      p.left.erase(p.left.begin());
      ok = db.support_of(p).has_value();
    }
    if (!ok && !j.context.right.empty()) {
      JointContext p = j.context;
      p.right.pop_back();
      ok = db.support_of(p).has_value();
    }
    if (!ok) return j;
  }
  return std::nullopt;
}

/// First joint whose support exceeds that of a stored truncation, if any.
inline std::optional<Joint> find_support_violation(const JointDB &db) {
  for (const auto &j : db.joints()) {
    if (!j.context.left.empty()) {
      JointContext p = j.context;
      p.left.erase(p.left.begin());
      auto s = p.length() ? db.support_of(p) : std::nullopt;
      if (s && *s < j.support) return j;
    }
    if (!j.context.right.empty()) {
      JointContext p = j.context;
      p.right.pop_back();
      auto s = p.length() ? db.support_of(p) : std::nullopt;
      if (s && *s < j.support) return j;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Text format.

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

} // namespace detail

inline std::string render_joint(const Joint &j) {
  std::string out = "JOINT " + j.target().symbol() + " :";
  for (const auto &s : j.context.left) out += " " + s;
  out += " _";
  for (const auto &s : j.context.right) out += " " + s;
  out += " | COUNT " + std::to_string(j.support);
  return out;
}

inline void render_joint_db(const JointDB &db, std::ostream &out) {
  const auto &p = db.params();
  out << "PARAMS error_margin=" << detail::format_double(p.error_margin) << " absolute_margin=" << p.absolute_margin
      << " max_len=" << p.max_len << " algorithm=" << to_string(p.algorithm) << '\n';
  for (const auto &[tag, n] : db.target_counts()) out << "TARGETCOUNT " << tag.symbol() << ' ' << n << '\n';
  for (const auto &j : db.joints()) out << render_joint(j) << '\n';
}

inline JointDB parse_joint_db(std::istream &in) {
  std::optional<JointParams> params;
  std::map<Tag, std::size_t> counts;
  std::vector<Joint> joints;
  std::string line;
  std::size_t lineno = 0;
  auto bad = [&](const std::string &what) { fail("MalformedJointFile", "line " + std::to_string(lineno) + ": " + what); };
  auto to_count = [&](const std::string &s) {
    std::size_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) bad("bad count '" + s + "'");
    return v;
  };

  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    std::string_view view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto w = detail::split_ws(view);
    try {
      if (w[0] == "PARAMS") {
        if (params) bad("second PARAMS line");
        JointParams p;
        std::set<std::string> seen;
        for (std::size_t i = 1; i < w.size(); ++i) {
          auto eq = w[i].find('=');
          if (eq == std::string::npos) bad("expected key=value, got '" + w[i] + "'");
          std::string k = w[i].substr(0, eq), v = w[i].substr(eq + 1);
          seen.insert(k);
          if (k == "error_margin") {
            auto res = std::from_chars(v.data(), v.data() + v.size(), p.error_margin);
            if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) bad("bad error_margin");
          } else if (k == "absolute_margin") {
            p.absolute_margin = to_count(v);
          } else if (k == "max_len") {
            p.max_len = to_count(v);
          } else if (k == "algorithm") {
            p.algorithm = parse_algorithm(v);
          } else {
            bad("unknown parameter " + k);
          }
        }
        if (seen.size() != 4) bad("PARAMS needs error_margin, absolute_margin, max_len and algorithm");
        p.validate();
        params = p;
      } else if (w[0] == "TARGETCOUNT") {
        if (w.size() != 3) bad("expected TARGETCOUNT <tag> <n>");
        std::size_t n = to_count(w[2]);
        if (n == 0) bad("zero target count");
        if (!counts.emplace(Tag{w[1]}, n).second) bad("duplicate TARGETCOUNT for " + w[1]);
      } else if (w[0] == "JOINT") {
        if (!params) bad("JOINT before PARAMS");
        if (w.size() < 7 || w[2] != ":" || w[w.size() - 3] != "|" || w[w.size() - 2] != "COUNT") bad("malformed JOINT line");
        Joint j;
        j.context.target = Tag{w[1]};
        auto slot = std::find(w.begin() + 3, w.end() - 3, "_");
        if (slot == w.end() - 3) bad("missing '_' target slot");
        j.context.left.assign(w.begin() + 3, slot);
        j.context.right.assign(slot + 1, w.end() - 3);
        for (std::size_t i = 0; i < j.context.left.size(); ++i) {
          const auto &s = j.context.left[i];
          if (s == kEos || (s == kBos && i != 0) || (is_reserved_word(s) && s != kBos)) bad("misplaced '" + s + "'");
          if (s != kBos) (void)Tag{s};
        }
        for (std::size_t i = 0; i < j.context.right.size(); ++i) {
          const auto &s = j.context.right[i];
          if (s == kBos || (s == kEos && i + 1 != j.context.right.size()) || (is_reserved_word(s) && s != kEos))
            bad("misplaced '" + s + "'");
          if (s != kEos) (void)Tag{s};
        }
        if (j.length() < 1 || j.length() > params->max_len) bad("context length outside 1..max_len");
        j.support = to_count(w.back());
        auto it = counts.find(j.target());
        if (it == counts.end()) bad("no TARGETCOUNT for " + j.target().symbol());
        if (j.support > it->second) bad("support exceeds target count");
        if (!params->passes(j.support, it->second)) bad("joint below the margins");
        joints.push_back(std::move(j));
      } else {
        bad("unknown keyword '" + w[0] + "'");
      }
    } catch (const Error &e) {
      if (e.code() == "MalformedJointFile") throw;
      bad(e.what());
    }
  }
  if (!params) fail("MalformedJointFile", "missing PARAMS line");
  JointDB db;
  try {
    db = JointDB(*params, std::move(counts), std::move(joints));
  } catch (const Error &e) {
    fail("MalformedJointFile", e.what());
  }
  if (auto v = find_prefix_closure_violation(db))
    fail("PrefixClosureViolation", "no stored truncation for: " + render_joint(*v));
  return db;
}

} // namespace patparse
