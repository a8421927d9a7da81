#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "causets/causet.hpp"

namespace causets {

/// Subset of the n-paths at one level, in path enumeration order.
using PathSet = boost::dynamic_bitset<>;

/// One transition of the growth process, indices into adjacent levels.
struct Transition {
  int parent = 0;  // index at level n-1
  int child = 0;   // index at level n
  int multiplicity = 0;
  OffspringKind kind = OffspringKind::Mild;
};

/// All causets of one cardinality plus the transitions that produce them.
struct GrowthLevel {
  int n = 0;
  std::vector<Causet> causets;          // pairwise non-isomorphic, sorted by code
  std::vector<Transition> transitions;  // into this level, sorted by (parent, child)
  std::vector<int> parent_offset;       // per parent at level n-1: range into transitions
};

/// An n-path: one causet index per level, consecutive entries linked by a
/// transition.
struct Path {
  std::vector<int> entries;  // entries[k] = causet index at level k+1
  int length() const { return static_cast<int>(entries.size()); }
};

/// The n-paths of one level, flattened, in lexicographic entry order.
struct PathSpace {
  int n = 0;
  std::size_t count = 0;
  std::vector<std::int32_t> flat;           // count * n entries
  std::vector<std::size_t> continuation;    // count+1 offsets into level n+1 paths
  int entry(std::size_t p, int level) const {
    return flat[p * static_cast<std::size_t>(n) + static_cast<std::size_t>(level - 1)];
  }
  Path path(std::size_t p) const {
    Path out;
    out.entries.assign(flat.begin() + static_cast<std::ptrdiff_t>(p * static_cast<std::size_t>(n)),
                       flat.begin() + static_cast<std::ptrdiff_t>((p + 1) * static_cast<std::size_t>(n)));
    return out;
  }
};

/// The growth process materialized to a finite depth: levels, transition
/// tables and path spaces. Immutable once built.
class Growth {
 public:
  static constexpr int default_cap = 9;

  /// Builds levels 1..max_n. Level 1 is the single point.
  static Growth build(int max_n, int cap = default_cap) {
    if (max_n < 1) throw std::invalid_argument("build: max_n must be at least 1");
    if (cap > Causet::max_size) cap = Causet::max_size;
    if (max_n > cap)
      throw std::invalid_argument("build: max_n " + std::to_string(max_n) +
                                  " exceeds size cap " + std::to_string(cap));
    Growth g;
    g.levels_.reserve(static_cast<std::size_t>(max_n));
    GrowthLevel first;
    first.n = 1;
    first.causets = {Causet::point()};
    g.levels_.push_back(std::move(first));
    for (int n = 2; n <= max_n; ++n) g.levels_.push_back(expand(g.levels_.back()));
    g.build_paths();
    return g;
  }

  int max_level() const { return static_cast<int>(levels_.size()); }

  const GrowthLevel& level(int n) const {
    check_level(n);
    return levels_[static_cast<std::size_t>(n - 1)];
  }

  const PathSpace& paths(int n) const {
    check_level(n);
    return spaces_[static_cast<std::size_t>(n - 1)];
  }

  const Causet& causet(int n, int idx) const { return level(n).causets[static_cast<std::size_t>(idx)]; }

  /// Index of an isomorphic causet within its level, or -1.
  int find(const Causet& c) const {
    if (c.size() > max_level()) return -1;
    const auto& cs = level(c.size()).causets;
    auto it = std::lower_bound(cs.begin(), cs.end(), c);
    if (it != cs.end() && *it == c) return static_cast<int>(it - cs.begin());
    return -1;
  }

  /// Children of causet `parent` at level n, as (child index, multiplicity,
  /// kind) triples in child order.
  std::vector<Transition> children_of(int n, int parent) const {
    const GrowthLevel& next = level(n + 1);
    std::vector<Transition> out;
    int lo = next.parent_offset[static_cast<std::size_t>(parent)];
    int hi = next.parent_offset[static_cast<std::size_t>(parent) + 1];
    out.assign(next.transitions.begin() + lo, next.transitions.begin() + hi);
    return out;
  }

  bool has_transition(int n, int parent, int child) const {
    const GrowthLevel& next = level(n + 1);
    int lo = next.parent_offset[static_cast<std::size_t>(parent)];
    int hi = next.parent_offset[static_cast<std::size_t>(parent) + 1];
    for (int t = lo; t < hi; ++t)
      if (next.transitions[static_cast<std::size_t>(t)].child == child) return true;
    return false;
  }

  /// The set of one-step continuations (A ->) of a subset of n-paths.
  PathSet one_step(const PathSet& a, int n) const {
    check_level(n + 1);
    const PathSpace& ps = paths(n);
    PathSet out(paths(n + 1).count);
    for (std::size_t p = a.find_first(); p != PathSet::npos; p = a.find_next(p))
      for (std::size_t q = ps.continuation[p]; q < ps.continuation[p + 1]; ++q) out.set(q);
    return out;
  }

  /// Path index of the length-n prefix of `entries`; the entries must form a
  /// valid path.
  std::size_t path_index(const std::vector<int>& entries, int n) const {
    if (n < 1 || n > static_cast<int>(entries.size()))
      throw std::invalid_argument("path_index: prefix length out of range");
    std::size_t p = 0;  // the unique 1-path
    for (int k = 2; k <= n; ++k) {
      const PathSpace& prev = paths(k - 1);
      std::size_t lo = prev.continuation[p], hi = prev.continuation[p + 1];
      const PathSpace& curs = paths(k);
      std::size_t q = lo;
      while (q < hi && curs.entry(q, k) != entries[static_cast<std::size_t>(k - 1)]) ++q;
      if (q == hi) throw std::invalid_argument("path_index: not a valid path at level " + std::to_string(k));
      p = q;
    }
    return p;
  }

  /// Range [lo, hi) of n-path indices extending the m-path with index p.
  std::pair<std::size_t, std::size_t> descendant_range(std::size_t p, int m, int n) const {
    std::size_t lo = p, hi = p + 1;
    for (int k = m; k < n; ++k) {
      const PathSpace& ps = paths(k);
      lo = ps.continuation[lo];
      hi = ps.continuation[hi];
    }
    return {lo, hi};
  }

  /// Validates entries against the transition tables.
  bool valid_path(const Path& path) const {
    if (path.length() < 1 || path.length() > max_level()) return false;
    for (int k = 1; k <= path.length(); ++k) {
      int idx = path.entries[static_cast<std::size_t>(k - 1)];
      if (idx < 0 || idx >= static_cast<int>(level(k).causets.size())) return false;
      if (k > 1 && !has_transition(k - 1, path.entries[static_cast<std::size_t>(k - 2)], idx)) return false;
    }
    return true;
  }

  /// Index of the k-chain (or k-antichain) at level k.
  int chain_index(int k) const { return find(Causet::chain(k)); }
  int antichain_index(int k) const { return find(Causet(k)); }

  std::string path_literal(const Path& p) const {
    std::string out;
    for (int k = 1; k <= p.length(); ++k) {
      if (k > 1) out.push_back('|');
      out += causet(k, p.entries[static_cast<std::size_t>(k - 1)]).literal();
    }
    return out;
  }

  /// Parses `lit1|lit2|...` and validates every consecutive transition.
  Path parse_path(std::string_view text) const {
    Path out;
    std::size_t pos = 0;
    int k = 0;
    while (pos <= text.size()) {
      std::size_t bar = text.find('|', pos);
      std::string_view piece = text.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos);
      ++k;
      Causet c = [&] {
        try {
          return Causet::parse(piece);
        } catch (const ParseError& e) {
          throw ParseError(std::string("path entry ") + std::to_string(k) + ": " + e.what(),
                           pos + e.position());
        }
      }();
      if (c.size() != k)
        throw ParseError("path entry " + std::to_string(k) + " has size " + std::to_string(c.size()), pos);
      if (k > max_level()) throw ParseError("path longer than built levels", pos);
      int idx = find(c);
      if (idx < 0) throw ParseError("causet not found at its level", pos);
      out.entries.push_back(idx);
      if (bar == std::string_view::npos) break;
      pos = bar + 1;
    }
    if (!valid_path(out)) throw ParseError("consecutive entries are not linked by a transition", 0);
    return out;
  }

 private:
  std::vector<GrowthLevel> levels_;
  std::vector<PathSpace> spaces_;

  void check_level(int n) const {
    if (n < 1 || n > max_level())
      throw std::out_of_range("level " + std::to_string(n) + " not built (max " +
                              std::to_string(max_level()) + ")");
  }

  static GrowthLevel expand(const GrowthLevel& prev) {
    struct Incoming {
      Causet child;
      std::vector<Transition> from;
    };
    std::map<std::string, Incoming> classes;
    for (int p = 0; p < static_cast<int>(prev.causets.size()); ++p) {
      auto records = prev.causets[static_cast<std::size_t>(p)].offspring();
      if (records.size() < 2)
        throw std::logic_error("every causet must have at least two distinct offspring");
      for (const auto& r : records) {
        auto [it, inserted] = classes.emplace(r.child.code(), Incoming{r.child, {}});
        it->second.from.push_back(Transition{p, 0, r.multiplicity, r.kind});
      }
    }
    GrowthLevel out;
    out.n = prev.n + 1;
    out.causets.reserve(classes.size());
    int c = 0;
    std::vector<std::vector<Transition>> by_parent(prev.causets.size());
    for (auto& [code, inc] : classes) {
      out.causets.push_back(inc.child);
      for (auto t : inc.from) {
        t.child = c;
        by_parent[static_cast<std::size_t>(t.parent)].push_back(t);
      }
      ++c;
    }
    out.parent_offset.assign(prev.causets.size() + 1, 0);
    for (std::size_t p = 0; p < by_parent.size(); ++p) {
      out.parent_offset[p] = static_cast<int>(out.transitions.size());
      // children were appended in code order already; keep child order
      std::sort(by_parent[p].begin(), by_parent[p].end(),
                [](const Transition& a, const Transition& b) { return a.child < b.child; });
      out.transitions.insert(out.transitions.end(), by_parent[p].begin(), by_parent[p].end());
    }
    out.parent_offset[by_parent.size()] = static_cast<int>(out.transitions.size());
    return out;
  }

  void build_paths() {
    spaces_.clear();
    spaces_.resize(levels_.size());
    PathSpace& first = spaces_[0];
    first.n = 1;
    first.count = 1;
    first.flat = {0};
    for (std::size_t k = 1; k < levels_.size(); ++k) {
      PathSpace& prev = spaces_[k - 1];
      PathSpace& cur = spaces_[k];
      cur.n = static_cast<int>(k) + 1;
      const GrowthLevel& lvl = levels_[k];
      prev.continuation.assign(prev.count + 1, 0);
      std::size_t total = 0;
      for (std::size_t p = 0; p < prev.count; ++p) {
        prev.continuation[p] = total;
        int end = prev.entry(p, prev.n);
        total += static_cast<std::size_t>(lvl.parent_offset[static_cast<std::size_t>(end) + 1] -
                                          lvl.parent_offset[static_cast<std::size_t>(end)]);
      }
      prev.continuation[prev.count] = total;
      cur.count = total;
      cur.flat.resize(total * static_cast<std::size_t>(cur.n));
      std::size_t q = 0;
      for (std::size_t p = 0; p < prev.count; ++p) {
        int end = prev.entry(p, prev.n);
        for (int t = lvl.parent_offset[static_cast<std::size_t>(end)];
             t < lvl.parent_offset[static_cast<std::size_t>(end) + 1]; ++t) {
          std::int32_t* dst = cur.flat.data() + q * static_cast<std::size_t>(cur.n);
          const std::int32_t* src = prev.flat.data() + p * static_cast<std::size_t>(prev.n);
          std::copy(src, src + prev.n, dst);
          dst[prev.n] = lvl.transitions[static_cast<std::size_t>(t)].child;
          ++q;
        }
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Set specifications: expression trees denoting subsets of path space,
// approximated at each level as subsets of the n-paths.

struct SetSpec {
  enum class Kind { Cyl, Site, NamedChain, NamedAntichain, NamedExplicit, Not, Union, Inter };
  Kind kind = Kind::Site;
  std::vector<Causet> prefix;  // Cyl / NamedExplicit
  std::optional<Causet> site;
  std::unique_ptr<SetSpec> a, b;

  SetSpec() = default;
  SetSpec(const SetSpec& o) { *this = o; }
  SetSpec& operator=(const SetSpec& o) {
    kind = o.kind;
    prefix = o.prefix;
    site = o.site;
    a = o.a ? std::make_unique<SetSpec>(*o.a) : nullptr;
    b = o.b ? std::make_unique<SetSpec>(*o.b) : nullptr;
    return *this;
  }
  SetSpec(SetSpec&&) = default;
  SetSpec& operator=(SetSpec&&) = default;

  static SetSpec cyl(std::vector<Causet> entries) {
    SetSpec s;
    s.kind = Kind::Cyl;
    s.prefix = std::move(entries);
    return s;
  }
  static SetSpec site_of(Causet c) {
    SetSpec s;
    s.kind = Kind::Site;
    s.site = std::move(c);
    return s;
  }
  static SetSpec chain_path() {
    SetSpec s;
    s.kind = Kind::NamedChain;
    return s;
  }
  static SetSpec antichain_path() {
    SetSpec s;
    s.kind = Kind::NamedAntichain;
    return s;
  }
  static SetSpec explicit_path(std::vector<Causet> entries) {
    SetSpec s;
    s.kind = Kind::NamedExplicit;
    s.prefix = std::move(entries);
    return s;
  }
  static SetSpec negate(SetSpec inner) {
    SetSpec s;
    s.kind = Kind::Not;
    s.a = std::make_unique<SetSpec>(std::move(inner));
    return s;
  }
  static SetSpec unite(SetSpec l, SetSpec r) {
    SetSpec s;
    s.kind = Kind::Union;
    s.a = std::make_unique<SetSpec>(std::move(l));
    s.b = std::make_unique<SetSpec>(std::move(r));
    return s;
  }
  static SetSpec intersect(SetSpec l, SetSpec r) {
    SetSpec s;
    s.kind = Kind::Inter;
    s.a = std::make_unique<SetSpec>(std::move(l));
    s.b = std::make_unique<SetSpec>(std::move(r));
    return s;
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::Cyl: {
        std::string out = "cyl:";
        for (std::size_t i = 0; i < prefix.size(); ++i) {
          if (i) out.push_back('|');
          out += prefix[i].literal();
        }
        return out;
      }
      case Kind::Site: return "site:" + site->literal();
      case Kind::NamedChain: return "path:chain";
      case Kind::NamedAntichain: return "path:antichain";
      case Kind::NamedExplicit: {
        std::string out = "path:";
        for (std::size_t i = 0; i < prefix.size(); ++i) {
          if (i) out.push_back('|');
          out += prefix[i].literal();
        }
        return out;
      }
      case Kind::Not: return "not(" + a->to_string() + ")";
      case Kind::Union: return "(" + a->to_string() + "+" + b->to_string() + ")";
      case Kind::Inter: return "(" + a->to_string() + "&" + b->to_string() + ")";
    }
    return "?";
  }

  /// Mini-language: `cyl:<path>`, `site:<causet>`, `path:chain`,
  /// `path:antichain`, `path:<path>`, `not(...)`, `+` union, `&`
  /// intersection (binds tighter), parentheses.
  static SetSpec parse(std::string_view text) {
    std::size_t pos = 0;
    SetSpec out = parse_union(text, pos);
    if (pos != text.size()) throw ParseError("trailing characters in set spec", pos);
    return out;
  }

 private:
  static void skip_ws(std::string_view t, std::size_t& pos) {
    while (pos < t.size() && t[pos] == ' ') ++pos;
  }
  static SetSpec parse_union(std::string_view t, std::size_t& pos) {
    SetSpec left = parse_inter(t, pos);
    skip_ws(t, pos);
    while (pos < t.size() && t[pos] == '+') {
      ++pos;
      SetSpec right = parse_inter(t, pos);
      left = unite(std::move(left), std::move(right));
      skip_ws(t, pos);
    }
    return left;
  }
  static SetSpec parse_inter(std::string_view t, std::size_t& pos) {
    SetSpec left = parse_atom(t, pos);
    skip_ws(t, pos);
    while (pos < t.size() && t[pos] == '&') {
      ++pos;
      SetSpec right = parse_atom(t, pos);
      left = intersect(std::move(left), std::move(right));
      skip_ws(t, pos);
    }
    return left;
  }
  static std::string_view take_literal(std::string_view t, std::size_t& pos) {
    std::size_t start = pos;
    while (pos < t.size() && t[pos] != '+' && t[pos] != '&' && t[pos] != ')' && t[pos] != ' ') ++pos;
    return t.substr(start, pos - start);
  }
  static std::vector<Causet> parse_prefix(std::string_view lit, std::size_t base) {
    std::vector<Causet> entries;
    std::size_t pos = 0;
    int k = 0;
    while (pos <= lit.size()) {
      std::size_t bar = lit.find('|', pos);
      std::string_view piece = lit.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos);
      ++k;
      Causet c = [&] {
        try {
          return Causet::parse(piece);
        } catch (const ParseError& e) {
          throw ParseError(e.what(), base + pos + e.position());
        }
      }();
      if (c.size() != k) throw ParseError("path entry " + std::to_string(k) + " has wrong size", base + pos);
      entries.push_back(std::move(c));
      if (bar == std::string_view::npos) break;
      pos = bar + 1;
    }
    return entries;
  }
  static SetSpec parse_atom(std::string_view t, std::size_t& pos) {
    skip_ws(t, pos);
    if (pos >= t.size()) throw ParseError("expected set spec", pos);
    if (t[pos] == '(') {
      ++pos;
      SetSpec inner = parse_union(t, pos);
      skip_ws(t, pos);
      if (pos >= t.size() || t[pos] != ')') throw ParseError("expected ')'", pos);
      ++pos;
      return inner;
    }
    if (t.substr(pos, 4) == "not(") {
      pos += 4;
      SetSpec inner = parse_union(t, pos);
      skip_ws(t, pos);
      if (pos >= t.size() || t[pos] != ')') throw ParseError("expected ')'", pos);
      ++pos;
      return negate(std::move(inner));
    }
    if (t.substr(pos, 4) == "cyl:") {
      pos += 4;
      std::size_t base = pos;
      auto lit = take_literal(t, pos);
      return cyl(parse_prefix(lit, base));
    }
    if (t.substr(pos, 5) == "site:") {
      pos += 5;
      std::size_t base = pos;
      auto lit = take_literal(t, pos);
      try {
        return site_of(Causet::parse(lit));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), base + e.position());
      }
    }
    if (t.substr(pos, 5) == "path:") {
      pos += 5;
      std::size_t base = pos;
      auto lit = take_literal(t, pos);
      if (lit == "chain") return chain_path();
      if (lit == "antichain") return antichain_path();
      return explicit_path(parse_prefix(lit, base));
    }
    throw ParseError("unknown set spec atom", pos);
  }
};

namespace detail {

inline PathSet approximate_impl(const Growth& g, const SetSpec& s, int n, bool strict);

/// Literal complement semantics, used in strict mode: complements are pushed
/// down structurally. A singleton named path complements to all of the
/// n-paths (every prefix continues to some other path since branching is
/// at least two); cylinder-type sets complement pointwise.
inline PathSet approximate_complement(const Growth& g, const SetSpec& s, int n, bool strict) {
  using K = SetSpec::Kind;
  switch (s.kind) {
    case K::NamedChain:
    case K::NamedAntichain:
    case K::NamedExplicit: {
      PathSet all(g.paths(n).count);
      all.set();
      return all;
    }
    case K::Not:
      return approximate_impl(g, *s.a, n, strict);
    case K::Union: {
      PathSet l = approximate_complement(g, *s.a, n, strict);
      PathSet r = approximate_complement(g, *s.b, n, strict);
      return l & r;
    }
    case K::Inter: {
      PathSet l = approximate_complement(g, *s.a, n, strict);
      PathSet r = approximate_complement(g, *s.b, n, strict);
      return l | r;
    }
    default: {
      PathSet inner = approximate_impl(g, s, n, strict);
      return ~inner;
    }
  }
}

inline PathSet approximate_impl(const Growth& g, const SetSpec& s, int n, bool strict) {
  using K = SetSpec::Kind;
  const std::size_t count = g.paths(n).count;
  switch (s.kind) {
    case K::Cyl: {
      int m = static_cast<int>(s.prefix.size());
      std::vector<int> entries;
      entries.reserve(s.prefix.size());
      for (const auto& c : s.prefix) {
        int idx = g.find(c);
        if (idx < 0) throw std::invalid_argument("cyl: causet not present: " + c.literal());
        entries.push_back(idx);
      }
      PathSet out(count);
      if (n <= m) {
        out.set(g.path_index(entries, n));
      } else {
        std::size_t p = g.path_index(entries, m);
        auto [lo, hi] = g.descendant_range(p, m, n);
        for (std::size_t q = lo; q < hi; ++q) out.set(q);
      }
      return out;
    }
    case K::Site: {
      const Causet& x = *s.site;
      if (x.size() > n)
        throw std::invalid_argument("site: causet " + x.literal() + " is deeper than level " +
                                    std::to_string(n));
      int idx = g.find(x);
      if (idx < 0) throw std::invalid_argument("site: causet not present: " + x.literal());
      const PathSpace& base = g.paths(x.size());
      PathSet hits(base.count);
      for (std::size_t p = 0; p < base.count; ++p)
        if (base.entry(p, x.size()) == idx) hits.set(p);
      for (int k = x.size(); k < n; ++k) hits = g.one_step(hits, k);
      return hits;
    }
    case K::NamedChain:
    case K::NamedAntichain: {
      std::vector<int> entries;
      for (int k = 1; k <= n; ++k) {
        int idx = s.kind == K::NamedChain ? g.chain_index(k) : g.antichain_index(k);
        if (idx < 0) throw std::logic_error("named path entry missing from level");
        entries.push_back(idx);
      }
      PathSet out(count);
      out.set(g.path_index(entries, n));
      return out;
    }
    case K::NamedExplicit: {
      if (n > static_cast<int>(s.prefix.size()))
        throw std::invalid_argument("path: explicit prefix shorter than level " + std::to_string(n));
      std::vector<int> entries;
      for (int k = 1; k <= n; ++k) {
        int idx = g.find(s.prefix[static_cast<std::size_t>(k - 1)]);
        if (idx < 0) throw std::invalid_argument("path: causet not present");
        entries.push_back(idx);
      }
      PathSet out(count);
      out.set(g.path_index(entries, n));
      return out;
    }
    case K::Not: {
      if (strict) return approximate_complement(g, *s.a, n, strict);
      PathSet inner = approximate_impl(g, *s.a, n, strict);
      return ~inner;
    }
    case K::Union: {
      PathSet l = approximate_impl(g, *s.a, n, strict);
      PathSet r = approximate_impl(g, *s.b, n, strict);
      return l | r;
    }
    case K::Inter: {
      PathSet l = approximate_impl(g, *s.a, n, strict);
      PathSet r = approximate_impl(g, *s.b, n, strict);
      return l & r;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace detail

/// Level-n approximation of the set denoted by `spec`. The default
/// complement is taken within the n-paths; strict mode implements the
/// literal continuation semantics instead.
inline PathSet approximate(const Growth& g, const SetSpec& spec, int n, bool strict = false) {
  return detail::approximate_impl(g, spec, n, strict);
}

/// First level at which the spec can be evaluated (site specs need their
/// causet's level, explicit prefixes bound the level from above).
inline int first_evaluable_level(const SetSpec& s) {
  using K = SetSpec::Kind;
  switch (s.kind) {
    case K::Site: return s.site->size();
    case K::Not: return first_evaluable_level(*s.a);
    case K::Union:
    case K::Inter: return std::max(first_evaluable_level(*s.a), first_evaluable_level(*s.b));
    default: return 1;
  }
}

}  // namespace causets
