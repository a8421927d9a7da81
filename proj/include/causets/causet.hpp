#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace causets {

/// Subset of elements of a causet, one bit per element.
using ElementMask = std::uint16_t;

/// Thrown by the text parsers; carries the byte offset of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// How an offspring changes the (height, width) of its producer.
enum class OffspringKind { Height, Width, Mild };

inline const char* to_string(OffspringKind k) {
  switch (k) {
    case OffspringKind::Height: return "height";
    case OffspringKind::Width: return "width";
    case OffspringKind::Mild: return "mild";
  }
  return "?";
}

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

}  // namespace detail

class Causet;

/// One isomorphism class of extensions of a parent causet.
struct OffspringRecord;

/// Multiplicity-weighted offspring counts by kind, no isomorphism grouping.
/// Cheap enough to evaluate even where full offspring enumeration is not
/// (the totals only need height/width deltas per extension).
struct OffspringTally {
  long mild = 0;
  long height = 0;
  long width = 0;
  long total() const { return mild + height + width; }
};

/// A finite causal set: an isomorphism class of a finite strict poset.
///
/// The element labelling stored here is always the canonical one, so two
/// Causet values compare equal iff the posets are isomorphic, and the code()
/// bytes give a total order used for every enumeration in the library.
class Causet {
 public:
  static constexpr int max_size = 16;

  Causet() : Causet(1) {}

  /// The n-element antichain (no relations). n=1 gives the single point.
  explicit Causet(int n, const std::vector<std::pair<int, int>>& covers = {}) {
    if (n < 1 || n > max_size)
      throw std::invalid_argument("causet size out of range: " + std::to_string(n));
    n_ = n;
    up_.fill(0);
    for (auto [i, j] : covers) add_relation_checked(i, j, 0);
    canonicalize();
  }

  static Causet point() { return Causet(1); }

  static Causet chain(int n) {
    std::vector<std::pair<int, int>> cov;
    for (int i = 0; i + 1 < n; ++i) cov.emplace_back(i, i + 1);
    return Causet(n, cov);
  }

  static Causet antichain(int n) { return Causet(n); }

  /// Parses the literal grammar `<n>;<i><j>[,<i><j>]*` with 0-indexed cover
  /// edges, e.g. "3;0<1,1<2" for the 3-chain and "3;" for the 3-antichain.
  static Causet parse(std::string_view text) {
    std::size_t pos = 0;
    auto parse_int = [&](const char* what) -> int {
      std::size_t start = pos;
      if (pos >= text.size() || text[pos] < '0' || text[pos] > '9')
        throw ParseError(std::string("expected ") + what, start);
      long v = 0;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        v = v * 10 + (text[pos] - '0');
        if (v > 1000) throw ParseError(std::string(what) + " too large", start);
        ++pos;
      }
      return static_cast<int>(v);
    };
    std::size_t size_pos = pos;
    int n = parse_int("size");
    if (n < 1 || n > max_size)
      throw ParseError("size exceeds cap of " + std::to_string(max_size), size_pos);
    if (pos >= text.size() || text[pos] != ';') throw ParseError("expected ';'", pos);
    ++pos;
    Causet c;
    c.n_ = n;
    c.up_.fill(0);
    bool first = true;
    while (pos < text.size()) {
      if (!first) {
        if (text[pos] != ',') throw ParseError("expected ','", pos);
        ++pos;
      }
      first = false;
      std::size_t edge_pos = pos;
      int i = parse_int("edge source");
      if (pos >= text.size() || text[pos] != '<') throw ParseError("expected '<'", pos);
      ++pos;
      int j = parse_int("edge target");
      if (i >= n) throw ParseError("index out of range", edge_pos);
      if (j >= n) throw ParseError("index out of range", edge_pos);
      c.add_relation_checked(i, j, edge_pos);
    }
    c.canonicalize();
    return c;
  }

  int size() const { return n_; }

  /// Strict order: does element a precede element b?
  bool precedes(int a, int b) const { return (up_[a] >> b) & 1; }

  bool comparable(int a, int b) const { return precedes(a, b) || precedes(b, a); }

  ElementMask up_set(int a) const { return up_[a]; }
  ElementMask down_set(int a) const { return down_[a]; }

  /// Cover relation (transitive reduction): a covered by b.
  bool covers(int a, int b) const {
    return precedes(a, b) && (up_[a] & down_[b]) == 0;
  }

  std::vector<std::pair<int, int>> cover_edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (covers(i, j)) out.emplace_back(i, j);
    return out;
  }

  ElementMask maximal_elements() const {
    ElementMask m = 0;
    for (int i = 0; i < n_; ++i)
      if (up_[i] == 0) m |= ElementMask(1u << i);
    return m;
  }

  ElementMask minimal_elements() const {
    ElementMask m = 0;
    for (int i = 0; i < n_; ++i)
      if (down_[i] == 0) m |= ElementMask(1u << i);
    return m;
  }

  /// Length of a longest chain ending at a (1 for minimal elements).
  int element_level(int a) const { return level_[a]; }

  /// Cardinality of a longest chain.
  int height() const { return height_; }
  /// Cardinality of a largest antichain.
  int width() const { return width_; }
  /// The discrete action A = h * w.
  int area() const { return height_ * width_; }

  bool is_antichain(ElementMask m) const {
    for (int i = 0; i < n_; ++i)
      if ((m >> i) & 1)
        if ((up_[i] | down_[i]) & m) return false;
    return true;
  }

  /// Every antichain (as an element mask), the empty set and singletons
  /// included, in ascending mask order.
  std::vector<ElementMask> antichains() const {
    std::vector<ElementMask> out;
    out.reserve(16);
    enumerate_antichains([&](ElementMask m) { out.push_back(m); });
    std::sort(out.begin(), out.end());
    return out;
  }

  long antichain_count() const {
    long c = 0;
    enumerate_antichains([&](ElementMask) { ++c; });
    return c;
  }

  /// Adjoins one maximal element strictly above the down-closure of the
  /// given antichain. The empty antichain adjoins a disjoint point.
  Causet extend(ElementMask a) const {
    if (!is_antichain(a)) throw std::invalid_argument("extend: subset is not an antichain");
    if (n_ + 1 > max_size) throw std::invalid_argument("extend: size cap exceeded");
    Causet child;
    child.n_ = n_ + 1;
    child.up_.fill(0);
    ElementMask below = down_closure(a);
    for (int i = 0; i < n_; ++i) {
      child.up_[i] = up_[i];
      if ((below >> i) & 1) child.up_[i] |= ElementMask(1u << n_);
    }
    child.canonicalize();
    return child;
  }

  Causet erase_element(int a) const {
    if (n_ <= 1) throw std::invalid_argument("erase_element: causet must keep at least one element");
    Causet out;
    out.n_ = n_ - 1;
    out.up_.fill(0);
    for (int i = 0, ii = 0; i < n_; ++i) {
      if (i == a) continue;
      ElementMask row = 0;
      for (int j = 0, jj = 0; j < n_; ++j) {
        if (j == a) continue;
        if (precedes(i, j)) row |= ElementMask(1u << jj);
        ++jj;
      }
      out.up_[ii++] = row;
    }
    out.canonicalize();
    return out;
  }

  /// Isomorphism classes of one-element extensions with multiplicities.
  /// The sum of multiplicities equals antichain_count(). Sorted by child code.
  std::vector<OffspringRecord> offspring() const;

  /// Multiplicity-weighted offspring counts by kind (no class grouping).
  OffspringTally offspring_tally() const {
    OffspringTally t;
    enumerate_antichains([&](ElementMask a) {
      auto [dh, dw] = extension_delta(a);
      if (dh == 1 && dw == 0)
        ++t.height;
      else if (dh == 0 && dw == 1)
        ++t.width;
      else if (dh == 0 && dw == 0)
        ++t.mild;
      else
        throw std::logic_error("offspring changes height and width at once");
    });
    return t;
  }

  /// The distinct isomorphism classes obtained by deleting one maximal
  /// element. Sorted by code.
  std::vector<Causet> producers() const {
    if (n_ < 2) throw std::invalid_argument("producers: causet has no producers");
    std::map<std::string, Causet> seen;
    ElementMask maxima = maximal_elements();
    for (int a = 0; a < n_; ++a)
      if ((maxima >> a) & 1) {
        Causet p = erase_element(a);
        seen.emplace(p.code(), p);
      }
    std::vector<Causet> out;
    out.reserve(seen.size());
    for (auto& [k, v] : seen) out.push_back(v);
    return out;
  }

  /// Maximal chains as element index sequences, bottom to top, in
  /// lexicographic order.
  std::vector<std::vector<int>> maximal_chains() const {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    ElementMask minima = minimal_elements();
    auto walk = [&](auto&& self, int v) -> void {
      cur.push_back(v);
      bool is_max = up_[v] == 0;
      if (is_max) {
        out.push_back(cur);
      } else {
        for (int w = 0; w < n_; ++w)
          if (covers(v, w)) self(self, w);
      }
      cur.pop_back();
    };
    for (int v = 0; v < n_; ++v)
      if ((minima >> v) & 1) walk(walk, v);
    return out;
  }

  /// Partition of maximal_chains() indices: two chains are equivalent iff
  /// deleting their maximal elements leaves isomorphic causets. The number
  /// of classes equals producers().size().
  std::vector<std::vector<int>> chain_equivalence_classes() const {
    auto chains = maximal_chains();
    std::map<std::string, std::vector<int>> groups;
    for (std::size_t i = 0; i < chains.size(); ++i) {
      Causet rest = erase_element(chains[i].back());
      groups[rest.code()].push_back(static_cast<int>(i));
    }
    std::vector<std::vector<int>> out;
    out.reserve(groups.size());
    for (auto& [k, v] : groups) out.push_back(v);
    return out;
  }

  /// Canonical code: size byte followed by the row-major bits of the
  /// canonical order matrix. Equal iff isomorphic; its total order is the
  /// enumeration order used everywhere.
  const std::string& code() const { return code_; }

  std::string code_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(code_.size() * 2);
    for (unsigned char b : code_) {
      out.push_back(digits[b >> 4]);
      out.push_back(digits[b & 15]);
    }
    return out;
  }

  /// Canonical-form cover literal, parseable by parse().
  std::string literal() const {
    std::string out = std::to_string(n_) + ";";
    bool first = true;
    for (auto [i, j] : cover_edges()) {
      if (!first) out.push_back(',');
      first = false;
      out += std::to_string(i) + "<" + std::to_string(j);
    }
    return out;
  }

  friend bool operator==(const Causet& a, const Causet& b) {
    return a.n_ == b.n_ && a.code_ == b.code_;
  }
  friend bool operator!=(const Causet& a, const Causet& b) { return !(a == b); }
  friend bool operator<(const Causet& a, const Causet& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return a.code_ < b.code_;
  }

 private:
  int n_ = 0;
  std::array<ElementMask, max_size> up_{};    // up_[i] bit j: i strictly precedes j
  std::array<ElementMask, max_size> down_{};  // transpose of up_
  std::array<std::int8_t, max_size> level_{};
  int height_ = 0;
  int width_ = 0;
  std::string code_;

  ElementMask down_closure(ElementMask a) const {
    ElementMask out = a;
    for (int i = 0; i < n_; ++i)
      if ((a >> i) & 1) out |= down_[i];
    return out;
  }

  void add_relation_checked(int i, int j, std::size_t pos) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
      throw ParseError("index out of range", pos);
    if (i == j || precedes(j, i)) throw ParseError("cycle detected", pos);
    // close transitively: everything at or below i precedes everything at or above j
    ElementMask below = down_mask_of(i) | ElementMask(1u << i);
    ElementMask above = up_mask_of(j) | ElementMask(1u << j);
    for (int a = 0; a < n_; ++a)
      if ((below >> a) & 1) up_[a] |= above & ~ElementMask(1u << a);
    for (int a = 0; a < n_; ++a)
      if ((up_[a] >> a) & 1) throw ParseError("cycle detected", pos);
  }

  // During construction down_ is not yet maintained; recompute on demand.
  ElementMask down_mask_of(int v) const {
    ElementMask m = 0;
    for (int i = 0; i < n_; ++i)
      if ((up_[i] >> v) & 1) m |= ElementMask(1u << i);
    return m;
  }
  ElementMask up_mask_of(int v) const { return up_[v]; }

  template <typename F>
  void enumerate_antichains(F&& emit) const {
    // DFS over elements in index order; allowed = elements > last that are
    // incomparable with everything chosen so far.
    auto rec = [&](auto&& self, ElementMask chosen, int next) -> void {
      emit(chosen);
      for (int i = next; i < n_; ++i) {
        if ((chosen & (up_[i] | down_[i])) == 0) self(self, ElementMask(chosen | (1u << i)), i + 1);
      }
    };
    rec(rec, 0, 0);
  }

  /// (dh, dw) of the extension by antichain a, without building the child.
  std::pair<int, int> extension_delta(ElementMask a) const {
    int lv = 1;
    for (int i = 0; i < n_; ++i)
      if ((a >> i) & 1) lv = std::max(lv, level_[i] + 1);
    int child_h = std::max(height_, lv);
    int child_w = child_width(a);
    return {child_h - height_, child_w - width_};
  }

  int child_width(ElementMask a) const {
    // Width of the extension via Dilworth: n+1 minus a maximum matching in
    // the comparability bigraph.
    std::array<ElementMask, max_size + 1> rows{};
    ElementMask below = down_closure(a);
    int m = n_ + 1;
    for (int i = 0; i < n_; ++i) {
      rows[i] = up_[i];
      // new element has index n_; uses a 32-bit row internally below
    }
    return matching_width(rows.data(), m, below);
  }

  static int matching_width(const ElementMask* up_rows, int m, ElementMask below_new) {
    // comparability edges i -> j whenever i precedes j in the extension
    std::array<std::uint32_t, max_size + 1> adj{};
    for (int i = 0; i < m - 1; ++i) {
      adj[i] = up_rows[i];
      if ((below_new >> i) & 1) adj[i] |= 1u << (m - 1);
    }
    adj[m - 1] = 0;
    std::array<int, max_size + 1> match_r{};
    match_r.fill(-1);
    int matched = 0;
    for (int i = 0; i < m; ++i) {
      std::uint32_t visited = 0;
      auto try_kuhn = [&](auto&& self, int u) -> bool {
        std::uint32_t cand = adj[u] & ~visited;
        visited |= cand;
        for (int v = 0; v < m; ++v)
          if ((cand >> v) & 1) {
            if (match_r[v] < 0 || self(self, match_r[v])) {
              match_r[v] = u;
              return true;
            }
          }
        return false;
      };
      if (try_kuhn(try_kuhn, i)) ++matched;
    }
    return m - matched;
  }

  void compute_stats() {
    // levels: process vertices by ascending down-set size
    std::array<int, max_size> idx{};
    for (int i = 0; i < n_; ++i) {
      down_[i] = 0;
      idx[i] = i;
    }
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (precedes(i, j)) down_[j] |= ElementMask(1u << i);
    std::sort(idx.begin(), idx.begin() + n_,
              [&](int a, int b) { return std::popcount(down_[a]) < std::popcount(down_[b]); });
    height_ = 0;
    for (int k = 0; k < n_; ++k) {
      int v = idx[k];
      int lv = 1;
      for (int u = 0; u < n_; ++u)
        if ((down_[v] >> u) & 1) lv = std::max(lv, level_[u] + 1);
      level_[v] = static_cast<std::int8_t>(lv);
      height_ = std::max(height_, lv);
    }
    width_ = exact_width();
  }

  int exact_width() const {
    std::array<std::uint32_t, max_size> adj{};
    for (int i = 0; i < n_; ++i) adj[i] = up_[i];
    std::array<int, max_size> match_r{};
    match_r.fill(-1);
    int matched = 0;
    for (int i = 0; i < n_; ++i) {
      std::uint32_t visited = 0;
      auto try_kuhn = [&](auto&& self, int u) -> bool {
        std::uint32_t cand = adj[u] & ~visited;
        visited |= cand;
        for (int v = 0; v < n_; ++v)
          if ((cand >> v) & 1) {
            if (match_r[v] < 0 || self(self, match_r[v])) {
              match_r[v] = u;
              return true;
            }
          }
        return false;
      };
      if (try_kuhn(try_kuhn, i)) ++matched;
    }
    return n_ - matched;
  }

  /// Relabels storage to the canonical form: the vertex order minimizing the
  /// incremental border string of the order matrix, searched over a
  /// degree/level refinement of the vertices.
  void canonicalize() {
    compute_stats();
    if (n_ == 1) {
      finalize_code();
      return;
    }

    // 1) isomorphism-invariant vertex signatures, refined to fixpoint
    std::array<std::uint64_t, max_size> sig{};
    for (int i = 0; i < n_; ++i) {
      std::uint64_t h = detail::hash_combine(0x42, std::popcount(up_[i]));
      h = detail::hash_combine(h, std::popcount(down_[i]));
      h = detail::hash_combine(h, static_cast<std::uint64_t>(level_[i]));
      sig[i] = h;
    }
    auto cell_count = [&]() {
      std::array<std::uint64_t, max_size> s = sig;
      std::sort(s.begin(), s.begin() + n_);
      return std::unique(s.begin(), s.begin() + n_) - s.begin();
    };
    long cells_before = cell_count();
    for (int round = 0; round < n_; ++round) {
      std::array<std::uint64_t, max_size> next{};
      for (int i = 0; i < n_; ++i) {
        std::vector<std::uint64_t> ups, downs;
        for (int j = 0; j < n_; ++j) {
          if (precedes(i, j)) ups.push_back(sig[j]);
          if (precedes(j, i)) downs.push_back(sig[j]);
        }
        std::sort(ups.begin(), ups.end());
        std::sort(downs.begin(), downs.end());
        std::uint64_t h = detail::hash_combine(sig[i], 0x75);
        for (auto v : ups) h = detail::hash_combine(h, v);
        h = detail::hash_combine(h, 0xd0);
        for (auto v : downs) h = detail::hash_combine(h, v);
        next[i] = h;
      }
      sig = next;
      long cells_after = cell_count();
      if (cells_after == cells_before) break;
      cells_before = cells_after;
    }

    // 2) cells ordered by invariant key (level first, so minimal elements
    //    label low and cover literals read bottom-up); positions are filled
    //    cell by cell
    auto key = [&](int v) {
      return std::tuple(static_cast<int>(level_[v]), std::popcount(down_[v]),
                        std::popcount(up_[v]), sig[v]);
    };
    std::array<int, max_size> order{};
    for (int i = 0; i < n_; ++i) order[i] = i;
    std::sort(order.begin(), order.begin() + n_,
              [&](int a, int b) { return key(a) < key(b) || (key(a) == key(b) && a < b); });
    std::array<int, max_size> cell_of_pos{};  // position -> cell id
    std::vector<std::vector<int>> cell_members;
    for (int k = 0; k < n_; ++k) {
      if (k == 0 || key(order[k]) != key(order[k - 1])) cell_members.emplace_back();
      cell_members.back().push_back(order[k]);
      cell_of_pos[k] = static_cast<int>(cell_members.size()) - 1;
    }

    // 3) minimize the border string over cell-respecting vertex orders
    const int total_bits = n_ * (n_ - 1);
    std::array<std::uint8_t, max_size*(max_size - 1)> best{};
    std::array<std::uint8_t, max_size*(max_size - 1)> cur{};
    std::memset(best.data(), 0xFF, static_cast<std::size_t>(total_bits));
    std::array<int, max_size> perm{}, best_perm{};
    std::array<bool, max_size> used{};
    used.fill(false);

    auto dfs = [&](auto&& self, int k, int offset) -> void {
      if (k == n_) {
        best_perm = perm;
        return;
      }
      const auto& cands = cell_members[static_cast<std::size_t>(cell_of_pos[k])];
      // true-twin skip: candidates with identical neighbourhoods are
      // interchangeable by an automorphism, so try only the first
      std::vector<std::pair<ElementMask, ElementMask>> tried;
      for (int v : cands) {
        if (used[v]) continue;
        bool twin = false;
        for (auto& t : tried)
          if (t.first == up_[v] && t.second == down_[v]) {
            twin = true;
            break;
          }
        if (twin) continue;
        tried.emplace_back(up_[v], down_[v]);

        int seg = 2 * k;
        for (int i = 0; i < k; ++i) {
          cur[offset + i] = static_cast<std::uint8_t>(precedes(v, perm[i]));
          cur[offset + k + i] = static_cast<std::uint8_t>(precedes(perm[i], v));
        }
        int cmp = std::memcmp(cur.data() + offset, best.data() + offset,
                              static_cast<std::size_t>(seg));
        if (cmp > 0) continue;
        if (cmp < 0) {
          std::memcpy(best.data(), cur.data(), static_cast<std::size_t>(offset + seg));
          std::memset(best.data() + offset + seg, 0xFF,
                      static_cast<std::size_t>(total_bits - offset - seg));
        }
        used[v] = true;
        perm[k] = v;
        self(self, k + 1, offset + seg);
        used[v] = false;
      }
    };
    dfs(dfs, 0, 0);

    // 4) relabel storage by the winning permutation (position -> old vertex)
    std::array<ElementMask, max_size> new_up{};
    for (int p = 0; p < n_; ++p) {
      ElementMask row = 0;
      for (int q = 0; q < n_; ++q)
        if (precedes(best_perm[p], best_perm[q])) row |= ElementMask(1u << q);
      new_up[p] = row;
    }
    up_ = new_up;
    compute_stats();
    finalize_code();
  }

  void finalize_code() {
    code_.clear();
    code_.push_back(static_cast<char>(n_));
    int bits = n_ * n_;
    for (int b = 0; b < bits; b += 8) {
      std::uint8_t byte = 0;
      for (int k = 0; k < 8 && b + k < bits; ++k) {
        int r = (b + k) / n_, c = (b + k) % n_;
        if (precedes(r, c)) byte |= std::uint8_t(0x80u >> k);
      }
      code_.push_back(static_cast<char>(byte));
    }
  }
};

struct OffspringRecord {
  Causet child;
  int multiplicity = 0;
  OffspringKind kind = OffspringKind::Mild;
};

inline std::vector<OffspringRecord> Causet::offspring() const {
  if (n_ + 1 > max_size) throw std::invalid_argument("offspring: size cap exceeded");
  std::map<std::string, OffspringRecord> classes;
  for (ElementMask a : antichains()) {
    Causet child = extend(a);
    int dh = child.height() - height_;
    int dw = child.width() - width_;
    OffspringKind kind;
    if (dh == 1 && dw == 0)
      kind = OffspringKind::Height;
    else if (dh == 0 && dw == 1)
      kind = OffspringKind::Width;
    else if (dh == 0 && dw == 0)
      kind = OffspringKind::Mild;
    else
      throw std::logic_error("offspring changes height and width at once");
    auto [it, inserted] = classes.emplace(child.code(), OffspringRecord{child, 1, kind});
    if (!inserted) {
      if (it->second.kind != kind)
        throw std::logic_error("isomorphic offspring classified inconsistently");
      ++it->second.multiplicity;
    }
  }
  std::vector<OffspringRecord> out;
  out.reserve(classes.size());
  for (auto& [k, v] : classes) out.push_back(v);
  return out;
}

}  // namespace causets
