#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "causets/qmeasure.hpp"

namespace causets {

/// Global indexing of the causets with |x| <= N, level by level.
struct SiteIndex {
  int N = 0;
  std::vector<int> level_offset;  // per level 1..N, plus total
  std::vector<int> level_of_site;
  const Growth* growth = nullptr;

  static SiteIndex build(const Growth& g, int N) {
    if (N > g.max_level()) throw std::invalid_argument("SiteIndex: levels not built to N");
    SiteIndex s;
    s.N = N;
    s.growth = &g;
    s.level_offset.assign(static_cast<std::size_t>(N) + 1, 0);
    for (int k = 1; k <= N; ++k) {
      s.level_offset[static_cast<std::size_t>(k)] =
          s.level_offset[static_cast<std::size_t>(k - 1)] +
          static_cast<int>(g.level(k).causets.size());
    }
    s.level_of_site.resize(static_cast<std::size_t>(s.count()));
    for (int k = 1; k <= N; ++k)
      for (int i = s.level_offset[static_cast<std::size_t>(k - 1)];
           i < s.level_offset[static_cast<std::size_t>(k)]; ++i)
        s.level_of_site[static_cast<std::size_t>(i)] = k;
    return s;
  }

  int count() const { return level_offset.back(); }
  int of(int level, int idx) const { return level_offset[static_cast<std::size_t>(level - 1)] + idx; }
  int of(const Causet& c) const {
    int idx = growth->find(c);
    if (idx < 0 || c.size() > N) throw std::invalid_argument("site not in truncation: " + c.literal());
    return of(c.size(), idx);
  }
  int level(int site) const { return level_of_site[static_cast<std::size_t>(site)]; }
  int index_in_level(int site) const {
    return site - level_offset[static_cast<std::size_t>(level(site) - 1)];
  }
  const Causet& causet(int site) const {
    return growth->causet(level(site), index_in_level(site));
  }
};

/// The site decoherence table D(x, y) over the truncation, with mu(x) on the
/// diagonal. D(x, y) = D_n(A_x, A_y) for any n >= max(|x|, |y|).
struct SiteDecoherence {
  SiteIndex sites;
  int eval_level = 0;  // the n the table was computed from
  Eigen::MatrixXcd D;

  Complex at(int sx, int sy) const { return D(sx, sy); }
  double mu(int s) const { return D(s, s).real(); }

  double hermitian_residual() const { return (D - D.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
};

/// Builds the site decoherence table from the process at `eval_level`
/// (defaults to N). Computing it at a deeper level must give the same table.
inline SiteDecoherence site_decoherence(const Growth& g, const Process& process, int N,
                                        int eval_level = 0) {
  if (eval_level == 0) eval_level = N;
  if (eval_level < N) throw std::invalid_argument("site_decoherence: eval level below truncation");
  SiteDecoherence sd;
  sd.sites = SiteIndex::build(g, N);
  sd.eval_level = eval_level;
  const int S = sd.sites.count();
  sd.D = Eigen::MatrixXcd::Zero(S, S);
  const ProbabilityOperator& op = process.at(eval_level);
  const PathSpace& ps = g.paths(eval_level);
  if (ps.count != op.dim())
    throw std::invalid_argument("site_decoherence: operator dimension mismatch");

  switch (op.form()) {
    case ProbabilityOperator::Form::Rank1: {
      const Eigen::VectorXcd& a = op.amplitudes();
      Eigen::VectorXcd nu = Eigen::VectorXcd::Zero(S);
      for (std::size_t p = 0; p < ps.count; ++p)
        for (int k = 1; k <= N; ++k)
          nu[sd.sites.of(k, ps.entry(p, k))] += a[static_cast<Eigen::Index>(p)];
      sd.D = nu.conjugate() * nu.transpose();
      break;
    }
    case ProbabilityOperator::Form::Diagonal: {
      for (std::size_t p = 0; p < ps.count; ++p) {
        double w = op.kernel(p, p).real();
        for (int k = 1; k <= N; ++k) {
          int sx = sd.sites.of(k, ps.entry(p, k));
          for (int l = 1; l <= N; ++l) {
            int sy = sd.sites.of(l, ps.entry(p, l));
            sd.D(sx, sy) += Complex(w, 0);
          }
        }
      }
      break;
    }
    case ProbabilityOperator::Form::Dense: {
      std::vector<PathSet> buckets(static_cast<std::size_t>(S), PathSet(ps.count));
      for (std::size_t p = 0; p < ps.count; ++p)
        for (int k = 1; k <= N; ++k)
          buckets[static_cast<std::size_t>(sd.sites.of(k, ps.entry(p, k)))].set(p);
      for (int sx = 0; sx < S; ++sx)
        for (int sy = 0; sy < S; ++sy)
          sd.D(sx, sy) = op.decoherence(buckets[static_cast<std::size_t>(sx)],
                                        buckets[static_cast<std::size_t>(sy)]);
      break;
    }
  }
  return sd;
}

/// A path prefix resolved to global site indices, one per level 1..N.
struct SitePath {
  std::vector<int> site;  // site[k-1] = global index of the level-k entry

  int at(int k) const { return site.at(static_cast<std::size_t>(k - 1)); }
  int length() const { return static_cast<int>(site.size()); }
  bool contains(int s, const SiteIndex& idx) const {
    int k = idx.level(s);
    return k <= length() && at(k) == s;
  }
};

inline SitePath resolve_path(const SiteIndex& idx, const Path& p) {
  if (p.length() < idx.N)
    throw std::invalid_argument("path shorter than the truncation depth N");
  SitePath out;
  for (int k = 1; k <= idx.N; ++k)
    out.site.push_back(idx.of(k, p.entries[static_cast<std::size_t>(k - 1)]));
  return out;
}

/// Sparse linear operator on the pair basis {e_x (x) e_y}. Faithful to the
/// untruncated operator on the interior mask: both levels at least 2 and at
/// most N-1 (the shift operators move one level up).
class SparsePairOperator {
 public:
  SparsePairOperator(const SiteIndex& sites)
      : S_(sites.count()), N_(sites.N), action_(static_cast<std::size_t>(S_) * static_cast<std::size_t>(S_)) {}

  int site_count() const { return S_; }
  int truncation() const { return N_; }
  std::size_t dim() const { return static_cast<std::size_t>(S_) * static_cast<std::size_t>(S_); }
  std::size_t pair_index(int sx, int sy) const {
    return static_cast<std::size_t>(sx) * static_cast<std::size_t>(S_) + static_cast<std::size_t>(sy);
  }
  std::pair<int, int> pair_of(std::size_t p) const {
    return {static_cast<int>(p / static_cast<std::size_t>(S_)),
            static_cast<int>(p % static_cast<std::size_t>(S_))};
  }

  void add(std::size_t source, std::size_t target, Complex coeff) {
    if (coeff == Complex(0, 0)) return;
    auto& list = action_[source];
    for (auto& [t, c] : list)
      if (t == target) {
        c += coeff;
        return;
      }
    list.emplace_back(target, coeff);
  }

  const std::vector<std::pair<std::size_t, Complex>>& apply(std::size_t source) const {
    return action_[source];
  }

  Complex coefficient(std::size_t source, std::size_t target) const {
    for (auto& [t, c] : action_[source])
      if (t == target) return c;
    return Complex(0, 0);
  }

  std::size_t nonzero_count() const {
    std::size_t n = 0;
    for (auto& l : action_) n += l.size();
    return n;
  }

  /// this + scale * other.
  SparsePairOperator combine(const SparsePairOperator& other, Complex scale) const {
    SparsePairOperator out = *this;
    for (std::size_t s = 0; s < other.action_.size(); ++s)
      for (auto& [t, c] : other.action_[s]) out.add(s, t, scale * c);
    out.prune();
    return out;
  }

  /// Composition this(other(.)).
  SparsePairOperator compose(const SparsePairOperator& other) const {
    SparsePairOperator out(*this);
    for (auto& l : out.action_) l.clear();
    for (std::size_t s = 0; s < other.action_.size(); ++s)
      for (auto& [mid, c1] : other.action_[s])
        for (auto& [t, c2] : action_[mid]) out.add(s, t, c1 * c2);
    out.prune();
    return out;
  }

  void prune(double tol = 0.0) {
    for (auto& l : action_) {
      std::erase_if(l, [tol](const auto& e) { return std::abs(e.second) <= tol; });
    }
  }

  Eigen::MatrixXcd dense() const {
    if (dim() > 1u << 20) throw std::length_error("dense: pair dimension too large");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim()),
                                                static_cast<Eigen::Index>(dim()));
    for (std::size_t s = 0; s < action_.size(); ++s)
      for (auto& [t, c] : action_[s])
        m(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) = c;
    return m;
  }

 private:
  int S_ = 0;
  int N_ = 0;
  std::vector<std::vector<std::pair<std::size_t, Complex>>> action_;
};

inline bool interior_pair(const SiteIndex& idx, int sx, int sy) {
  int lx = idx.level(sx), ly = idx.level(sy);
  return lx >= 2 && ly >= 2 && lx + 1 <= idx.N && ly + 1 <= idx.N;
}

/// The covariant bidifference operator. Basis pairs off the two paths, and
/// pairs touching level 1 (where the downward index is undefined), map to 0.
inline SparsePairOperator nabla(const SiteDecoherence& sd, const SitePath& w, const SitePath& wp) {
  SparsePairOperator op(sd.sites);
  const int N = sd.sites.N;
  for (int ku = 2; ku <= N; ++ku)
    for (int kv = 2; kv <= N; ++kv) {
      int u = w.at(ku), v = wp.at(kv);
      std::size_t src = op.pair_index(u, v);
      op.add(src, src, sd.at(w.at(ku - 1), wp.at(kv - 1)));
      if (ku + 1 <= N && kv + 1 <= N) {
        int tu = w.at(ku + 1), tv = wp.at(kv + 1);
        op.add(src, op.pair_index(tu, tv), -sd.at(tu, tv));
      }
    }
  op.prune();
  return op;
}

/// Discrete curvature: the antisymmetrized bidifference.
inline SparsePairOperator curvature(const SiteDecoherence& sd, const SitePath& w,
                                    const SitePath& wp) {
  return nabla(sd, w, wp).combine(nabla(sd, wp, w), Complex(-1, 0));
}

/// Discrete metric operator: the up-shift parts of the Einstein identity.
inline SparsePairOperator metric_op(const SiteDecoherence& sd, const SitePath& w,
                                    const SitePath& wp) {
  SparsePairOperator op(sd.sites);
  const int N = sd.sites.N;
  // (w, w') pairs: - D(w_{|u|+1}, w'_{|v|+1}) onto the shifted pair
  for (int ku = 2; ku <= N; ++ku)
    for (int kv = 2; kv <= N; ++kv) {
      int u = w.at(ku), v = wp.at(kv);
      if (ku + 1 <= N && kv + 1 <= N) {
        int tu = w.at(ku + 1), tv = wp.at(kv + 1);
        op.add(op.pair_index(u, v), op.pair_index(tu, tv), -sd.at(tu, tv));
      }
    }
  // (w', w) pairs: + D(w'_{|u|+1}, w_{|v|+1}) onto the shifted pair
  for (int ku = 2; ku <= N; ++ku)
    for (int kv = 2; kv <= N; ++kv) {
      int u = wp.at(ku), v = w.at(kv);
      if (ku + 1 <= N && kv + 1 <= N) {
        int tu = wp.at(ku + 1), tv = w.at(kv + 1);
        op.add(op.pair_index(u, v), op.pair_index(tu, tv), sd.at(tu, tv));
      }
    }
  op.prune();
  return op;
}

/// Discrete mass-energy operator: the diagonal part of the Einstein identity.
inline SparsePairOperator mass_energy_op(const SiteDecoherence& sd, const SitePath& w,
                                         const SitePath& wp) {
  SparsePairOperator op(sd.sites);
  const int N = sd.sites.N;
  for (int ku = 2; ku <= N; ++ku)
    for (int kv = 2; kv <= N; ++kv) {
      int u = w.at(ku), v = wp.at(kv);
      std::size_t src = op.pair_index(u, v);
      op.add(src, src, sd.at(w.at(ku - 1), wp.at(kv - 1)));
    }
  for (int ku = 2; ku <= N; ++ku)
    for (int kv = 2; kv <= N; ++kv) {
      int u = wp.at(ku), v = w.at(kv);
      std::size_t src = op.pair_index(u, v);
      op.add(src, src, -sd.at(wp.at(ku - 1), w.at(kv - 1)));
    }
  op.prune();
  return op;
}

/// Adjoint of the metric operator, the down-shift annihilation form.
inline SparsePairOperator adjoint_metric(const SiteDecoherence& sd, const SitePath& w,
                                         const SitePath& wp) {
  SparsePairOperator op(sd.sites);
  const int N = sd.sites.N;
  for (int ku = 2; ku <= N; ++ku)
    for (int kv = 2; kv <= N; ++kv) {
      int u = w.at(ku), v = wp.at(kv);
      op.add(op.pair_index(u, v), op.pair_index(w.at(ku - 1), wp.at(kv - 1)),
             -std::conj(sd.at(u, v)));
    }
  for (int ku = 2; ku <= N; ++ku)
    for (int kv = 2; kv <= N; ++kv) {
      int u = wp.at(ku), v = w.at(kv);
      op.add(op.pair_index(u, v), op.pair_index(wp.at(ku - 1), w.at(kv - 1)),
             std::conj(sd.at(u, v)));
    }
  op.prune();
  return op;
}

/// Contraction of a pair-space operator to site space: f(x) = (Op f)(x, x).
struct SiteContraction {
  int S = 0;
  std::vector<std::vector<std::pair<int, Complex>>> action;  // per pair-basis source

  static SiteContraction of(const SparsePairOperator& op) {
    SiteContraction c;
    c.S = op.site_count();
    c.action.resize(op.dim());
    for (std::size_t s = 0; s < op.dim(); ++s)
      for (auto& [t, coeff] : op.apply(s)) {
        auto [x, y] = op.pair_of(t);
        if (x == y) c.action[s].emplace_back(x, coeff);
      }
    return c;
  }

  Complex coefficient(std::size_t source, int site) const {
    Complex out(0, 0);
    for (auto& [x, c] : action[source])
      if (x == site) out += c;
    return out;
  }
};

struct ContractedOps {
  SiteContraction curvature_hat, metric_hat, mass_hat;
};

inline ContractedOps contracted_ops(const SiteDecoherence& sd, const SitePath& w,
                                    const SitePath& wp) {
  ContractedOps out;
  out.curvature_hat = SiteContraction::of(curvature(sd, w, wp));
  out.metric_hat = SiteContraction::of(metric_op(sd, w, wp));
  out.mass_hat = SiteContraction::of(mass_energy_op(sd, w, wp));
  return out;
}

// ---------------------------------------------------------------------------
// Verification reports.

struct BasisActionReport {
  int pairs_checked = 0;
  int case_a = 0, case_b = 0, case_both = 0, off_path = 0, entangled = 0;
  double metric_residual = 0;
  double mass_residual = 0;
  double adjoint_residual = 0;
  std::string witness;
  bool ok(double tol) const {
    return metric_residual <= tol && mass_residual <= tol && adjoint_residual <= tol;
  }
};

/// Checks the sparse metric and mass-energy actions against the closed
/// per-case formulas, and the adjoint against the closed annihilation form,
/// on every interior basis pair.
inline BasisActionReport verify_basis_action(const SiteDecoherence& sd, const SitePath& w,
                                             const SitePath& wp) {
  BasisActionReport rep;
  const SiteIndex& idx = sd.sites;
  const int S = idx.count();
  const int N = idx.N;
  SparsePairOperator metric = metric_op(sd, w, wp);
  SparsePairOperator mass = mass_energy_op(sd, w, wp);
  SparsePairOperator adj = adjoint_metric(sd, w, wp);

  auto level_at = [&](const SitePath& p, int k) { return p.at(k); };
  for (int u = 0; u < S; ++u)
    for (int v = 0; v < S; ++v) {
      if (!interior_pair(idx, u, v)) continue;
      ++rep.pairs_checked;
      int lu = idx.level(u), lv = idx.level(v);
      bool on_wwp = w.contains(u, idx) && wp.contains(v, idx);
      bool on_wpw = wp.contains(u, idx) && w.contains(v, idx);
      std::size_t src = metric.pair_index(u, v);

      // expected metric action
      std::map<std::size_t, Complex> expect_metric, expect_mass, expect_adj;
      if (on_wwp) {
        int tu = level_at(w, lu + 1), tv = level_at(wp, lv + 1);
        expect_metric[metric.pair_index(tu, tv)] += -sd.at(tu, tv);
        expect_mass[src] += sd.at(level_at(w, lu - 1), level_at(wp, lv - 1));
        expect_adj[metric.pair_index(level_at(w, lu - 1), level_at(wp, lv - 1))] +=
            -std::conj(sd.at(u, v));
      }
      if (on_wpw) {
        int tu = level_at(wp, lu + 1), tv = level_at(w, lv + 1);
        expect_metric[metric.pair_index(tu, tv)] += sd.at(tu, tv);
        expect_mass[src] += -sd.at(level_at(wp, lu - 1), level_at(w, lv - 1));
        expect_adj[metric.pair_index(level_at(wp, lu - 1), level_at(w, lv - 1))] +=
            std::conj(sd.at(u, v));
      }
      if (on_wwp && on_wpw) {
        ++rep.case_both;
        if (u == v) ++rep.entangled;
      } else if (on_wwp) {
        ++rep.case_a;
      } else if (on_wpw) {
        ++rep.case_b;
      } else {
        ++rep.off_path;
      }

      auto compare = [&](const SparsePairOperator& op, const std::map<std::size_t, Complex>& exp,
                         double& residual, const char* what) {
        std::map<std::size_t, Complex> got;
        for (auto& [t, c] : op.apply(src)) got[t] += c;
        for (auto& [t, c] : exp) {
          double r = std::abs(got.count(t) ? got[t] - c : -c);
          if (r > residual) {
            residual = r;
            rep.witness = std::string(what) + " at (" + idx.causet(u).literal() + ", " +
                          idx.causet(v).literal() + ")";
          }
        }
        for (auto& [t, c] : got) {
          if (!exp.count(t)) {
            double r = std::abs(c);
            if (r > residual) {
              residual = r;
              rep.witness = std::string(what) + " stray target at (" + idx.causet(u).literal() +
                            ", " + idx.causet(v).literal() + ")";
            }
          }
        }
      };
      compare(metric, expect_metric, rep.metric_residual, "metric");
      compare(mass, expect_mass, rep.mass_residual, "mass-energy");
      compare(adj, expect_adj, rep.adjoint_residual, "adjoint");
      (void)N;
    }
  return rep;
}

/// Max residual of <D f, g> - <f, D* g> over interior basis pairs f, g.
/// With the inner product conjugate-linear in its first slot this is
/// conj(coeff of g in D f) - (coeff of f in D* g); only pairs where either
/// coefficient is nonzero can contribute.
inline double adjoint_pairing_residual(const SiteDecoherence& sd, const SparsePairOperator& metric,
                                       const SparsePairOperator& adj) {
  const SiteIndex& idx = sd.sites;
  auto interior = [&](std::size_t p) {
    auto [x, y] = metric.pair_of(p);
    return interior_pair(idx, x, y);
  };
  double worst = 0;
  for (std::size_t f = 0; f < metric.dim(); ++f) {
    if (!interior(f)) continue;
    for (auto& [g, c] : metric.apply(f)) {
      if (!interior(g)) continue;
      worst = std::max(worst, std::abs(std::conj(c) - adj.coefficient(g, f)));
    }
    for (auto& [g, c] : adj.apply(f)) {
      if (!interior(g)) continue;
      // here f plays the role of the second argument: <D g', f> vs <g', D* f>
      worst = std::max(worst, std::abs(std::conj(metric.coefficient(g, f)) - c));
    }
  }
  return worst;
}

struct CommutatorReport {
  int case_a_pairs = 0;
  double dd_star_residual = 0;   // D D* = |D(x,y)|^2 on the diagonal
  double d_star_d_residual = 0;  // D* D = |D(x+, y+)|^2
  double dt_residual = 0;        // D T = -D(x+,y+) D(x-,y-) shift
  double td_residual = 0;        // T D = -D(x+,y+) D(x,y) shift
  bool witness_found = false;
  std::string witness;
  double witness_gap = 0;
};

/// Evaluates the four operator products on interior case-(a) pairs against
/// their closed forms and hunts for a non-commuting witness, which exists
/// wherever |D(x,y)| differs from |D(x+, y+)|.
inline CommutatorReport commutator_report(const SiteDecoherence& sd, const SitePath& w,
                                          const SitePath& wp, double tol = default_tolerance) {
  CommutatorReport rep;
  const SiteIndex& idx = sd.sites;
  SparsePairOperator metric = metric_op(sd, w, wp);
  SparsePairOperator mass = mass_energy_op(sd, w, wp);
  SparsePairOperator adj = adjoint_metric(sd, w, wp);
  SparsePairOperator dd_star = metric.compose(adj);
  SparsePairOperator d_star_d = adj.compose(metric);
  SparsePairOperator dt = metric.compose(mass);
  SparsePairOperator td = mass.compose(metric);

  const int N = idx.N;
  auto wwp_only = [&](int u, int v) {
    return w.contains(u, idx) && wp.contains(v, idx) &&
           !(wp.contains(u, idx) && w.contains(v, idx));
  };
  for (int ku = 2; ku + 1 <= N; ++ku)
    for (int kv = 2; kv + 1 <= N; ++kv) {
      int u = w.at(ku), v = wp.at(kv);
      int un = w.at(ku + 1), vn = wp.at(kv + 1);
      int ud = w.at(ku - 1), vd = wp.at(kv - 1);
      if (!wwp_only(u, v) || !wwp_only(un, vn) || !wwp_only(ud, vd)) continue;
      ++rep.case_a_pairs;
      std::size_t src = metric.pair_index(u, v);
      std::size_t up = metric.pair_index(un, vn);
      Complex duv = sd.at(u, v), dup = sd.at(un, vn), ddown = sd.at(ud, vd);

      rep.dd_star_residual = std::max(
          rep.dd_star_residual, std::abs(dd_star.coefficient(src, src) - Complex(std::norm(duv), 0)));
      rep.d_star_d_residual = std::max(
          rep.d_star_d_residual,
          std::abs(d_star_d.coefficient(src, src) - Complex(std::norm(dup), 0)));
      rep.dt_residual = std::max(rep.dt_residual,
                                 std::abs(dt.coefficient(src, up) - (-dup * ddown)));
      rep.td_residual = std::max(rep.td_residual,
                                 std::abs(td.coefficient(src, up) - (-dup * duv)));

      double gap = std::abs(std::norm(duv) - std::norm(dup));
      if (gap > tol && (!rep.witness_found || gap > rep.witness_gap)) {
        rep.witness_found = true;
        rep.witness_gap = gap;
        rep.witness = "(" + idx.causet(u).literal() + ", " + idx.causet(v).literal() + ")";
      }
    }
  return rep;
}

struct FlatnessReport {
  bool process_classical = true;
  std::vector<std::string> mu_violators;  // x with >1 producer and mu(x) != 0
  std::vector<double> level_mass;         // sum of mu over each level 1..N
  double level_mass_residual = 0;
  double incomparable_residual = 0;
  std::string incomparable_witness;
  double max_imaginary = 0;  // max |Im D| over the table; classical => T-hat = 0
  bool metric_witness_found = false;
  std::string metric_witness;
};

/// Classical flatness analysis: locates causets with several producers and
/// nonvanishing mu (each one a nonzero-metric witness), confirms the level
/// masses sum to one, and checks D vanishes on incomparable pairs.
inline FlatnessReport flatness_analysis(const Growth& g, const Process& process,
                                        const SiteDecoherence& sd,
                                        double tol = default_tolerance) {
  FlatnessReport rep;
  const SiteIndex& idx = sd.sites;
  const int N = idx.N;
  for (int n = 1; n <= std::min(N, process.max_level()); ++n)
    if (!process.at(n).is_classical(tol)) rep.process_classical = false;
  if (!rep.process_classical)
    throw std::invalid_argument("flatness_analysis: process is not classical");

  // (i) causets with more than one producer and nonzero mu
  for (int s = 0; s < idx.count(); ++s) {
    if (idx.level(s) < 2) continue;
    if (idx.causet(s).producers().size() > 1 && sd.mu(s) > tol)
      rep.mu_violators.push_back(idx.causet(s).literal());
  }

  // (ii) mu is a probability measure on each level
  for (int n = 1; n <= N; ++n) {
    double total = 0;
    for (int i = 0; i < static_cast<int>(g.level(n).causets.size()); ++i)
      total += sd.mu(idx.of(n, i));
    rep.level_mass.push_back(total);
    rep.level_mass_residual = std::max(rep.level_mass_residual, std::abs(total - 1.0));
  }

  // (iii) D(x, y) = 0 unless x and y are comparable in the growth order
  std::vector<std::vector<bool>> reach(static_cast<std::size_t>(idx.count()),
                                       std::vector<bool>(static_cast<std::size_t>(idx.count()), false));
  for (int n = 1; n < N; ++n) {
    const GrowthLevel& lvl = g.level(n + 1);
    for (const Transition& t : lvl.transitions)
      reach[static_cast<std::size_t>(idx.of(n, t.parent))]
           [static_cast<std::size_t>(idx.of(n + 1, t.child))] = true;
  }
  for (int s = 0; s < idx.count(); ++s)
    for (int m = 0; m < idx.count(); ++m)
      if (reach[static_cast<std::size_t>(s)][static_cast<std::size_t>(m)])
        for (int t = 0; t < idx.count(); ++t)
          if (reach[static_cast<std::size_t>(m)][static_cast<std::size_t>(t)])
            reach[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] = true;
  for (int s = 0; s < idx.count(); ++s)
    for (int t = 0; t < idx.count(); ++t) {
      bool comparable = s == t || reach[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] ||
                        reach[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)];
      rep.max_imaginary = std::max(rep.max_imaginary, std::abs(sd.at(s, t).imag()));
      if (!comparable) {
        double r = std::abs(sd.at(s, t));
        if (r > rep.incomparable_residual) {
          rep.incomparable_residual = r;
          rep.incomparable_witness =
              "(" + idx.causet(s).literal() + ", " + idx.causet(t).literal() + ")";
        }
      }
    }

  // metric witness: paths through two distinct producers of a violator
  if (!rep.mu_violators.empty()) {
    Causet x = Causet::parse(rep.mu_violators.front());
    auto prods = x.producers();
    auto path_through = [&](const Causet& producer) {
      std::vector<int> entries;
      // arbitrary path down to the producer: peel maximal elements
      std::vector<Causet> down{x, producer};
      while (down.back().size() > 1) down.push_back(down.back().producers().front());
      for (auto it = down.rbegin(); it != down.rend(); ++it) entries.push_back(g.find(*it));
      // arbitrary continuation up to N: first child each step
      while (static_cast<int>(entries.size()) < N) {
        int n = static_cast<int>(entries.size());
        entries.push_back(g.children_of(n, entries.back()).front().child);
      }
      Path p;
      p.entries = entries;
      return resolve_path(idx, p);
    };
    SitePath pw = path_through(prods[0]);
    SitePath pwp = path_through(prods[1]);
    SparsePairOperator metric = metric_op(sd, pw, pwp);
    for (std::size_t s = 0; s < metric.dim() && !rep.metric_witness_found; ++s)
      for (auto& [t, c] : metric.apply(s))
        if (std::abs(c) > tol) {
          auto [sx, sy] = metric.pair_of(s);
          rep.metric_witness_found = true;
          rep.metric_witness = "metric nonzero on (" + idx.causet(sx).literal() + ", " +
                               idx.causet(sy).literal() + "), coefficient " +
                               std::to_string(std::abs(c));
          break;
        }
  }
  return rep;
}

/// A uniformly random path prefix of length n.
inline Path random_path(const Growth& g, int n, std::mt19937_64& rng) {
  Path p;
  p.entries.push_back(0);
  for (int k = 1; k < n; ++k) {
    auto kids = g.children_of(k, p.entries.back());
    p.entries.push_back(kids[rng() % kids.size()].child);
  }
  return p;
}

}  // namespace causets
