#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "causets/qmeasure.hpp"

namespace causets {

/// e^{2 pi i k / n}, evaluated after exact rational reduction of k/n so that
/// quarter-turn multiples come out bit-exact and root-of-unity cancellations
/// survive double precision.
inline Complex unit_root(long k, long n) {
  if (n <= 0) throw std::invalid_argument("unit_root: denominator must be positive");
  k %= n;
  if (k < 0) k += n;
  long g = std::gcd(k, n);
  k /= g;
  n /= g;
  if (k == 0) return Complex(1, 0);
  if (4 * k == n) return Complex(0, 1);
  if (2 * k == n) return Complex(-1, 0);
  if (4 * k == 3 * n) return Complex(0, -1);
  double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return Complex(std::cos(theta), std::sin(theta));
}

/// Per-causet data of the quantum action: order statistics, the
/// multiplicity-weighted offspring tallies and the closed-form partition
/// function [M] + [H] e^{2 pi i w/n} + [W] e^{2 pi i h/n}.
struct ActionProfile {
  int h = 0, w = 0, area = 0;
  long mild = 0, height = 0, width = 0;
  Complex z_closed;
  long branching() const { return mild + height + width; }  // [(x ->)]
};

inline ActionProfile action_profile(const Causet& x) {
  ActionProfile p;
  p.h = x.height();
  p.w = x.width();
  p.area = x.area();
  OffspringTally t = x.offspring_tally();
  p.mild = t.mild;
  p.height = t.height;
  p.width = t.width;
  long n = x.size();
  p.z_closed = Complex(static_cast<double>(t.mild), 0) +
               static_cast<double>(t.height) * unit_root(p.w, n) +
               static_cast<double>(t.width) * unit_root(p.h, n);
  return p;
}

/// z(x) from the defining sum over antichain extensions, one phase term per
/// extension. Independent of the tally route; the two must agree.
inline Complex partition_function_sum(const Causet& x) {
  Complex z(0, 0);
  long n = x.size();
  for (ElementMask a : x.antichains()) {
    Causet child = x.extend(a);
    long delta = child.area() - x.area();
    z += unit_root(delta, n);
  }
  return z;
}

/// Transition amplitudes on the materialized growth levels, stored aligned
/// with each level's transition array.
struct TransitionAmplitudeTable {
  std::string name;
  int max_level = 1;  // covers transitions between levels 1..max_level
  std::vector<std::vector<Complex>> amps;  // amps[k][t]: transition t into level k+2

  Complex at(int child_level, std::size_t t) const {
    return amps[static_cast<std::size_t>(child_level - 2)][t];
  }

  /// Amplitude for parent index p -> child index c between adjacent levels.
  Complex lookup(const Growth& g, int parent_level, int parent, int child) const {
    const GrowthLevel& lvl = g.level(parent_level + 1);
    for (int t = lvl.parent_offset[static_cast<std::size_t>(parent)];
         t < lvl.parent_offset[static_cast<std::size_t>(parent) + 1]; ++t)
      if (lvl.transitions[static_cast<std::size_t>(t)].child == child)
        return at(parent_level + 1, static_cast<std::size_t>(t));
    return Complex(0, 0);  // x does not produce y
  }

  /// Worst |row sum - 1| over all covered parents.
  double row_sum_residual(const Growth& g) const {
    double worst = 0;
    for (int n = 2; n <= max_level; ++n) {
      const GrowthLevel& lvl = g.level(n);
      std::size_t parents = g.level(n - 1).causets.size();
      for (std::size_t p = 0; p < parents; ++p) {
        Complex s(0, 0);
        for (int t = lvl.parent_offset[p]; t < lvl.parent_offset[p + 1]; ++t)
          s += at(n, static_cast<std::size_t>(t));
        worst = std::max(worst, std::abs(s - Complex(1, 0)));
      }
    }
    return worst;
  }
};

/// Threshold below which a partition function counts as an exact zero; z is
/// a sum of roots of unity with integer weights, so genuine zeros are exact
/// and anything this small is one.
constexpr double z_zero_threshold = 1e-12;

/// The quantum-action transition table: a(x,y) = m(x->y)/z(x) *
/// e^{2 pi i (A(y)-A(x))/|x|}, with the uniform fallback 1/[(x->)] when
/// z(x) = 0.
inline TransitionAmplitudeTable action_table(const Growth& g) {
  TransitionAmplitudeTable table;
  table.name = "action";
  table.max_level = g.max_level();
  for (int n = 2; n <= g.max_level(); ++n) {
    const GrowthLevel& lvl = g.level(n);
    const GrowthLevel& prev = g.level(n - 1);
    std::vector<Complex> row(lvl.transitions.size());
    std::vector<ActionProfile> profiles;
    profiles.reserve(prev.causets.size());
    for (const Causet& x : prev.causets) profiles.push_back(action_profile(x));
    for (std::size_t t = 0; t < lvl.transitions.size(); ++t) {
      const Transition& tr = lvl.transitions[t];
      const ActionProfile& prof = profiles[static_cast<std::size_t>(tr.parent)];
      const Causet& child = lvl.causets[static_cast<std::size_t>(tr.child)];
      if (std::abs(prof.z_closed) < z_zero_threshold) {
        row[t] = Complex(1.0 / static_cast<double>(prof.branching()), 0);
      } else {
        long delta = child.area() - prof.area;
        row[t] = static_cast<double>(tr.multiplicity) / prof.z_closed *
                 unit_root(delta, n - 1);
      }
    }
    table.amps.push_back(std::move(row));
  }
  return table;
}

/// Real nonnegative transition table from a rule; the default rule is the
/// uniform one, m(x->y) / [(x->)]. Negative amplitudes are rejected unless
/// `permissive` (a signed table cannot back a positive diagonal operator).
inline TransitionAmplitudeTable classical_table(
    const Growth& g,
    const std::function<double(const Causet&, const Causet&, int)>& rule = {},
    bool permissive = false) {
  TransitionAmplitudeTable table;
  table.name = "classical";
  table.max_level = g.max_level();
  for (int n = 2; n <= g.max_level(); ++n) {
    const GrowthLevel& lvl = g.level(n);
    const GrowthLevel& prev = g.level(n - 1);
    std::vector<Complex> row(lvl.transitions.size());
    std::vector<long> branch(prev.causets.size(), 0);
    for (const Transition& tr : lvl.transitions) branch[static_cast<std::size_t>(tr.parent)] += tr.multiplicity;
    for (std::size_t t = 0; t < lvl.transitions.size(); ++t) {
      const Transition& tr = lvl.transitions[t];
      double v;
      if (rule) {
        v = rule(prev.causets[static_cast<std::size_t>(tr.parent)],
                 lvl.causets[static_cast<std::size_t>(tr.child)], tr.multiplicity);
      } else {
        v = static_cast<double>(tr.multiplicity) /
            static_cast<double>(branch[static_cast<std::size_t>(tr.parent)]);
      }
      if (v < 0 && !permissive)
        throw std::invalid_argument("classical_table: negative amplitude for transition " +
                                    prev.causets[static_cast<std::size_t>(tr.parent)].literal() +
                                    " -> " + lvl.causets[static_cast<std::size_t>(tr.child)].literal());
      row[t] = Complex(v, 0);
    }
    table.amps.push_back(std::move(row));
  }
  // validate the rows actually normalize
  double resid = table.row_sum_residual(g);
  if (resid > 1e-9)
    throw std::invalid_argument("classical_table: rule rows do not sum to 1 (residual " +
                                std::to_string(resid) + ")");
  return table;
}

/// Row-normalized complex table with seeded random entries.
inline TransitionAmplitudeTable random_table(const Growth& g, std::uint64_t seed) {
  TransitionAmplitudeTable table;
  table.name = "random-" + std::to_string(seed);
  table.max_level = g.max_level();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int n = 2; n <= g.max_level(); ++n) {
    const GrowthLevel& lvl = g.level(n);
    std::size_t parents = g.level(n - 1).causets.size();
    std::vector<Complex> row(lvl.transitions.size());
    for (std::size_t p = 0; p < parents; ++p) {
      Complex sum;
      do {
        sum = Complex(0, 0);
        for (int t = lvl.parent_offset[p]; t < lvl.parent_offset[p + 1]; ++t) {
          row[static_cast<std::size_t>(t)] = Complex(dist(rng), dist(rng));
          sum += row[static_cast<std::size_t>(t)];
        }
      } while (std::abs(sum) < 1e-3);
      for (int t = lvl.parent_offset[p]; t < lvl.parent_offset[p + 1]; ++t)
        row[static_cast<std::size_t>(t)] /= sum;
    }
    table.amps.push_back(std::move(row));
  }
  return table;
}

/// Path amplitudes at level n: the product of the table entries along each
/// path, in path enumeration order. Sums to 1 by row normalization.
inline Eigen::VectorXcd path_amplitudes(const Growth& g, const TransitionAmplitudeTable& table,
                                        int n) {
  if (n > table.max_level) throw std::invalid_argument("path_amplitudes: table does not cover level");
  Eigen::VectorXcd cur(1);
  cur[0] = Complex(1, 0);
  for (int k = 1; k < n; ++k) {
    const PathSpace& ps = g.paths(k);
    const GrowthLevel& lvl = g.level(k + 1);
    Eigen::VectorXcd next(static_cast<Eigen::Index>(g.paths(k + 1).count));
    for (std::size_t p = 0; p < ps.count; ++p) {
      int end = ps.entry(p, k);
      std::size_t q = ps.continuation[p];
      for (int t = lvl.parent_offset[static_cast<std::size_t>(end)];
           t < lvl.parent_offset[static_cast<std::size_t>(end) + 1]; ++t, ++q)
        next[static_cast<Eigen::Index>(q)] =
            cur[static_cast<Eigen::Index>(p)] * table.at(k + 1, static_cast<std::size_t>(t));
    }
    cur = std::move(next);
  }
  return cur;
}

/// The rank-1 probability operator |a><a| with kernel conj(a_i) a_j.
inline ProbabilityOperator rank1_operator(int level, Eigen::VectorXcd amplitudes) {
  return ProbabilityOperator::rank1(level, std::move(amplitudes));
}

/// The amplitude process generated by a table, as rank-1 operators.
inline Process ap_process(const Growth& g, const TransitionAmplitudeTable& table, int max_n) {
  Process p;
  p.name = table.name;
  for (int n = 1; n <= max_n; ++n) p.ops.push_back(rank1_operator(n, path_amplitudes(g, table, n)));
  return p;
}

/// The classical diagonal process rho_n(w,w') = a_n(w) delta of a real
/// nonnegative table.
inline Process classical_process(const Growth& g, const TransitionAmplitudeTable& table, int max_n,
                                 bool permissive = false) {
  Process p;
  p.name = table.name + "-diagonal";
  for (int n = 1; n <= max_n; ++n) {
    Eigen::VectorXcd a = path_amplitudes(g, table, n);
    Eigen::VectorXd d(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (std::abs(a[i].imag()) > 1e-12)
        throw std::invalid_argument("classical_process: table is not real-valued");
      if (a[i].real() < 0 && !permissive)
        throw std::invalid_argument("classical_process: negative path amplitude breaks positivity");
      d[i] = a[i].real();
    }
    p.ops.push_back(ProbabilityOperator::diagonal(n, d));
  }
  return p;
}

/// Per-level site amplitudes a(x) = sum of a_{|x|} over paths through x,
/// computed by forward recursion over the transition tables.
inline std::vector<std::vector<Complex>> site_amplitudes(const Growth& g,
                                                         const TransitionAmplitudeTable& table,
                                                         int max_n) {
  std::vector<std::vector<Complex>> amp(static_cast<std::size_t>(max_n));
  amp[0] = {Complex(1, 0)};
  for (int n = 2; n <= max_n; ++n) {
    const GrowthLevel& lvl = g.level(n);
    amp[static_cast<std::size_t>(n - 1)].assign(lvl.causets.size(), Complex(0, 0));
    for (std::size_t t = 0; t < lvl.transitions.size(); ++t) {
      const Transition& tr = lvl.transitions[t];
      amp[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(tr.child)] +=
          amp[static_cast<std::size_t>(n - 2)][static_cast<std::size_t>(tr.parent)] * table.at(n, t);
    }
  }
  return amp;
}

inline Complex site_amplitude(const Growth& g, const TransitionAmplitudeTable& table,
                              const Causet& x) {
  int idx = g.find(x);
  if (idx < 0) throw std::invalid_argument("site_amplitude: causet not present: " + x.literal());
  auto amps = site_amplitudes(g, table, x.size());
  return amps[static_cast<std::size_t>(x.size() - 1)][static_cast<std::size_t>(idx)];
}

// ---------------------------------------------------------------------------
// Characterization of processes generated by an amplitude process: rank-1
// operators whose extracted amplitudes satisfy
//   a_n(w') a_{n+1}(w x) = a_n(w) a_{n+1}(w' x)
// whenever w and w' share their endpoint, with the transition amplitude
// recoverable as a_{n+1}(w y) / a_n(w).

struct ApCharacterization {
  bool rank_ok = true;
  int rank_witness_level = 0;
  double second_eigenvalue = 0;
  bool factor_ok = true;
  double factor_residual = 0;
  std::string factor_witness;
  bool reconstruction_ok = true;
  double reconstruction_residual = 0;
  TransitionAmplitudeTable reconstructed;

  bool generated_by_ap() const { return rank_ok && factor_ok; }
};

namespace detail {

/// Extracts the amplitude vector of a rank-1 operator, gauge-fixed so the
/// amplitudes sum to exactly 1. Returns false (with the offending second
/// eigenvalue) when the operator has rank above 1.
inline bool extract_amplitudes(const ProbabilityOperator& op, double tol, Eigen::VectorXcd& out,
                               double& second_eigenvalue) {
  second_eigenvalue = 0;
  if (op.form() == ProbabilityOperator::Form::Rank1) {
    out = op.amplitudes();
  } else {
    Eigen::MatrixXcd k = op.dense_kernel();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k);
    Eigen::Index top = es.eigenvalues().size() - 1;
    double lambda = es.eigenvalues()[top];
    second_eigenvalue = top > 0 ? std::abs(es.eigenvalues()[top - 1]) : 0.0;
    if (second_eigenvalue > tol * std::max(1.0, lambda)) return false;
    // kernel = conj(a) a^T has eigenvector conj(a)/|a|
    out = es.eigenvectors().col(top).conjugate() * std::sqrt(std::max(lambda, 0.0));
  }
  Complex total = out.sum();
  if (std::abs(total) < 1e-14) return false;
  out /= total;
  return true;
}

}  // namespace detail

inline ApCharacterization verify_ap_characterization(const Growth& g,
                                                     const std::vector<ProbabilityOperator>& ops,
                                                     double tol = default_tolerance) {
  ApCharacterization rep;
  int levels = static_cast<int>(ops.size());
  std::vector<Eigen::VectorXcd> a(static_cast<std::size_t>(levels));
  for (int n = 1; n <= levels; ++n) {
    double second = 0;
    if (!detail::extract_amplitudes(ops[static_cast<std::size_t>(n - 1)], tol,
                                    a[static_cast<std::size_t>(n - 1)], second)) {
      rep.rank_ok = false;
      rep.rank_witness_level = n;
      rep.second_eigenvalue = second;
      return rep;
    }
  }

  // factorization identity over endpoint-sharing path pairs
  for (int n = 1; n + 1 <= levels; ++n) {
    const PathSpace& ps = g.paths(n);
    const Eigen::VectorXcd& an = a[static_cast<std::size_t>(n - 1)];
    const Eigen::VectorXcd& anext = a[static_cast<std::size_t>(n)];
    std::vector<std::vector<std::size_t>> by_endpoint(g.level(n).causets.size());
    for (std::size_t p = 0; p < ps.count; ++p)
      by_endpoint[static_cast<std::size_t>(ps.entry(p, n))].push_back(p);
    for (std::size_t e = 0; e < by_endpoint.size(); ++e) {
      const auto& group = by_endpoint[e];
      for (std::size_t i = 0; i < group.size(); ++i)
        for (std::size_t j = i + 1; j < group.size(); ++j) {
          std::size_t w = group[i], wp = group[j];
          std::size_t deg = ps.continuation[w + 1] - ps.continuation[w];
          for (std::size_t c = 0; c < deg; ++c) {
            Complex lhs = an[static_cast<Eigen::Index>(wp)] *
                          anext[static_cast<Eigen::Index>(ps.continuation[w] + c)];
            Complex rhs = an[static_cast<Eigen::Index>(w)] *
                          anext[static_cast<Eigen::Index>(ps.continuation[wp] + c)];
            double r = std::abs(lhs - rhs);
            if (r > rep.factor_residual) {
              rep.factor_residual = r;
              if (r > tol)
                rep.factor_witness = "n=" + std::to_string(n) + " paths " + std::to_string(w) +
                                     "," + std::to_string(wp) + " continuation " + std::to_string(c);
            }
          }
        }
    }
  }
  rep.factor_ok = rep.factor_residual <= tol;
  if (!rep.factor_ok) return rep;

  // reconstruct the transition table and re-derive the amplitudes from it
  rep.reconstructed.name = "reconstructed";
  rep.reconstructed.max_level = levels;
  for (int n = 1; n + 1 <= levels; ++n) {
    const PathSpace& ps = g.paths(n);
    const GrowthLevel& lvl = g.level(n + 1);
    const Eigen::VectorXcd& an = a[static_cast<std::size_t>(n - 1)];
    const Eigen::VectorXcd& anext = a[static_cast<std::size_t>(n)];
    std::vector<Complex> row(lvl.transitions.size(), Complex(0, 0));
    std::vector<std::size_t> pick(g.level(n).causets.size(), PathSet::npos);
    for (std::size_t p = 0; p < ps.count; ++p) {
      std::size_t e = static_cast<std::size_t>(ps.entry(p, n));
      if (pick[e] == PathSet::npos && std::abs(an[static_cast<Eigen::Index>(p)]) > 1e-14) pick[e] = p;
    }
    for (std::size_t e = 0; e < pick.size(); ++e) {
      if (pick[e] == PathSet::npos) continue;  // all-zero rows reconstruct as zero
      std::size_t p = pick[e];
      std::size_t q = ps.continuation[p];
      for (int t = lvl.parent_offset[e]; t < lvl.parent_offset[e + 1]; ++t, ++q)
        row[static_cast<std::size_t>(t)] =
            anext[static_cast<Eigen::Index>(q)] / an[static_cast<Eigen::Index>(p)];
    }
    rep.reconstructed.amps.push_back(std::move(row));
  }
  for (int n = 1; n <= levels; ++n) {
    Eigen::VectorXcd redone = path_amplitudes(g, rep.reconstructed, n);
    double r = (redone - a[static_cast<std::size_t>(n - 1)]).cwiseAbs().maxCoeff();
    rep.reconstruction_residual = std::max(rep.reconstruction_residual, r);
  }
  rep.reconstruction_ok = rep.reconstruction_residual <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Partition-function scan.

struct ZScanRow {
  int n = 0;
  double min_abs = 0, max_abs = 0;
  std::string min_witness, max_witness;
};

/// Per-level min/max of |z(x)| over the built levels, with witness causets.
inline std::vector<ZScanRow> z_scan(const Growth& g, int max_n) {
  std::vector<ZScanRow> out;
  for (int n = 1; n <= std::min(max_n, g.max_level()); ++n) {
    ZScanRow row;
    row.n = n;
    bool first = true;
    for (const Causet& x : g.level(n).causets) {
      double v = std::abs(action_profile(x).z_closed);
      if (first || v < row.min_abs) {
        row.min_abs = v;
        row.min_witness = x.literal();
      }
      if (first || v > row.max_abs) {
        row.max_abs = v;
        row.max_witness = x.literal();
      }
      first = false;
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace causets
