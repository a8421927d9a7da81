#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "causets/growth.hpp"

namespace causets {

using Complex = std::complex<double>;

constexpr double default_tolerance = 1e-10;

/// A probability operator on the n-path Hilbert space, held as its
/// decoherence kernel K(i, j) = D({omega_i}, {omega_j}).
///
/// Three storage forms cover every process the library produces: a dense
/// kernel, a rank-1 kernel conj(a_i) a_j from an amplitude vector, and a
/// real diagonal. Rank-1 and diagonal forms stay cheap at levels where the
/// path count makes a dense matrix unreasonable.
class ProbabilityOperator {
 public:
  enum class Form { Dense, Rank1, Diagonal };

  static ProbabilityOperator dense(int level, Eigen::MatrixXcd kernel) {
    ProbabilityOperator op;
    op.level_ = level;
    op.dim_ = static_cast<std::size_t>(kernel.rows());
    if (kernel.rows() != kernel.cols()) throw std::invalid_argument("dense: kernel must be square");
    op.storage_ = std::move(kernel);
    return op;
  }

  static ProbabilityOperator rank1(int level, Eigen::VectorXcd amplitudes) {
    ProbabilityOperator op;
    op.level_ = level;
    op.dim_ = static_cast<std::size_t>(amplitudes.size());
    Rank1Data d;
    d.a = std::move(amplitudes);
    d.prefix.resize(d.a.size() + 1);
    d.prefix[0] = Complex(0, 0);
    for (Eigen::Index i = 0; i < d.a.size(); ++i) d.prefix[i + 1] = d.prefix[i] + d.a[i];
    op.storage_ = std::move(d);
    return op;
  }

  static ProbabilityOperator diagonal(int level, Eigen::VectorXd masses) {
    ProbabilityOperator op;
    op.level_ = level;
    op.dim_ = static_cast<std::size_t>(masses.size());
    DiagData d;
    d.d = std::move(masses);
    d.prefix.resize(d.d.size() + 1);
    d.prefix[0] = 0.0;
    for (Eigen::Index i = 0; i < d.d.size(); ++i) d.prefix[i + 1] = d.prefix[i] + d.d[i];
    op.storage_ = std::move(d);
    return op;
  }

  int level() const { return level_; }
  std::size_t dim() const { return dim_; }
  Form form() const {
    if (std::holds_alternative<Eigen::MatrixXcd>(storage_)) return Form::Dense;
    if (std::holds_alternative<Rank1Data>(storage_)) return Form::Rank1;
    return Form::Diagonal;
  }

  /// Kernel entry D({omega_i}, {omega_j}).
  Complex kernel(std::size_t i, std::size_t j) const {
    if (auto* m = std::get_if<Eigen::MatrixXcd>(&storage_))
      return (*m)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    if (auto* r = std::get_if<Rank1Data>(&storage_))
      return std::conj(r->a[static_cast<Eigen::Index>(i)]) * r->a[static_cast<Eigen::Index>(j)];
    auto& d = std::get<DiagData>(storage_);
    return i == j ? Complex(d.d[static_cast<Eigen::Index>(i)], 0) : Complex(0, 0);
  }

  /// D(A, B) = <rho chi_B, chi_A>.
  Complex decoherence(const PathSet& A, const PathSet& B) const {
    check_set(A);
    check_set(B);
    if (auto* r = std::get_if<Rank1Data>(&storage_)) return std::conj(r->nu(A)) * r->nu(B);
    if (auto* d = std::get_if<DiagData>(&storage_)) {
      PathSet both = A & B;
      double s = 0;
      for (std::size_t p = both.find_first(); p != PathSet::npos; p = both.find_next(p))
        s += d->d[static_cast<Eigen::Index>(p)];
      return Complex(s, 0);
    }
    auto& m = std::get<Eigen::MatrixXcd>(storage_);
    Complex s(0, 0);
    for (std::size_t i = A.find_first(); i != PathSet::npos; i = A.find_next(i))
      for (std::size_t j = B.find_first(); j != PathSet::npos; j = B.find_next(j))
        s += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return s;
  }

  /// D over contiguous path-index ranges; cheap for rank-1 and diagonal
  /// forms, which is what the consistency scan needs.
  Complex decoherence_range(std::size_t alo, std::size_t ahi, std::size_t blo, std::size_t bhi) const {
    if (auto* r = std::get_if<Rank1Data>(&storage_))
      return std::conj(r->prefix[ahi] - r->prefix[alo]) * (r->prefix[bhi] - r->prefix[blo]);
    if (auto* d = std::get_if<DiagData>(&storage_)) {
      std::size_t lo = std::max(alo, blo), hi = std::min(ahi, bhi);
      if (lo >= hi) return Complex(0, 0);
      return Complex(d->prefix[hi] - d->prefix[lo], 0);
    }
    auto& m = std::get<Eigen::MatrixXcd>(storage_);
    Complex s(0, 0);
    for (std::size_t i = alo; i < ahi; ++i)
      for (std::size_t j = blo; j < bhi; ++j)
        s += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return s;
  }

  /// mu(A) = D(A, A): real and nonnegative for a valid operator. Tiny
  /// negatives within tol are clamped; anything worse signals an invalid
  /// operator and throws.
  double q_measure(const PathSet& A, double tol = default_tolerance) const {
    Complex d = decoherence(A, A);
    double v = d.real();
    if (v < 0) {
      if (v < -tol) throw std::domain_error("q_measure: negative value " + std::to_string(v));
      v = 0;
    }
    return v;
  }

  /// Materializes the kernel; guarded against unreasonable sizes.
  Eigen::MatrixXcd dense_kernel() const {
    if (dim_ > 4096) throw std::length_error("dense_kernel: dimension too large");
    Eigen::MatrixXcd out(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = kernel(i, j);
    return out;
  }

  struct Validation {
    double hermitian_residual = 0;
    double min_eigenvalue = 0;
    double normalization_residual = 0;
    bool ok(double tol) const {
      return hermitian_residual <= tol && min_eigenvalue >= -tol && normalization_residual <= tol;
    }
  };

  /// Hermiticity, positive semidefiniteness and unit total mass.
  Validation validate() const {
    Validation v;
    if (auto* r = std::get_if<Rank1Data>(&storage_)) {
      Complex total = r->prefix[dim_];
      v.normalization_residual = std::abs(std::norm(total) - 1.0);
      v.min_eigenvalue = 0;
      return v;
    }
    if (auto* d = std::get_if<DiagData>(&storage_)) {
      v.normalization_residual = std::abs(d->prefix[dim_] - 1.0);
      v.min_eigenvalue = dim_ ? d->d.minCoeff() : 0.0;
      return v;
    }
    auto& m = std::get<Eigen::MatrixXcd>(storage_);
    v.hermitian_residual = (m - m.adjoint()).cwiseAbs().maxCoeff();
    v.normalization_residual = std::abs(m.sum() - Complex(1, 0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    v.min_eigenvalue = es.eigenvalues().minCoeff();
    return v;
  }

  /// Classical: every off-diagonal D(omega, omega') vanishes.
  bool is_classical(double tol = default_tolerance) const {
    if (std::holds_alternative<DiagData>(storage_)) return true;
    if (auto* r = std::get_if<Rank1Data>(&storage_)) {
      // off-diagonals are |a_i||a_j|: vanish iff at most one amplitude is nonzero
      double largest = 0, second = 0;
      for (Eigen::Index i = 0; i < r->a.size(); ++i) {
        double m = std::abs(r->a[i]);
        if (m > largest) {
          second = largest;
          largest = m;
        } else if (m > second) {
          second = m;
        }
      }
      return largest * second <= tol;
    }
    auto& m = std::get<Eigen::MatrixXcd>(storage_);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (i != j && std::abs(m(i, j)) > tol) return false;
    return true;
  }

  /// Semiclassical: every off-diagonal Re D(omega, omega') vanishes.
  bool is_semiclassical(double tol = default_tolerance) const {
    if (std::holds_alternative<DiagData>(storage_)) return true;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i + 1; j < dim_; ++j)
        if (std::abs(kernel(i, j).real()) > tol) return false;
    return true;
  }

  /// Rank-1 amplitude access (only for Rank1 form).
  const Eigen::VectorXcd& amplitudes() const {
    if (auto* r = std::get_if<Rank1Data>(&storage_)) return r->a;
    throw std::logic_error("amplitudes: operator is not rank-1 form");
  }

  Complex nu(const PathSet& A) const {
    if (auto* r = std::get_if<Rank1Data>(&storage_)) return r->nu(A);
    throw std::logic_error("nu: operator is not rank-1 form");
  }

 private:
  struct Rank1Data {
    Eigen::VectorXcd a;
    std::vector<Complex> prefix;
    Complex nu(const PathSet& A) const {
      Complex s(0, 0);
      for (std::size_t p = A.find_first(); p != PathSet::npos; p = A.find_next(p))
        s += a[static_cast<Eigen::Index>(p)];
      return s;
    }
  };
  struct DiagData {
    Eigen::VectorXd d;
    std::vector<double> prefix;
  };

  int level_ = 1;
  std::size_t dim_ = 0;
  std::variant<Eigen::MatrixXcd, Rank1Data, DiagData> storage_;

  void check_set(const PathSet& s) const {
    if (s.size() != dim_)
      throw std::invalid_argument("path set size " + std::to_string(s.size()) +
                                  " does not match operator dimension " + std::to_string(dim_));
  }
};

/// A sequence of probability operators, one per level, over a growth context.
struct Process {
  std::string name;
  std::vector<ProbabilityOperator> ops;  // ops[k] is the operator at level k+1

  const ProbabilityOperator& at(int level) const {
    if (level < 1 || level > static_cast<int>(ops.size()))
      throw std::out_of_range("process has no operator at level " + std::to_string(level));
    return ops[static_cast<std::size_t>(level - 1)];
  }
  int max_level() const { return static_cast<int>(ops.size()); }
};

inline Complex decoherence(const ProbabilityOperator& rho, const PathSet& A, const PathSet& B) {
  return rho.decoherence(A, B);
}

inline double q_measure(const ProbabilityOperator& rho, const PathSet& A,
                        double tol = default_tolerance) {
  return rho.q_measure(A, tol);
}

/// Residual of grade-2 additivity for mutually disjoint A, B, C.
inline double check_grade2(const ProbabilityOperator& rho, const PathSet& A, const PathSet& B,
                           const PathSet& C, double tol = default_tolerance) {
  if ((A & B).any() || (A & C).any() || (B & C).any())
    throw std::invalid_argument("check_grade2: sets must be mutually disjoint");
  double lhs = rho.q_measure(A | B | C, tol);
  double rhs = rho.q_measure(A | B, tol) + rho.q_measure(A | C, tol) + rho.q_measure(B | C, tol) -
               rho.q_measure(A, tol) - rho.q_measure(B, tol) - rho.q_measure(C, tol);
  return std::abs(lhs - rhs);
}

/// Max residual |D_{n+1}((w->),(w'->)) - D_n({w},{w'})| over singleton pairs.
/// Sesquilinearity extends the identity from singletons to all subsets, so
/// this scan is exactly the consistency condition.
inline double check_consistency(const Growth& g, const ProbabilityOperator& rho_n,
                                const ProbabilityOperator& rho_next) {
  if (rho_next.level() != rho_n.level() + 1)
    throw std::invalid_argument("check_consistency: operators must be at consecutive levels");
  const PathSpace& ps = g.paths(rho_n.level());
  if (ps.count != rho_n.dim() || g.paths(rho_next.level()).count != rho_next.dim())
    throw std::invalid_argument("check_consistency: operator dimensions do not match path spaces");
  double worst = 0;
  for (std::size_t i = 0; i < ps.count; ++i) {
    for (std::size_t j = 0; j < ps.count; ++j) {
      Complex up = rho_next.decoherence_range(ps.continuation[i], ps.continuation[i + 1],
                                              ps.continuation[j], ps.continuation[j + 1]);
      Complex down = rho_n.kernel(i, j);
      worst = std::max(worst, std::abs(up - down));
    }
  }
  return worst;
}

/// Finite-level q-measure sequence of a set spec under a process, with a
/// convergence heuristic. The values are numerical evidence only.
struct MuSequence {
  std::string spec;
  int first_level = 1;
  std::vector<double> values;  // values[k] = mu at level first_level + k
  bool converged = false;
  std::optional<double> limit_estimate;

  double at(int level) const { return values.at(static_cast<std::size_t>(level - first_level)); }
  int last_level() const { return first_level + static_cast<int>(values.size()) - 1; }
};

inline MuSequence mu_sequence(const Growth& g, const Process& process, const SetSpec& spec,
                              int max_n, int window = 3, double eps = 1e-6, bool strict = false) {
  MuSequence out;
  out.spec = spec.to_string();
  out.first_level = first_evaluable_level(spec);
  int consecutive = 0;
  for (int n = out.first_level; n <= max_n; ++n) {
    PathSet a = approximate(g, spec, n, strict);
    double mu = process.at(n).q_measure(a);
    if (!out.values.empty()) {
      double prev = out.values.back();
      double rel = std::abs(mu - prev) / std::max(std::abs(prev), 1e-300);
      consecutive = rel < eps ? consecutive + 1 : 0;
    }
    out.values.push_back(mu);
  }
  if (consecutive >= window) {
    out.converged = true;
    out.limit_estimate = out.values.back();
  }
  return out;
}

/// One named check with its worst residual and an optional witness.
struct CheckResult {
  std::string name;
  bool pass = false;
  double residual = 0;
  std::string witness;
};

struct ClassicalEquivalenceReport {
  int level = 1;
  std::uint64_t seed = 0;
  int trials = 0;
  bool semiclassical_variant = false;
  std::vector<CheckResult> checks;
  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

inline PathSet random_subset(std::size_t dim, std::mt19937_64& rng) {
  PathSet s(dim);
  for (std::size_t i = 0; i < dim; ++i)
    if (rng() & 1) s.set(i);
  return s;
}

}  // namespace detail

/// Checks the classical (or semiclassical) equivalences over random subset
/// pairs: D(A,B) = mu(A and B), D(A,B) = 0 on disjoint pairs, and additivity
/// of mu on disjoint pairs. For the semiclassical variant the real part of D
/// replaces D.
inline ClassicalEquivalenceReport verify_classical_equivalences(
    const ProbabilityOperator& rho, int trials, std::uint64_t seed,
    double tol = default_tolerance, bool semiclassical_variant = false) {
  ClassicalEquivalenceReport rep;
  rep.level = rho.level();
  rep.seed = seed;
  rep.trials = trials;
  rep.semiclassical_variant = semiclassical_variant;
  std::mt19937_64 rng(seed);
  auto dval = [&](const PathSet& A, const PathSet& B) {
    Complex d = rho.decoherence(A, B);
    return semiclassical_variant ? Complex(d.real(), 0) : d;
  };

  CheckResult inter{"decoherence equals q-measure of intersection", true, 0, ""};
  CheckResult disj{"decoherence vanishes on disjoint pairs", true, 0, ""};
  CheckResult addv{"q-measure additive on disjoint pairs", true, 0, ""};
  for (int t = 0; t < trials; ++t) {
    PathSet A = detail::random_subset(rho.dim(), rng);
    PathSet B = detail::random_subset(rho.dim(), rng);
    double r1 = std::abs(dval(A, B) - Complex(rho.q_measure(A & B, tol), 0));
    if (r1 > inter.residual) {
      inter.residual = r1;
      if (r1 > tol) inter.witness = "trial " + std::to_string(t);
    }
    PathSet Bd = B & ~A;
    double r2 = std::abs(dval(A, Bd));
    if (r2 > disj.residual) {
      disj.residual = r2;
      if (r2 > tol) disj.witness = "trial " + std::to_string(t);
    }
    double r3 = std::abs(rho.q_measure(A | Bd, tol) - rho.q_measure(A, tol) - rho.q_measure(Bd, tol));
    if (r3 > addv.residual) {
      addv.residual = r3;
      if (r3 > tol) addv.witness = "trial " + std::to_string(t);
    }
  }
  inter.pass = inter.residual <= tol;
  disj.pass = disj.residual <= tol;
  addv.pass = addv.residual <= tol;
  rep.checks = {inter, disj, addv};
  return rep;
}

}  // namespace causets
