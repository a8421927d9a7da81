#pragma once

#include <chrono>
#include <deque>
#include <random>
#include <sstream>

#include "causets/amplitude.hpp"
#include "causets/einstein.hpp"
#include "causets/qmeasure.hpp"
#include "causets/worked_example.hpp"

namespace causets {

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::deque<CheckResult> checks;  // deque keeps add() references stable

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  CheckResult& add(const std::string& name) {
    checks.push_back(CheckResult{name, true, 0.0, ""});
    return checks.back();
  }
};

namespace verify_detail {

inline void residual_check(CheckResult& c, double residual, double tol,
                           const std::string& witness = "") {
  if (residual > c.residual) {
    c.residual = residual;
    if (residual > tol && c.witness.empty()) c.witness = witness;
  }
  c.pass = c.residual <= tol;
}

inline void flag_check(CheckResult& c, bool ok, const std::string& witness = "") {
  if (!ok) {
    c.pass = false;
    if (c.witness.empty()) c.witness = witness;
  }
}

}  // namespace verify_detail

// ---------------------------------------------------------------------------
// Growth suite: offspring counting, producers, chain equivalence, path space
// bookkeeping.

inline SuiteReport verify_growth_suite(const Growth& g, double tol = default_tolerance) {
  using namespace verify_detail;
  SuiteReport rep;
  rep.suite = "growth";
  int deepest = std::min(g.max_level(), 6);

  auto& total = rep.add("offspring total (with multiplicity) equals antichain count");
  auto& bounds = rep.add("offspring total within [n+1, 2^n], attained by chain and antichain");
  auto& kinds = rep.add("height and width offspring classes nonempty, deltas partition");
  auto& producers = rep.add("producer count equals inequivalent maximal chain classes");
  auto& roundtrip = rep.add("every producer extends back to its offspring");
  for (int n = 1; n <= deepest; ++n) {
    for (const Causet& x : g.level(n).causets) {
      auto records = x.offspring();
      long sum = 0;
      bool has_h = false, has_w = false;
      for (const auto& r : records) {
        sum += r.multiplicity;
        has_h = has_h || r.kind == OffspringKind::Height;
        has_w = has_w || r.kind == OffspringKind::Width;
      }
      residual_check(total, std::abs(static_cast<double>(sum - x.antichain_count())), tol,
                     x.literal());
      flag_check(bounds, sum >= n + 1 && sum <= (1L << n), x.literal());
      flag_check(kinds, has_h && has_w, x.literal());
      if (n >= 2) {
        flag_check(producers,
                   x.producers().size() == x.chain_equivalence_classes().size(), x.literal());
        for (const Causet& p : x.producers()) {
          bool found = false;
          for (ElementMask a : p.antichains())
            if (p.extend(a) == x) {
              found = true;
              break;
            }
          flag_check(roundtrip, found, p.literal() + " -> " + x.literal());
        }
      }
    }
    flag_check(bounds, Causet::chain(n).antichain_count() == n + 1, "chain lower bound");
    flag_check(bounds, Causet(n).antichain_count() == (1L << n), "antichain upper bound");
  }

  auto& recurrence = rep.add("path count recurrence over distinct offspring");
  for (int n = 1; n < g.max_level(); ++n) {
    const PathSpace& ps = g.paths(n);
    std::size_t sum = 0;
    for (std::size_t p = 0; p < ps.count; ++p) {
      int end = ps.entry(p, n);
      const GrowthLevel& next = g.level(n + 1);
      sum += static_cast<std::size_t>(next.parent_offset[static_cast<std::size_t>(end) + 1] -
                                      next.parent_offset[static_cast<std::size_t>(end)]);
    }
    flag_check(recurrence, sum == g.paths(n + 1).count, "level " + std::to_string(n));
  }

  auto& approx = rep.add("level approximations stay within one-step continuations");
  std::vector<SetSpec> specs;
  specs.push_back(SetSpec::chain_path());
  specs.push_back(SetSpec::antichain_path());
  specs.push_back(SetSpec::site_of(Causet::chain(2)));
  if (g.max_level() >= 3) specs.push_back(SetSpec::site_of(Causet::parse("3;0<1")));
  specs.push_back(SetSpec::cyl({Causet::point(), Causet::chain(2)}));
  for (const auto& s : specs) {
    for (int n = first_evaluable_level(s); n + 1 <= g.max_level(); ++n) {
      PathSet cur = approximate(g, s, n);
      PathSet next = approximate(g, s, n + 1);
      flag_check(approx, (next & ~g.one_step(cur, n)).none(), s.to_string());
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Amplitude suite: the action process, its worked values, consistency and
// the amplitude-process characterization.

inline SuiteReport verify_amplitude_suite(const Growth& g, std::uint64_t seed,
                                          double tol = default_tolerance,
                                          int random_tables = 5) {
  using namespace verify_detail;
  namespace wx = worked_example;
  SuiteReport rep;
  rep.suite = "amplitude";
  rep.seed = seed;
  int top = g.max_level();
  TransitionAmplitudeTable action = action_table(g);

  auto& rows = rep.add("transition rows sum to 1");
  residual_check(rows, action.row_sum_residual(g), tol);

  auto& sums = rep.add("path amplitudes sum to 1 per level");
  for (int n = 1; n <= top; ++n)
    residual_check(sums, std::abs(path_amplitudes(g, action, n).sum() - Complex(1, 0)), tol,
                   "level " + std::to_string(n));

  auto& closed = rep.add("partition function closed form equals defining sum");
  for (int n = 1; n <= std::min(top, 6); ++n)
    for (const Causet& x : g.level(n).causets)
      residual_check(closed, std::abs(action_profile(x).z_closed - partition_function_sum(x)),
                     tol, x.literal());

  if (top >= 3) {
    auto& golden = rep.add("three-level worked values reproduce");
    std::array<Causet, 9> site{};
    for (int i = 1; i <= 8; ++i)
      site[static_cast<std::size_t>(i)] = Causet::parse(wx::site_literals[static_cast<std::size_t>(i - 1)]);
    for (int i = 1; i <= 3; ++i)
      residual_check(golden,
                     std::abs(action_profile(site[static_cast<std::size_t>(i)]).z_closed -
                              Complex(wx::z_values[static_cast<std::size_t>(i - 1)], 0)),
                     tol, "z");
    Eigen::VectorXcd a3 = path_amplitudes(g, action, 3);
    for (std::size_t p = 0; p < 6; ++p) {
      std::vector<int> entries;
      for (int k = 0; k < 3; ++k)
        entries.push_back(g.find(site[static_cast<std::size_t>(wx::path_sites[p][static_cast<std::size_t>(k)])]));
      std::size_t idx = g.path_index(entries, 3);
      residual_check(golden,
                     std::abs(a3[static_cast<Eigen::Index>(idx)] - Complex(wx::path_amplitudes[p], 0)),
                     tol, "a3");
    }
    for (int i = 1; i <= 8; ++i)
      residual_check(golden,
                     std::abs(site_amplitude(g, action, site[static_cast<std::size_t>(i)]) -
                              Complex(wx::site_amplitudes[static_cast<std::size_t>(i - 1)], 0)),
                     tol, "site amplitude");
  }

  auto& consistency = rep.add("rank-1 action process is consistent");
  Process action_proc = ap_process(g, action, top);
  for (int n = 1; n + 1 <= top; ++n)
    residual_check(consistency, check_consistency(g, action_proc.at(n), action_proc.at(n + 1)),
                   tol, "level " + std::to_string(n));

  auto& random_consistency = rep.add("rank-1 random-table processes are consistent");
  for (int t = 0; t < random_tables; ++t) {
    TransitionAmplitudeTable table = random_table(g, seed + static_cast<std::uint64_t>(t));
    Process proc = ap_process(g, table, top);
    for (int n = 1; n + 1 <= top; ++n)
      residual_check(random_consistency, check_consistency(g, proc.at(n), proc.at(n + 1)), tol,
                     table.name);
  }

  int ap_top = std::min(top, 4);
  auto& ap_pass = rep.add("amplitude-generated process passes the characterization");
  ApCharacterization ch = verify_ap_characterization(
      g, std::vector<ProbabilityOperator>(action_proc.ops.begin(),
                                          action_proc.ops.begin() + ap_top),
      tol);
  flag_check(ap_pass, ch.generated_by_ap() && ch.reconstruction_ok, ch.factor_witness);
  residual_check(ap_pass, std::max(ch.factor_residual, ch.reconstruction_residual), tol);

  auto& mixture = rep.add("rank-2 mixture is rejected with a rank witness");
  {
    TransitionAmplitudeTable uniform = classical_table(g);
    std::vector<ProbabilityOperator> mixed;
    for (int n = 1; n <= ap_top; ++n) {
      Eigen::VectorXcd u = path_amplitudes(g, action, n);
      Eigen::VectorXcd v = path_amplitudes(g, uniform, n);
      Eigen::MatrixXcd kernel =
          0.5 * (u.conjugate() * u.transpose()) + 0.5 * (v.conjugate() * v.transpose());
      mixed.push_back(ProbabilityOperator::dense(n, kernel));
    }
    ApCharacterization bad = verify_ap_characterization(g, mixed, tol);
    flag_check(mixture, !bad.rank_ok && bad.rank_witness_level >= 2, "mixture accepted");
  }

  auto& perturbed = rep.add("perturbed process is rejected with a factorization witness");
  {
    std::vector<ProbabilityOperator> ops;
    for (int n = 1; n <= ap_top; ++n) {
      Eigen::VectorXcd a = path_amplitudes(g, action, n);
      if (n == 3 && a.size() >= 2) {
        a[0] += Complex(1e-3, 0);
        a[1] -= Complex(1e-3, 0);
      }
      ops.push_back(rank1_operator(n, a));
    }
    ApCharacterization bad = verify_ap_characterization(g, ops, tol);
    flag_check(perturbed, !bad.factor_ok && !bad.factor_witness.empty(), "perturbation accepted");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Quantum-measure suite: grade-2 additivity, decoherence positivity,
// classical equivalences and the semiclassical monotone law.

inline Eigen::MatrixXcd random_psd_kernel(std::size_t dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXcd gmat(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      gmat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          Complex(dist(rng), dist(rng));
  Eigen::MatrixXcd k = gmat * gmat.adjoint();
  Complex total = k.sum();
  if (std::abs(total) < 1e-9) return random_psd_kernel(dim, rng);
  // kernel of a probability operator: Hermitian PSD with entries summing to 1
  return k / total.real();
}

inline std::array<PathSet, 3> random_disjoint_triple(std::size_t dim, std::mt19937_64& rng) {
  std::array<PathSet, 3> out{PathSet(dim), PathSet(dim), PathSet(dim)};
  for (std::size_t p = 0; p < dim; ++p) {
    switch (rng() % 4) {
      case 1: out[0].set(p); break;
      case 2: out[1].set(p); break;
      case 3: out[2].set(p); break;
      default: break;
    }
  }
  return out;
}

inline SuiteReport verify_qmeasure_suite(const Growth& g, std::uint64_t seed,
                                         double tol = default_tolerance, int triples = 100,
                                         int pair_trials = 100) {
  using namespace verify_detail;
  SuiteReport rep;
  rep.suite = "qmeasure";
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  int top = g.max_level();
  Process action = ap_process(g, action_table(g), top);
  Process uniform = classical_process(g, classical_table(g), top);

  auto& grade2 = rep.add("grade-2 additivity over random disjoint triples");
  for (int n = 3; n <= std::min(top, 4); ++n) {
    std::size_t dim = g.paths(n).count;
    ProbabilityOperator psd = ProbabilityOperator::dense(n, random_psd_kernel(dim, rng));
    const ProbabilityOperator* ops[] = {&action.at(n), &uniform.at(n), &psd};
    for (const ProbabilityOperator* op : ops)
      for (int t = 0; t < triples; ++t) {
        auto [A, B, C] = random_disjoint_triple(dim, rng);
        residual_check(grade2, check_grade2(*op, A, B, C, 1.0), tol,
                       "n=" + std::to_string(n) + " trial " + std::to_string(t));
      }
  }

  auto& psd_family = rep.add("decoherence Gram matrix of random families is PSD");
  for (int n = 2; n <= std::min(top, 4); ++n) {
    std::size_t dim = g.paths(n).count;
    for (int fam = 0; fam < 5; ++fam) {
      std::vector<PathSet> sets;
      for (int i = 0; i < 6; ++i) sets.push_back(detail::random_subset(dim, rng));
      Eigen::MatrixXcd gram(6, 6);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
          gram(i, j) = action.at(n).decoherence(sets[static_cast<std::size_t>(i)],
                                                sets[static_cast<std::size_t>(j)]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
      residual_check(psd_family, std::max(0.0, -es.eigenvalues().minCoeff()), tol,
                     "n=" + std::to_string(n));
    }
  }

  auto& operators_valid = rep.add("process operators are Hermitian, PSD, normalized");
  for (int n = 1; n <= top; ++n)
    for (const Process* proc : {&action, &uniform}) {
      auto v = proc->at(n).validate();
      residual_check(operators_valid,
                     std::max({v.hermitian_residual, std::max(0.0, -v.min_eigenvalue),
                               v.normalization_residual}),
                     tol, proc->name + " level " + std::to_string(n));
    }

  auto& classical_flags = rep.add("uniform diagonal process is classical; action is not");
  flag_check(classical_flags, uniform.at(std::min(top, 3)).is_classical(tol), "uniform not flagged");
  if (top >= 3)
    flag_check(classical_flags, !action.at(3).is_classical(tol), "action flagged classical");

  auto& equivalences = rep.add("classical equivalences hold for the uniform process");
  {
    auto r = verify_classical_equivalences(uniform.at(std::min(top, 4)), pair_trials, seed, tol);
    for (const auto& c : r.checks) residual_check(equivalences, c.residual, tol, c.name);
  }

  auto& negatives = rep.add("action process violates the disjoint-decoherence equivalence");
  if (top >= 3) {
    auto r = verify_classical_equivalences(action.at(3), pair_trials, seed, tol);
    flag_check(negatives, !r.checks[1].pass, "no violation found");
  }

  auto& monotone = rep.add("classical q-measures of approximations are nonincreasing");
  {
    std::vector<SetSpec> specs;
    specs.push_back(SetSpec::site_of(Causet::point()));
    specs.push_back(SetSpec::site_of(Causet::chain(2)));
    specs.push_back(SetSpec::site_of(Causet(2)));
    specs.push_back(SetSpec::chain_path());
    specs.push_back(SetSpec::antichain_path());
    specs.push_back(SetSpec::cyl({Causet::point(), Causet::chain(2)}));
    if (top >= 3) {
      specs.push_back(SetSpec::site_of(Causet::parse("3;0<1")));
      specs.push_back(SetSpec::unite(SetSpec::site_of(Causet::chain(3)),
                                     SetSpec::site_of(Causet(3))));
      specs.push_back(SetSpec::intersect(SetSpec::site_of(Causet::chain(2)),
                                         SetSpec::site_of(Causet::parse("3;0<1"))));
      specs.push_back(SetSpec::cyl({Causet::point(), Causet(2), Causet(3)}));
    }
    for (const auto& s : specs) {
      MuSequence seq = mu_sequence(g, uniform, s, top);
      for (std::size_t k = 1; k < seq.values.size(); ++k)
        residual_check(monotone, std::max(0.0, seq.values[k] - seq.values[k - 1] - tol), tol,
                       s.to_string());
    }
  }

  auto& perturbed = rep.add("perturbed next-level operator breaks consistency");
  if (top >= 3) {
    Eigen::VectorXcd a = action.at(3).amplitudes();
    a[0] += Complex(0.01, 0);
    double r = check_consistency(g, action.at(2), rank1_operator(3, a));
    flag_check(perturbed, r > 1e-4, "perturbation not detected");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Einstein suite: operator identities over chosen path pairs.

/// Pointwise evaluation of the bidifference applied to the decoherence table
/// itself; zero on the interior by construction of the covariant form.
inline double nabla_table_residual(const SiteDecoherence& sd, const SitePath& w,
                                   const SitePath& wp) {
  double worst = 0;
  const int N = sd.sites.N;
  for (int ku = 2; ku <= N; ++ku)
    for (int kv = 2; kv <= N; ++kv) {
      Complex v = sd.at(w.at(ku - 1), wp.at(kv - 1)) * sd.at(w.at(ku), wp.at(kv)) -
                  sd.at(w.at(ku), wp.at(kv)) * sd.at(w.at(ku - 1), wp.at(kv - 1));
      worst = std::max(worst, std::abs(v));
    }
  return worst;
}

/// Coefficient-wise residual of A - B - C on interior sources.
inline double operator_identity_residual(const SiteIndex& idx, const SparsePairOperator& A,
                                         const SparsePairOperator& B,
                                         const SparsePairOperator& C) {
  SparsePairOperator diff = A.combine(B, Complex(-1, 0)).combine(C, Complex(-1, 0));
  double worst = 0;
  for (std::size_t s = 0; s < diff.dim(); ++s) {
    auto [x, y] = diff.pair_of(s);
    if (!interior_pair(idx, x, y)) continue;
    for (auto& [t, c] : diff.apply(s)) worst = std::max(worst, std::abs(c));
  }
  return worst;
}

/// Coefficient-wise residual of contracted A - B - C on interior sources.
inline double contracted_identity_residual(const SiteIndex& idx, const SiteContraction& A,
                                           const SiteContraction& B, const SiteContraction& C) {
  double worst = 0;
  for (std::size_t s = 0; s < A.action.size(); ++s) {
    auto x = static_cast<int>(s) / A.S;
    auto y = static_cast<int>(s) % A.S;
    if (!interior_pair(idx, x, y)) continue;
    std::map<int, Complex> diff;
    for (auto& [site, c] : A.action[s]) diff[site] += c;
    for (auto& [site, c] : B.action[s]) diff[site] -= c;
    for (auto& [site, c] : C.action[s]) diff[site] -= c;
    for (auto& [site, c] : diff) worst = std::max(worst, std::abs(c));
  }
  return worst;
}

inline SuiteReport verify_einstein_suite(const Growth& g, const Process& process, int N,
                                         const Path& omega, const Path& omega_prime,
                                         std::uint64_t seed, double tol = 1e-12,
                                         int random_pairs = 4) {
  using namespace verify_detail;
  SuiteReport rep;
  rep.suite = "einstein";
  rep.seed = seed;
  SiteDecoherence sd = site_decoherence(g, process, N);
  const SiteIndex& idx = sd.sites;

  auto& herm = rep.add("site decoherence is Hermitian");
  residual_check(herm, sd.hermitian_residual(), tol);
  auto& psd = rep.add("site decoherence is positive semidefinite");
  residual_check(psd, std::max(0.0, -sd.min_eigenvalue()), default_tolerance);
  auto& indep = rep.add("site decoherence is independent of the evaluation level");
  if (g.max_level() > N && process.max_level() > N) {
    SiteDecoherence deeper = site_decoherence(g, process, N, N + 1);
    residual_check(indep, (sd.D - deeper.D).cwiseAbs().maxCoeff(), tol);
  }

  std::mt19937_64 rng(seed);
  std::vector<std::pair<SitePath, SitePath>> pairs;
  pairs.emplace_back(resolve_path(idx, omega), resolve_path(idx, omega_prime));
  for (int r = 0; r < random_pairs; ++r)
    pairs.emplace_back(resolve_path(idx, random_path(g, N, rng)),
                       resolve_path(idx, random_path(g, N, rng)));

  auto& nabla_zero = rep.add("bidifference annihilates the decoherence table on the interior");
  auto& einstein = rep.add("curvature equals metric plus mass-energy on the interior");
  auto& contracted = rep.add("contracted curvature equals contracted metric plus mass-energy");
  auto& antisym = rep.add("curvature and mass-energy are antisymmetric in the path pair");
  auto& basis = rep.add("basis actions match the closed per-case formulas");
  auto& pairing = rep.add("metric and its adjoint satisfy the pairing identity");
  auto& commutators = rep.add("operator products match their closed forms");
  auto& witness = rep.add("a non-commuting witness exists for the path pair");

  bool witness_any = false;
  for (auto& [w, wp] : pairs) {
    residual_check(nabla_zero, nabla_table_residual(sd, w, wp), tol);
    SparsePairOperator r = curvature(sd, w, wp);
    SparsePairOperator d = metric_op(sd, w, wp);
    SparsePairOperator t = mass_energy_op(sd, w, wp);
    residual_check(einstein, operator_identity_residual(idx, r, d, t), tol);
    ContractedOps hats = contracted_ops(sd, w, wp);
    residual_check(contracted,
                   contracted_identity_residual(idx, hats.curvature_hat, hats.metric_hat,
                                                hats.mass_hat),
                   tol);
    auto interior_max = [&](const SparsePairOperator& op) {
      double worst = 0;
      for (std::size_t s = 0; s < op.dim(); ++s) {
        auto [x, y] = op.pair_of(s);
        if (!interior_pair(idx, x, y)) continue;
        for (auto& [tt, c] : op.apply(s)) worst = std::max(worst, std::abs(c));
      }
      return worst;
    };
    residual_check(antisym, interior_max(r.combine(curvature(sd, wp, w), Complex(1, 0))), tol);
    residual_check(antisym, interior_max(t.combine(mass_energy_op(sd, wp, w), Complex(1, 0))), tol);
    BasisActionReport br = verify_basis_action(sd, w, wp);
    residual_check(basis, std::max({br.metric_residual, br.mass_residual, br.adjoint_residual}),
                   tol, br.witness);
    residual_check(pairing, adjoint_pairing_residual(sd, d, adjoint_metric(sd, w, wp)), tol);
    CommutatorReport cr = commutator_report(sd, w, wp);
    residual_check(commutators,
                   std::max({cr.dd_star_residual, cr.d_star_d_residual, cr.dt_residual,
                             cr.td_residual}),
                   tol);
    witness_any = witness_any || cr.witness_found;
  }
  flag_check(witness, witness_any, "no witness over the tested pairs");
  return rep;
}

// ---------------------------------------------------------------------------
// Classical suite: the uniform Markov process.

inline SuiteReport verify_classical_suite(const Growth& g, std::uint64_t seed,
                                          double tol = default_tolerance, int pair_trials = 200) {
  using namespace verify_detail;
  SuiteReport rep;
  rep.suite = "classical";
  rep.seed = seed;
  int top = g.max_level();
  int N = std::min(top - 1, 4);
  if (N < 2) throw std::invalid_argument("classical suite needs at least 3 built levels");
  Process uniform = classical_process(g, classical_table(g), top);

  auto& diag = rep.add("decoherence matrices are diagonal");
  for (int n = 1; n <= top; ++n)
    flag_check(diag, uniform.at(n).is_classical(1e-12), "level " + std::to_string(n));

  auto& equiv = rep.add("decoherence equals q-measure of intersections (random pairs)");
  auto& additive = rep.add("q-measure additive on disjoint pairs (random pairs)");
  {
    auto r = verify_classical_equivalences(uniform.at(std::min(top, 4)), pair_trials, seed, tol);
    residual_check(equiv, std::max(r.checks[0].residual, r.checks[1].residual), tol);
    residual_check(additive, r.checks[2].residual, tol);
  }

  auto& monotone = rep.add("q-measures of approximations are nonincreasing (10 specs)");
  {
    std::vector<SetSpec> specs;
    specs.push_back(SetSpec::site_of(Causet::point()));
    specs.push_back(SetSpec::site_of(Causet::chain(2)));
    specs.push_back(SetSpec::site_of(Causet(2)));
    specs.push_back(SetSpec::site_of(Causet::chain(3)));
    specs.push_back(SetSpec::site_of(Causet::parse("3;0<1")));
    specs.push_back(SetSpec::chain_path());
    specs.push_back(SetSpec::antichain_path());
    specs.push_back(SetSpec::cyl({Causet::point(), Causet::chain(2)}));
    specs.push_back(SetSpec::unite(SetSpec::site_of(Causet::chain(3)), SetSpec::site_of(Causet(3))));
    specs.push_back(SetSpec::intersect(SetSpec::site_of(Causet::chain(2)),
                                       SetSpec::site_of(Causet::chain(3))));
    for (const auto& s : specs) {
      MuSequence seq = mu_sequence(g, uniform, s, top);
      for (std::size_t k = 1; k < seq.values.size(); ++k)
        residual_check(monotone, std::max(0.0, seq.values[k] - seq.values[k - 1]), tol,
                       s.to_string());
    }
  }

  SiteDecoherence sd = site_decoherence(g, uniform, N);
  FlatnessReport fr = flatness_analysis(g, uniform, sd, tol);

  auto& incomparable = rep.add("site decoherence vanishes on incomparable pairs");
  residual_check(incomparable, fr.incomparable_residual, 1e-12, fr.incomparable_witness);

  auto& that_zero = rep.add("contracted mass-energy vanishes");
  residual_check(that_zero, fr.max_imaginary, 1e-12);
  {
    std::mt19937_64 rng(seed);
    for (int r = 0; r < 3; ++r) {
      SitePath w = resolve_path(sd.sites, random_path(g, N, rng));
      SitePath wp = resolve_path(sd.sites, random_path(g, N, rng));
      SiteContraction that = SiteContraction::of(mass_energy_op(sd, w, wp));
      double worst = 0;
      for (auto& list : that.action)
        for (auto& [site, c] : list) worst = std::max(worst, std::abs(c));
      residual_check(that_zero, worst, 1e-12);
    }
  }

  auto& mass = rep.add("site measures are probability measures per level");
  residual_check(mass, fr.level_mass_residual, tol);

  auto& witness = rep.add("a multi-producer causet with nonzero measure yields nonzero metric");
  flag_check(witness, !fr.mu_violators.empty() && fr.metric_witness_found, "none found");
  return rep;
}

}  // namespace causets
