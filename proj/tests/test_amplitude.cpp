#include <catch2/catch_amalgamated.hpp>

#include "causets/amplitude.hpp"
#include "causets/verify.hpp"
#include "causets/worked_example.hpp"

using causets::Causet;
using causets::Complex;
using causets::Growth;
using causets::TransitionAmplitudeTable;
namespace wx = causets::worked_example;

namespace {

const Growth& g5() {
  static Growth g = Growth::build(5);
  return g;
}

const TransitionAmplitudeTable& action() {
  static TransitionAmplitudeTable t = causets::action_table(g5());
  return t;
}

Complex lookup(const char* parent, const char* child) {
  Causet p = Causet::parse(parent), c = Causet::parse(child);
  return action().lookup(g5(), p.size(), g5().find(p), g5().find(c));
}

}  // namespace

TEST_CASE("unit roots reduce exactly") {
  CHECK(causets::unit_root(0, 5) == Complex(1, 0));
  CHECK(causets::unit_root(2, 2) == Complex(1, 0));
  CHECK(causets::unit_root(1, 2) == Complex(-1, 0));
  CHECK(causets::unit_root(3, 2) == Complex(-1, 0));
  CHECK(causets::unit_root(1, 4) == Complex(0, 1));
  CHECK(causets::unit_root(3, 4) == Complex(0, -1));
  CHECK(causets::unit_root(2, 8) == Complex(0, 1));
  CHECK(causets::unit_root(-1, 4) == Complex(0, -1));
  CHECK(std::abs(causets::unit_root(1, 3) - Complex(-0.5, std::sqrt(3.0) / 2)) < 1e-15);
  CHECK_THROWS_AS(causets::unit_root(1, 0), std::invalid_argument);
}

TEST_CASE("action profiles of the first levels") {
  auto p1 = causets::action_profile(Causet::point());
  CHECK(p1.z_closed == Complex(2, 0));
  CHECK(p1.mild == 0);
  CHECK(p1.height == 1);
  CHECK(p1.width == 1);

  auto p2 = causets::action_profile(Causet::chain(2));
  CHECK(p2.z_closed == Complex(1, 0));  // -1 + 2, exact
  CHECK(p2.height == 1);
  CHECK(p2.width == 2);

  auto p3 = causets::action_profile(Causet(2));
  CHECK(p3.z_closed == Complex(2, 0));  // 3 - 1, exact
  CHECK(p3.height == 3);
  CHECK(p3.width == 1);

  SECTION("the 2-chain-plus-point has two mild offspring") {
    auto p6 = causets::action_profile(Causet::parse("3;0<1"));
    CHECK(p6.mild == 2);
    CHECK(p6.height == 2);
    CHECK(p6.width == 2);
    CHECK(std::abs(p6.z_closed - Complex(0, -2.0 * std::sqrt(3.0))) < 1e-14);
  }

  SECTION("closed form equals the defining sum everywhere up to level 5") {
    for (int n = 1; n <= 5; ++n)
      for (const Causet& x : g5().level(n).causets)
        CHECK(std::abs(causets::action_profile(x).z_closed -
                       causets::partition_function_sum(x)) < 1e-12);
  }

  SECTION("no vanishing partition function at desk scale") {
    for (int n = 1; n <= 5; ++n)
      for (const Causet& x : g5().level(n).causets)
        CHECK(std::abs(causets::action_profile(x).z_closed) > causets::z_zero_threshold);
  }
}

TEST_CASE("action transition amplitudes") {
  CHECK(std::abs(lookup("1;", "2;0<1") - Complex(0.5, 0)) < 1e-15);
  CHECK(std::abs(lookup("1;", "2;") - Complex(0.5, 0)) < 1e-15);
  CHECK(std::abs(lookup("2;0<1", "3;0<1,1<2") - Complex(-1, 0)) < 1e-15);
  CHECK(std::abs(lookup("2;0<1", "3;0<1,0<2") - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(lookup("2;0<1", "3;0<1") - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(lookup("2;", "3;0<1") - Complex(1, 0)) < 1e-15);  // multiplicity 2 over z = 2
  CHECK(std::abs(lookup("2;", "3;0<2,1<2") - Complex(0.5, 0)) < 1e-15);
  CHECK(std::abs(lookup("2;", "3;") - Complex(-0.5, 0)) < 1e-15);
  CHECK(lookup("2;0<1", "3;") == Complex(0, 0));  // not a transition

  CHECK(action().row_sum_residual(g5()) < 1e-12);
}

TEST_CASE("path amplitudes") {
  Eigen::VectorXcd a1 = causets::path_amplitudes(g5(), action(), 1);
  REQUIRE(a1.size() == 1);
  CHECK(a1[0] == Complex(1, 0));

  Eigen::VectorXcd a3 = causets::path_amplitudes(g5(), action(), 3);
  for (std::size_t p = 0; p < 6; ++p) {
    std::vector<int> entries;
    for (int k = 0; k < 3; ++k)
      entries.push_back(
          g5().find(Causet::parse(wx::site_literals[static_cast<std::size_t>(wx::path_sites[p][static_cast<std::size_t>(k)]) - 1])));
    std::size_t idx = g5().path_index(entries, 3);
    CHECK(std::abs(a3[static_cast<Eigen::Index>(idx)] - Complex(wx::path_amplitudes[p], 0)) <
          1e-14);
    CHECK(std::norm(a3[static_cast<Eigen::Index>(idx)]) ==
          Catch::Approx(wx::path_measures[p]).margin(1e-14));
  }
  for (int n = 1; n <= 5; ++n)
    CHECK(std::abs(causets::path_amplitudes(g5(), action(), n).sum() - Complex(1, 0)) < 1e-12);
}

TEST_CASE("rank-1 operators") {
  Eigen::VectorXcd a3 = causets::path_amplitudes(g5(), action(), 3);
  auto rho = causets::rank1_operator(3, a3);
  double norm = 0;
  for (Eigen::Index i = 0; i < a3.size(); ++i) norm += std::norm(a3[i]);
  CHECK(norm == Catch::Approx(wx::rho3_norm).margin(1e-14));
  CHECK(rho.validate().ok(1e-12));
  CHECK(std::abs(rho.kernel(0, 0).real() - std::norm(a3[0])) < 1e-14);
}

TEST_CASE("site amplitudes") {
  for (int i = 1; i <= 8; ++i) {
    Complex a = causets::site_amplitude(g5(), action(),
                                        Causet::parse(wx::site_literals[static_cast<std::size_t>(i - 1)]));
    CHECK(std::abs(a - Complex(wx::site_amplitudes[static_cast<std::size_t>(i - 1)], 0)) < 1e-14);
  }
}

TEST_CASE("classical tables") {
  TransitionAmplitudeTable uniform = causets::classical_table(g5());
  CHECK(uniform.row_sum_residual(g5()) < 1e-12);

  auto val = [&](const char* p, const char* c) {
    Causet pc = Causet::parse(p);
    return uniform.lookup(g5(), pc.size(), g5().find(pc), g5().find(Causet::parse(c))).real();
  };
  CHECK(val("1;", "2;0<1") == Catch::Approx(0.5));
  CHECK(val("1;", "2;") == Catch::Approx(0.5));
  CHECK(val("2;", "3;0<1") == Catch::Approx(0.5));    // multiplicity 2 of 4
  CHECK(val("2;", "3;0<2,1<2") == Catch::Approx(0.25));
  CHECK(val("2;", "3;") == Catch::Approx(0.25));
  CHECK(val("2;0<1", "3;0<1,1<2") == Catch::Approx(1.0 / 3));

  SECTION("the diagonal process is classical and additive") {
    auto proc = causets::classical_process(g5(), uniform, 4);
    CHECK(proc.at(3).is_classical());
    auto rep = verify_classical_equivalences(proc.at(4), 100, 5);
    CHECK(rep.passed());
  }

  SECTION("negative rules are rejected unless permissive") {
    auto negative = [](const Causet& parent, const Causet& child, int) {
      if (parent.size() > 1) return 0.0;
      return child == Causet(2) ? 2.0 : -1.0;
    };
    CHECK_THROWS_AS(causets::classical_table(g5(), negative), std::invalid_argument);
  }
}

TEST_CASE("amplitude process characterization") {
  int top = 4;
  auto proc = causets::ap_process(g5(), action(), top);

  SECTION("the action process round-trips") {
    auto rep = causets::verify_ap_characterization(g5(), proc.ops);
    CHECK(rep.rank_ok);
    CHECK(rep.factor_ok);
    CHECK(rep.reconstruction_ok);
    // reconstructed transition amplitudes match the table entrywise
    for (int n = 2; n <= top; ++n) {
      const auto& got = rep.reconstructed.amps[static_cast<std::size_t>(n - 2)];
      for (std::size_t t = 0; t < got.size(); ++t)
        CHECK(std::abs(got[t] - action().at(n, t)) < 1e-10);
    }
  }

  SECTION("random tables round-trip too") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      auto table = causets::random_table(g5(), seed);
      CHECK(table.row_sum_residual(g5()) < 1e-12);
      auto p = causets::ap_process(g5(), table, top);
      auto rep = causets::verify_ap_characterization(g5(), p.ops);
      CHECK(rep.generated_by_ap());
      CHECK(rep.reconstruction_ok);
    }
  }

  SECTION("a rank-2 mixture is rejected at the rank test") {
    auto uniform = causets::classical_table(g5());
    std::vector<causets::ProbabilityOperator> mixed;
    for (int n = 1; n <= top; ++n) {
      Eigen::VectorXcd u = causets::path_amplitudes(g5(), action(), n);
      Eigen::VectorXcd v = causets::path_amplitudes(g5(), uniform, n);
      mixed.push_back(causets::ProbabilityOperator::dense(
          n, 0.5 * (u.conjugate() * u.transpose()) + 0.5 * (v.conjugate() * v.transpose())));
    }
    auto rep = causets::verify_ap_characterization(g5(), mixed);
    CHECK(!rep.rank_ok);
    CHECK(rep.rank_witness_level >= 2);
    CHECK(rep.second_eigenvalue > 1e-6);
  }

  SECTION("a perturbed process is rejected with a factorization witness") {
    std::vector<causets::ProbabilityOperator> ops;
    for (int n = 1; n <= top; ++n) {
      Eigen::VectorXcd a = causets::path_amplitudes(g5(), action(), n);
      if (n == 3) {
        a[0] += Complex(1e-3, 0);
        a[1] -= Complex(1e-3, 0);
      }
      ops.push_back(causets::rank1_operator(n, a));
    }
    auto rep = causets::verify_ap_characterization(g5(), ops);
    CHECK(!rep.factor_ok);
    CHECK(!rep.factor_witness.empty());
  }
}

TEST_CASE("partition function scan") {
  auto rows = causets::z_scan(g5(), 5);
  REQUIRE(rows.size() == 5);
  CHECK(rows[1].min_abs <= 1.0 + 1e-12);  // z of the 2-chain is 1
  CHECK(rows[1].min_witness == "2;0<1");
  for (const auto& r : rows) {
    CHECK(r.min_abs > 0);
    CHECK(r.max_abs >= r.min_abs);
  }

  SECTION("chain and antichain bounds up to 12, exactly evaluated") {
    for (int j = 2; j <= 12; ++j) {
      double chain = std::abs(causets::action_profile(Causet::chain(j)).z_closed);
      double anti = std::abs(causets::action_profile(Causet(j)).z_closed);
      CHECK(chain >= j - 1);
      CHECK(anti >= std::pow(2.0, j) - 2);
    }
  }
}

TEST_CASE("amplitude suite wrapper passes") {
  CHECK(verify_amplitude_suite(g5(), 12345).passed());
  CHECK(verify_growth_suite(g5()).passed());
}
