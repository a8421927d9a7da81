#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "causets/causet.hpp"
#include "support/brute_force.hpp"

using causets::Causet;
using causets::ElementMask;
using causets::OffspringKind;
using causets::ParseError;

namespace {

Causet lib_causet(const oracle::LabeledPoset& p) {
  std::vector<std::pair<int, int>> covers;
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j)
      if (p.precedes(i, j)) covers.emplace_back(i, j);  // closure edges parse fine
  return Causet(p.n, covers);
}

}  // namespace

TEST_CASE("parsing the causet literal grammar") {
  CHECK(Causet::parse("1;").size() == 1);
  CHECK(Causet::parse("3;0<1,1<2") == Causet::chain(3));
  CHECK(Causet::parse("3;") == Causet(3));
  CHECK(Causet::parse("2;0<1") == Causet::chain(2));

  SECTION("the lambda-shaped causet matches its direct construction") {
    Causet lambda = Causet::parse("3;0<2,1<2");
    CHECK(lambda == Causet(3, {{0, 2}, {1, 2}}));
    CHECK(lambda.height() == 2);
    CHECK(lambda.width() == 2);
  }

  SECTION("errors carry positions") {
    CHECK_THROWS_AS(Causet::parse("3;0<3"), ParseError);
    CHECK_THROWS_AS(Causet::parse("3;0<1,1<0"), ParseError);  // cycle
    CHECK_THROWS_AS(Causet::parse("99;"), ParseError);
    CHECK_THROWS_AS(Causet::parse("3;0<1,"), ParseError);
    CHECK_THROWS_AS(Causet::parse("3"), ParseError);
    try {
      Causet::parse("3;0<1,1<0");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position() == 6);
    }
  }

  SECTION("closure input is accepted and reduced") {
    // 0<1,1<2,0<2 lists the full order; covers are just 0<1,1<2
    Causet c = Causet::parse("3;0<1,1<2,0<2");
    CHECK(c == Causet::chain(3));
    CHECK(c.cover_edges().size() == 2);
  }
}

TEST_CASE("canonical codes identify isomorphism classes") {
  CHECK(Causet::parse("2;0<1").code() == Causet::parse("2;1<0").code());
  CHECK(Causet::parse("3;0<1").code() == Causet::parse("3;1<2").code());
  CHECK(Causet::parse("3;0<1").code() != Causet::parse("3;").code());

  SECTION("codes agree with brute-force isomorphism for every labeled poset, n <= 5") {
    for (int n = 1; n <= 5; ++n) {
      auto all = oracle::all_labeled_posets(n);
      // group by the library code; within a group all brute keys must agree,
      // across groups they must differ
      std::map<std::string, std::set<std::uint64_t>> groups;
      for (const auto& p : all) groups[lib_causet(p).code()].insert(oracle::brute_canonical_key(p));
      std::set<std::uint64_t> seen;
      for (const auto& [code, keys] : groups) {
        CHECK(keys.size() == 1);
        CHECK(!seen.count(*keys.begin()));
        seen.insert(*keys.begin());
      }
      CHECK(groups.size() == oracle::unlabeled_count(n));
    }
  }

  SECTION("exactly 16 classes at size 4") {
    auto all = oracle::all_labeled_posets(4);
    std::set<std::string> codes;
    for (const auto& p : all) codes.insert(lib_causet(p).code());
    CHECK(codes.size() == 16);
  }
}

TEST_CASE("order statistics") {
  CHECK(Causet::chain(3).height() == 3);
  CHECK(Causet::chain(3).width() == 1);
  CHECK(Causet::chain(3).area() == 3);
  CHECK(Causet(2).height() == 1);
  CHECK(Causet(2).width() == 2);
  CHECK(Causet(2).area() == 2);
  CHECK(Causet::chain(2).height() == 2);
  CHECK(Causet::chain(2).width() == 1);

  Causet x6 = Causet::parse("3;0<1");
  CHECK(x6.height() == 2);
  CHECK(x6.width() == 2);
  CHECK(x6.area() == 4);
}

TEST_CASE("antichain enumeration") {
  CHECK(Causet::point().antichains().size() == 2);  // empty set and the singleton
  CHECK(Causet::chain(3).antichains().size() == 4);
  CHECK(Causet::parse("3;0<1").antichains().size() == 6);
  CHECK(Causet(3).antichains().size() == 8);
  CHECK(Causet::chain(2).antichains().size() == 3);
  CHECK(Causet(2).antichains().size() == 4);

  SECTION("every reported mask is an antichain") {
    Causet c = Causet::parse("5;0<1,1<2,0<3");
    for (ElementMask m : c.antichains()) CHECK(c.is_antichain(m));
  }
}

TEST_CASE("extension by an antichain") {
  CHECK(Causet::point().extend(0) == Causet(2));            // disjoint adjoin
  CHECK(Causet::point().extend(1) == Causet::chain(2));
  CHECK(Causet::chain(2).extend(0) == Causet::parse("3;0<1"));

  SECTION("extending the 2-antichain by one singleton gives the 2-chain plus point") {
    Causet two = Causet(2);
    CHECK(two.extend(ElementMask(1)) == Causet::parse("3;0<1"));
    CHECK(two.extend(ElementMask(2)) == Causet::parse("3;0<1"));
  }

  SECTION("extending the 2-chain above its top gives the 3-chain") {
    Causet two = Causet::chain(2);
    int top = -1;
    for (int i = 0; i < 2; ++i)
      if ((two.maximal_elements() >> i) & 1) top = i;
    CHECK(two.extend(ElementMask(1u << top)) == Causet::chain(3));
  }

  CHECK_THROWS_AS(Causet::chain(2).extend(ElementMask(3)), std::invalid_argument);
}

TEST_CASE("offspring records") {
  SECTION("the point has a height child and a width child") {
    auto records = Causet::point().offspring();
    REQUIRE(records.size() == 2);
    std::map<std::string, OffspringKind> kinds;
    for (const auto& r : records) {
      CHECK(r.multiplicity == 1);
      kinds[r.child.literal()] = r.kind;
    }
    CHECK(kinds.at(Causet::chain(2).literal()) == OffspringKind::Height);
    CHECK(kinds.at(Causet(2).literal()) == OffspringKind::Width);
  }

  SECTION("the 2-antichain has three classes and multiplicity 2 onto the chain-plus-point") {
    auto records = Causet(2).offspring();
    REQUIRE(records.size() == 3);
    long total = 0;
    for (const auto& r : records) {
      total += r.multiplicity;
      if (r.child == Causet::parse("3;0<1")) CHECK(r.multiplicity == 2);
      else CHECK(r.multiplicity == 1);
    }
    CHECK(total == 4);
  }

  SECTION("the 2-chain produces the chain-plus-point only once") {
    auto records = Causet::chain(2).offspring();
    long total = 0;
    for (const auto& r : records) {
      total += r.multiplicity;
      CHECK(r.multiplicity == 1);
    }
    CHECK(total == 3);
  }

  SECTION("the 3-antichain has total multiplicity 8") {
    long total = 0;
    for (const auto& r : Causet(3).offspring()) total += r.multiplicity;
    CHECK(total == 8);
  }

  SECTION("offspring totals of the five 3-element causets are 4, 5, 6, 5, 8") {
    const char* literals[] = {"3;0<1,1<2", "3;0<1,0<2", "3;0<1", "3;0<2,1<2", "3;"};
    const long expected[] = {4, 5, 6, 5, 8};
    for (int i = 0; i < 5; ++i) {
      long total = 0;
      for (const auto& r : Causet::parse(literals[i]).offspring()) total += r.multiplicity;
      CHECK(total == expected[i]);
    }
  }
}

TEST_CASE("offspring invariants for every causet up to size 6") {
  // enumerate all classes bottom-up from the point
  std::vector<Causet> current{Causet::point()};
  for (int n = 1; n <= 6; ++n) {
    std::set<std::string> next_codes;
    std::vector<Causet> next;
    for (const Causet& x : current) {
      auto records = x.offspring();
      long total = 0;
      bool has_h = false, has_w = false;
      for (const auto& r : records) {
        total += r.multiplicity;
        has_h = has_h || r.kind == OffspringKind::Height;
        has_w = has_w || r.kind == OffspringKind::Width;
        int dh = r.child.height() - x.height();
        int dw = r.child.width() - x.width();
        bool valid = (dh == 1 && dw == 0) || (dh == 0 && dw == 1) || (dh == 0 && dw == 0);
        CHECK(valid);
        if (next_codes.insert(r.child.code()).second) next.push_back(r.child);
      }
      CHECK(total == x.antichain_count());
      CHECK(total >= n + 1);
      CHECK(total <= (1L << n));
      CHECK(has_h);
      CHECK(has_w);
    }
    CHECK(Causet::chain(n).antichain_count() == n + 1);
    CHECK(Causet(n).antichain_count() == (1L << n));
    current = std::move(next);
  }
}

TEST_CASE("producers and maximal chain equivalence") {
  SECTION("the 2-chain-plus-point has two producers, the other 3-causets one") {
    CHECK(Causet::parse("3;0<1").producers().size() == 2);
    CHECK(Causet::chain(3).producers().size() == 1);
    CHECK(Causet::parse("3;0<1,0<2").producers().size() == 1);
    CHECK(Causet::parse("3;0<2,1<2").producers().size() == 1);
    CHECK(Causet(3).producers().size() == 1);
  }

  SECTION("a causet with two inequivalent maximal chains has two producers") {
    // chain 0<1<2 with an extra maximal element over 0
    Causet c = Causet::parse("4;0<1,1<2,0<3");
    CHECK(c.maximal_chains().size() == 2);
    CHECK(c.chain_equivalence_classes().size() == 2);
    CHECK(c.producers().size() == 2);
  }

  SECTION("three maximal chains under a single top are all equivalent") {
    Causet c = Causet::parse("4;0<3,1<3,2<3");
    CHECK(c.maximal_chains().size() == 3);
    CHECK(c.chain_equivalence_classes().size() == 1);
    CHECK(c.producers().size() == 1);
  }

  SECTION("the 3-chain has one maximal chain in one class") {
    CHECK(Causet::chain(3).maximal_chains().size() == 1);
    CHECK(Causet::chain(3).chain_equivalence_classes().size() == 1);
  }

  SECTION("producer count equals chain classes for every causet of size 2..6") {
    std::vector<Causet> current{Causet::point()};
    for (int n = 1; n <= 5; ++n) {
      std::set<std::string> seen;
      std::vector<Causet> next;
      for (const Causet& x : current)
        for (const auto& r : x.offspring())
          if (seen.insert(r.child.code()).second) next.push_back(r.child);
      for (const Causet& y : next) {
        CHECK(y.producers().size() == y.chain_equivalence_classes().size());
        // round trip: every producer can extend back to y
        for (const Causet& p : y.producers()) {
          bool found = false;
          for (ElementMask a : p.antichains())
            if (p.extend(a) == y) {
              found = true;
              break;
            }
          CHECK(found);
        }
      }
      current = std::move(next);
    }
  }

  SECTION("chains sharing a maximal element are equivalent") {
    Causet c = Causet::parse("4;0<3,1<3,2<3");
    auto chains = c.maximal_chains();
    auto classes = c.chain_equivalence_classes();
    REQUIRE(classes.size() == 1);
    CHECK(classes.front().size() == chains.size());
  }

  CHECK_THROWS_AS(Causet::point().producers(), std::invalid_argument);
}

TEST_CASE("canonical literal emission is stable") {
  Causet c = Causet::parse("3;1<0,2<0");  // relabeled lambda
  Causet d = Causet::parse("3;0<2,1<2");
  CHECK(c == d);
  CHECK(c.literal() == d.literal());
  CHECK(Causet::parse(c.literal()) == c);
  CHECK(c.code_hex().size() == c.code().size() * 2);
}
