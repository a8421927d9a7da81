#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "causets/growth.hpp"
#include "support/brute_force.hpp"

using causets::Causet;
using causets::Growth;
using causets::ParseError;
using causets::Path;
using causets::PathSet;
using causets::SetSpec;

namespace {

const Growth& g5() {
  static Growth g = Growth::build(5);
  return g;
}

std::size_t paper_path(const Growth& g, std::initializer_list<const char*> literals) {
  std::vector<int> entries;
  for (const char* lit : literals) entries.push_back(g.find(Causet::parse(lit)));
  return g.path_index(entries, static_cast<int>(literals.size()));
}

}  // namespace

TEST_CASE("level sizes match the brute-force oracle up to 5") {
  const Growth& g = g5();
  const std::size_t expected[] = {1, 2, 5, 16, 63};
  for (int n = 1; n <= 5; ++n) {
    CHECK(g.level(n).causets.size() == expected[n - 1]);
    CHECK(g.level(n).causets.size() == oracle::unlabeled_count(n));
  }
}

TEST_CASE("levels are sorted, deduplicated and fully connected") {
  const Growth& g = g5();
  for (int n = 1; n <= 5; ++n) {
    const auto& cs = g.level(n).causets;
    for (std::size_t i = 1; i < cs.size(); ++i) CHECK(cs[i - 1] < cs[i]);
    if (n >= 2) {
      std::set<int> with_parent;
      for (const auto& t : g.level(n).transitions) {
        with_parent.insert(t.child);
        CHECK(t.multiplicity >= 1);
      }
      CHECK(with_parent.size() == cs.size());
      // every parent has at least two distinct children
      const auto& prev = g.level(n - 1);
      for (int p = 0; p < static_cast<int>(prev.causets.size()); ++p)
        CHECK(g.children_of(n - 1, p).size() >= 2);
    }
  }
}

TEST_CASE("transition multiplicities around the third level") {
  const Growth& g = g5();
  int x2 = g.find(Causet::chain(2)), x3 = g.find(Causet(2));
  int x6 = g.find(Causet::parse("3;0<1"));
  REQUIRE(x2 >= 0);
  REQUIRE(x3 >= 0);
  REQUIRE(x6 >= 0);
  auto mult = [&](int parent, int child) {
    for (const auto& t : g.children_of(2, parent))
      if (t.child == child) return t.multiplicity;
    return 0;
  };
  CHECK(mult(x3, x6) == 2);
  CHECK(mult(x2, x6) == 1);
}

TEST_CASE("path enumeration") {
  const Growth& g = g5();
  CHECK(g.paths(1).count == 1);
  CHECK(g.paths(2).count == 2);
  CHECK(g.paths(3).count == 6);

  SECTION("the six 3-paths visit the expected sites") {
    std::set<std::size_t> indices;
    indices.insert(paper_path(g, {"1;", "2;0<1", "3;0<1,1<2"}));
    indices.insert(paper_path(g, {"1;", "2;0<1", "3;0<1,0<2"}));
    indices.insert(paper_path(g, {"1;", "2;0<1", "3;0<1"}));
    indices.insert(paper_path(g, {"1;", "2;", "3;0<1"}));
    indices.insert(paper_path(g, {"1;", "2;", "3;0<2,1<2"}));
    indices.insert(paper_path(g, {"1;", "2;", "3;"}));
    CHECK(indices.size() == 6);
  }

  SECTION("paths are lexicographically ordered and valid") {
    const auto& ps = g.paths(4);
    for (std::size_t p = 0; p + 1 < ps.count; ++p) {
      CHECK(ps.path(p).entries < ps.path(p + 1).entries);
    }
    for (std::size_t p = 0; p < ps.count; ++p) CHECK(g.valid_path(ps.path(p)));
  }

  SECTION("path count recurrence") {
    for (int n = 1; n < 5; ++n) {
      std::size_t sum = 0;
      const auto& ps = g.paths(n);
      for (std::size_t p = 0; p < ps.count; ++p)
        sum += g.children_of(n, ps.entry(p, n)).size();
      CHECK(sum == g.paths(n + 1).count);
    }
  }
}

TEST_CASE("path literals parse and print") {
  const Growth& g = g5();
  Path p = g.parse_path("1;|2;0<1|3;0<1,1<2");
  CHECK(p.length() == 3);
  CHECK(g.path_literal(p) == "1;|2;0<1|3;0<1,1<2");
  CHECK_THROWS_AS(g.parse_path("1;|3;"), ParseError);            // wrong size at entry 2
  CHECK_THROWS_AS(g.parse_path("2;0<1|3;0<1"), ParseError);      // must start at level 1
  CHECK_THROWS_AS(g.parse_path("1;|2;0<1|4;0<1"), ParseError);   // skipped level
}

TEST_CASE("one-step continuations") {
  const Growth& g = g5();
  SECTION("the full level continues to the full next level") {
    for (int n = 1; n < 5; ++n) {
      PathSet all(g.paths(n).count);
      all.set();
      PathSet next = g.one_step(all, n);
      CHECK(next.count() == g.paths(n + 1).count);
    }
  }
  SECTION("the empty set continues to the empty set") {
    PathSet none(g.paths(2).count);
    CHECK(g.one_step(none, 2).none());
  }
  SECTION("continuations of the 2-chain prefix are its three extensions") {
    PathSet a(g.paths(2).count);
    a.set(paper_path(g, {"1;", "2;0<1"}));
    PathSet next = g.one_step(a, 2);
    CHECK(next.count() == 3);
    std::set<std::string> endpoints;
    for (std::size_t p = next.find_first(); p != PathSet::npos; p = next.find_next(p))
      endpoints.insert(g.causet(3, g.paths(3).entry(p, 3)).literal());
    CHECK(endpoints == std::set<std::string>{Causet::parse("3;0<1,1<2").literal(),
                                             Causet::parse("3;0<1,0<2").literal(),
                                             Causet::parse("3;0<1").literal()});
  }
}

TEST_CASE("set spec parsing") {
  CHECK(SetSpec::parse("path:chain").kind == SetSpec::Kind::NamedChain);
  CHECK(SetSpec::parse("path:antichain").kind == SetSpec::Kind::NamedAntichain);
  CHECK(SetSpec::parse("site:3;0<1,1<2").kind == SetSpec::Kind::Site);
  CHECK(SetSpec::parse("cyl:1;|2;0<1").kind == SetSpec::Kind::Cyl);
  CHECK(SetSpec::parse("not(path:chain)").kind == SetSpec::Kind::Not);
  SetSpec u = SetSpec::parse("site:2;0<1+site:2;&path:antichain");
  CHECK(u.kind == SetSpec::Kind::Union);       // & binds tighter than +
  CHECK(u.b->kind == SetSpec::Kind::Inter);
  CHECK_THROWS_AS(SetSpec::parse("none:xx"), ParseError);
  CHECK_THROWS_AS(SetSpec::parse("site:3;0<9"), ParseError);
  CHECK_THROWS_AS(SetSpec::parse("not(path:chain"), ParseError);
  CHECK(SetSpec::parse("(path:chain+path:antichain)&site:1;").kind == SetSpec::Kind::Inter);
  // positions survive nesting
  try {
    SetSpec::parse("site:2;0<1+site:2;0<5");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() >= 16);
  }
}

TEST_CASE("level approximations") {
  const Growth& g = g5();

  SECTION("site of the 2-chain-plus-point at level 3 is the two paths through it") {
    PathSet s = approximate(g, SetSpec::parse("site:3;0<1"), 3);
    CHECK(s.count() == 2);
    CHECK(s.test(paper_path(g, {"1;", "2;0<1", "3;0<1"})));
    CHECK(s.test(paper_path(g, {"1;", "2;", "3;0<1"})));
  }

  SECTION("cylinders") {
    PathSet c2 = approximate(g, SetSpec::parse("cyl:1;|2;0<1"), 2);
    CHECK(c2.count() == 1);
    CHECK(c2.test(paper_path(g, {"1;", "2;0<1"})));
    // below the prefix length the approximation is the prefix itself
    PathSet c1 = approximate(g, SetSpec::parse("cyl:1;|2;0<1"), 1);
    CHECK(c1.count() == 1);
    // above, all continuations
    PathSet c3 = approximate(g, SetSpec::parse("cyl:1;|2;0<1"), 3);
    CHECK(c3.count() == 3);
  }

  SECTION("named paths are singleton prefixes") {
    for (int n = 1; n <= 5; ++n) {
      CHECK(approximate(g, SetSpec::chain_path(), n).count() == 1);
      CHECK(approximate(g, SetSpec::antichain_path(), n).count() == 1);
    }
  }

  SECTION("complement defaults to the level complement") {
    PathSet c = approximate(g, SetSpec::parse("not(path:chain)"), 3);
    CHECK(c.count() == 5);
    CHECK(!c.test(paper_path(g, {"1;", "2;0<1", "3;0<1,1<2"})));
  }

  SECTION("strict complement of a named path is everything") {
    PathSet c = approximate(g, SetSpec::parse("not(path:chain)"), 3, true);
    CHECK(c.count() == 6);
    // strict complement of a cylinder set stays pointwise
    PathSet cyl = approximate(g, SetSpec::parse("not(cyl:1;|2;0<1)"), 3, true);
    CHECK(cyl.count() == 3);
    // double negation returns the set itself
    PathSet dn = approximate(g, SetSpec::parse("not(not(path:chain))"), 3, true);
    CHECK(dn.count() == 1);
  }

  SECTION("union and intersection evaluate pointwise") {
    PathSet u = approximate(g, SetSpec::parse("site:3;0<1,1<2+site:3;"), 3);
    CHECK(u.count() == 2);
    PathSet i = approximate(g, SetSpec::parse("site:2;0<1&site:3;0<1"), 3);
    CHECK(i.count() == 1);
    CHECK(i.test(paper_path(g, {"1;", "2;0<1", "3;0<1"})));
  }

  SECTION("site deeper than the level is an error") {
    CHECK_THROWS_AS(approximate(g, SetSpec::parse("site:3;0<1"), 2), std::invalid_argument);
    CHECK(causets::first_evaluable_level(SetSpec::parse("site:3;0<1")) == 3);
  }

  SECTION("approximations stay within one-step continuations") {
    for (const char* text : {"path:chain", "site:3;0<1", "cyl:1;|2;", "site:2;0<1&site:3;0<1"}) {
      SetSpec s = SetSpec::parse(text);
      for (int n = causets::first_evaluable_level(s); n < 5; ++n) {
        PathSet cur = approximate(g, s, n);
        PathSet nxt = approximate(g, s, n + 1);
        CHECK((nxt & ~g.one_step(cur, n)).none());
      }
    }
  }

  SECTION("the site of the point is the whole level") {
    CHECK(approximate(g, SetSpec::parse("site:1;"), 4).count() == g.paths(4).count);
  }
}

TEST_CASE("deterministic rebuilds") {
  Growth a = Growth::build(4);
  Growth b = Growth::build(4);
  for (int n = 1; n <= 4; ++n) {
    REQUIRE(a.level(n).causets.size() == b.level(n).causets.size());
    for (std::size_t i = 0; i < a.level(n).causets.size(); ++i)
      CHECK(a.level(n).causets[i].code() == b.level(n).causets[i].code());
  }
  CHECK_THROWS_AS(Growth::build(12), std::invalid_argument);  // above the default cap
}
