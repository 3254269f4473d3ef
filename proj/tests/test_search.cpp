#include "doctest.h"
#include "helpers.hpp"
#include "reebext/census.hpp"
#include "reebext/certificate.hpp"
#include "reebext/search.hpp"

using namespace reebext;

TEST_CASE("sphere labelings") {
  CHECK(decide(testing::sphere('+', '-')).kind == VerdictKind::Extendable);
  CHECK(decide(testing::sphere('-', '+')).kind == VerdictKind::Extendable);
  CHECK(decide(testing::sphere('+', '+')).kind == VerdictKind::NotExtendable);
  CHECK(decide(testing::sphere('-', '-')).kind == VerdictKind::NotExtendable);
  for (auto [b, d] : {std::pair{'+', '-'}, {'-', '+'}, {'+', '+'}, {'-', '-'}}) {
    auto g = testing::sphere(b, d);
    CHECK(brute_force(g).kind == decide(g).kind);
  }
}

TEST_CASE("the reversed sphere closes through one token at the cut") {
  auto v = decide(testing::sphere('-', '+'));
  REQUIRE(v.solution);
  const auto& c = v.solution->collapse;
  REQUIRE(c.initial.size() == 1);
  CHECK(c.initial[0].closed());
  CHECK(c.transitions[0].symbol == Symbol::MMinus);
  CHECK(c.transitions[0].drill == c.initial[0].id);
  CHECK(c.transitions[1].symbol == Symbol::NPlus);
}

TEST_CASE("the interleaved spheres give a four-vertex path") {
  auto g = testing::fixture("example2");
  auto v = decide(g);
  REQUIRE(v.kind == VerdictKind::Extendable);
  const auto& vg = v.solution->v;
  CHECK(vg.symbols == std::vector<Symbol>{Symbol::MPlus, Symbol::MMinus, Symbol::NPlus, Symbol::NMinus});
  REQUIRE(vg.edges.size() == 3);
  for (int e = 0; e < 3; ++e) {
    CHECK(vg.edges[e].tail == e);
    CHECK(vg.edges[e].head == e + 1);
  }
  CHECK(v.solution->labels.edges == std::vector<int>{0, 0, 0});
  CHECK(brute_force(g).kind == VerdictKind::Extendable);
}

TEST_CASE("a torus component next to the reversed sphere") {
  auto g = testing::fixture("example3");
  CHECK(decide(g).kind == VerdictKind::Extendable);
  CHECK(brute_force(g).kind == VerdictKind::Extendable);
}

TEST_CASE("a lone circle is always extendable") {
  for (int d : {-2, -1, 1, 2}) {
    auto g = parse_instance("slots 0\ncircle c degree=" + std::to_string(d) + "\n");
    CHECK(decide(g).kind == VerdictKind::Extendable);
    CHECK(brute_force(g).kind == VerdictKind::Extendable);
  }
}

TEST_CASE("census of the two-slot single edge") {
  CensusOptions o;
  o.max_vertices = 2;
  o.max_wraps = 0;
  o.max_strands = 1;
  auto instances = enumerate_instances(o);
  int edges = 0, extendable = 0;
  for (const auto& g : instances) {
    if (g.slots() != 2 || g.edges().size() != 1 || !g.circles().empty()) continue;
    ++edges;
    extendable += decide(g).kind == VerdictKind::Extendable;
  }
  CHECK(edges == 4);
  CHECK(extendable == 2);
}

TEST_CASE("chi delta sums") {
  CHECK(chi_delta_sum(testing::sphere('+', '+'), SymbolTable::standard()) == 2);
  CHECK(chi_delta_sum(testing::sphere('-', '-'), SymbolTable::standard()) == -2);
  CHECK(chi_delta_sum(testing::sphere('+', '-'), SymbolTable::standard()) == 0);
  CHECK(chi_delta_sum(testing::sphere('-', '+'), SymbolTable::standard()) == 0);
  auto pp = decide(testing::sphere('+', '+'));
  CHECK(pp.stats.chi_pruned);
}

TEST_CASE("limits are never silently wrong") {
  auto g = testing::sphere('-', '+');
  SearchLimits zero;
  zero.max_closed_tokens = 0;
  CHECK(decide(g, zero).kind == VerdictKind::Inconclusive);
  CHECK(decide_parallel(g, zero).kind == VerdictKind::Inconclusive);

  SearchLimits tiny;
  tiny.max_states = 0;
  CHECK(decide(g, tiny).kind == VerdictKind::Inconclusive);
  CHECK(decide_parallel(g, tiny).kind == VerdictKind::Inconclusive);

  // The Euler characteristic refutation does not depend on the cap.
  CHECK(decide(testing::sphere('+', '+'), zero).kind == VerdictKind::NotExtendable);
}

TEST_CASE("token crossings and the linear sweep") {
  auto mp = testing::sphere('-', '+');
  CHECK(token_crosses(mp, 1) == true);
  CHECK(decide_linear(mp, 1).kind == VerdictKind::NotExtendable);
  CHECK_THROWS_AS(decide_linear(mp, 0), std::invalid_argument);

  auto pm = testing::sphere('+', '-');
  CHECK(token_crosses(pm, 1) == false);
  CHECK(decide_linear(pm, 1).kind == VerdictKind::Extendable);
}

TEST_CASE("the oracle refuses large instances") {
  std::string text = "slots 8\n";
  for (int j = 0; j < 8; j += 2)
    text += "vertex a" + std::to_string(j) + " slot=" + std::to_string(j) + " sign=+\nvertex b" +
            std::to_string(j) + " slot=" + std::to_string(j + 1) + " sign=-\nedge e" + std::to_string(j) + " a" +
            std::to_string(j) + " -> b" + std::to_string(j) + " wraps=0\n";
  auto g = parse_instance(text);
  REQUIRE(validate(g).ok());
  CHECK_THROWS_AS(brute_force(g), std::invalid_argument);
  CHECK(decide(g).kind == VerdictKind::Extendable);
}

TEST_CASE("property: decide agrees with the oracle and certificates re-verify") {
  int extendable = 0;
  for (const auto& g : testing::small_instances()) {
    auto v = decide(g);
    REQUIRE(v.kind != VerdictKind::Inconclusive);
    CHECK(brute_force(g).kind == v.kind);
    if (!v.solution) continue;
    ++extendable;
    auto cert = make_certificate(g, *v.solution);
    CHECK(reverify(cert).empty());
  }
  CHECK(extendable > 0);
}

TEST_CASE("property: parallel search returns the serial verdict and certificate") {
  for (const auto& g : testing::small_instances()) {
    auto s = decide(g);
    for (int threads : {1, 4}) {
      SearchLimits l;
      l.threads = threads;
      auto p = decide_parallel(g, l);
      CHECK(p.kind == s.kind);
      CHECK(p.stats.states == s.stats.states);
      REQUIRE(p.solution.has_value() == s.solution.has_value());
      if (s.solution) CHECK(p.solution->collapse == s.solution->collapse);
    }
    SearchLimits fast;
    fast.deterministic = false;
    CHECK(decide_parallel(g, fast).kind == s.kind);
  }
}

TEST_CASE("property: rotation, the empty-path convention and the budget") {
  for (const auto& g : testing::small_instances()) {
    const auto kind = decide(g).kind;
    for (int k = 1; k < g.slots(); ++k) CHECK(decide(rotate(g, k)).kind == kind);
    SearchLimits strict_paths;
    strict_paths.include_empty_path = false;
    CHECK(decide(g, strict_paths).kind == kind);
  }
}

TEST_CASE("property: the serial and parallel census agree") {
  CensusOptions o;
  o.max_vertices = 4;
  o.max_strands = 2;
  auto serial = census(o);
  auto parallel = census_parallel(o, 4);
  CHECK(serial == parallel);
  CHECK(serial.passed());
}
