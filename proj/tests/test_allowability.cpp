#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "reebext/allowability.hpp"
#include "reebext/search.hpp"

using namespace reebext;

namespace {

DirectedV make_v(int vertices, std::vector<std::pair<int, int>> edges, std::vector<int> sources,
                 std::vector<int> sinks) {
  DirectedV v;
  v.vertex_count = vertices;
  v.force_zero.assign(edges.size(), false);
  v.edges = std::move(edges);
  v.sources = std::move(sources);
  v.sinks = std::move(sinks);
  return v;
}

// Endpoints of sweep paths with at least one edge, by depth-first enumeration.
std::vector<bool> path_ends(const DirectedV& v, int from) {
  std::vector<bool> hit(v.vertex_count, false), seen(v.vertex_count, false);
  auto rec = [&](auto&& self, int u) -> void {
    for (const auto& [t, h] : v.edges) {
      if (t != u) continue;
      hit[h] = true;
      if (!seen[h]) {
        seen[h] = true;
        self(self, h);
      }
    }
  };
  rec(rec, from);
  return hit;
}

// A bijection G+ -> G- along paths, by trying every permutation.
bool matching_exists(const DirectedV& v) {
  if (v.sources.size() != v.sinks.size()) return false;
  std::vector<int> perm(v.sinks.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < perm.size() && ok; ++i)
      ok = v.sources[i] == v.sinks[perm[i]] || path_ends(v, v.sources[i])[v.sinks[perm[i]]];
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Some labeling in [0, cap] satisfies out - in = [G+] - [G-] everywhere
// with pinned edges at zero, by enumeration.
bool labeling_exists(const DirectedV& v, int cap) {
  const int m = static_cast<int>(v.edges.size());
  std::vector<int> label(m, 0);
  while (true) {
    std::vector<int> net(v.vertex_count, 0);
    bool pinned_ok = true;
    for (int e = 0; e < m; ++e) {
      net[v.edges[e].first] += label[e];
      net[v.edges[e].second] -= label[e];
      if (v.force_zero[e] && label[e] != 0) pinned_ok = false;
    }
    if (pinned_ok) {
      std::vector<int> want(v.vertex_count, 0);
      for (int s : v.sources) ++want[s];
      for (int s : v.sinks) --want[s];
      if (net == want) return true;
    }
    int i = 0;
    while (i < m && label[i] == cap) label[i++] = 0;
    if (i == m) return false;
    ++label[i];
  }
}

// A random V respecting the V stars of the symbols: stubs wired at random.
DirectedV random_v(std::mt19937& rng, int vertices) {
  std::vector<Symbol> syms;
  std::uniform_int_distribution<int> pick(0, 9);
  for (int i = 0; i < vertices; ++i) syms.push_back(kAllSymbols[pick(rng)]);
  std::vector<int> outs, ins;
  for (int i = 0; i < vertices; ++i) {
    const auto star = signature(syms[i]).v_star;
    for (int k = 0; k < star.out; ++k) outs.push_back(i);
    for (int k = 0; k < star.in; ++k) ins.push_back(i);
  }
  // Balance the stubs with extra births and deaths.
  while (outs.size() < ins.size()) {
    syms.push_back(Symbol::MPlus);
    outs.push_back(static_cast<int>(syms.size()) - 1);
  }
  while (ins.size() < outs.size()) {
    syms.push_back(Symbol::NMinus);
    ins.push_back(static_cast<int>(syms.size()) - 1);
  }
  std::shuffle(ins.begin(), ins.end(), rng);
  DirectedV v;
  v.vertex_count = static_cast<int>(syms.size());
  for (std::size_t k = 0; k < outs.size(); ++k) {
    v.edges.push_back({outs[k], ins[k]});
    v.force_zero.push_back(syms[outs[k]] == Symbol::MPlus || syms[ins[k]] == Symbol::NMinus);
  }
  for (int i = 0; i < v.vertex_count; ++i) {
    if (syms[i] == Symbol::GPlus) v.sources.push_back(i);
    if (syms[i] == Symbol::GMinus) v.sinks.push_back(i);
  }
  return v;
}

}  // namespace

TEST_CASE("reachability on a single edge") {
  auto v = make_v(2, {{0, 1}}, {}, {});
  auto r = reach(v);
  CHECK(r.precedes(1, 0));
  CHECK_FALSE(r.precedes(0, 1));
  CHECK(r.precedes(0, 0));
  CHECK_FALSE(reach(v, false).precedes(0, 0));
}

TEST_CASE("allowable matchings") {
  auto none = allowable_matching(make_v(2, {{0, 1}}, {}, {}));
  REQUIRE(none);
  CHECK(none->pairs.empty());

  auto chain = make_v(3, {{0, 1}, {1, 2}}, {0}, {2});
  auto m = allowable_matching(chain);
  REQUIRE(m);
  REQUIRE(m->pairs.size() == 1);
  CHECK(m->pairs[0].source == 0);
  CHECK(m->pairs[0].sink == 2);
  CHECK(m->pairs[0].via == std::vector<int>{0, 1});

  auto apart = make_v(4, {{0, 1}, {2, 3}}, {0}, {2});
  CHECK_FALSE(allowable_matching(apart));
  CHECK_FALSE(allowable_matching(make_v(3, {{0, 1}, {1, 2}}, {2}, {0})));
}

TEST_CASE("genus labelings") {
  auto sphere = decide(testing::sphere('+', '-'));
  REQUIRE(sphere.solution);
  auto dv = directed_view(sphere.solution->v, SymbolTable::standard());
  auto lab = genus_labeling(dv);
  REQUIRE(lab);
  CHECK(lab->edges == std::vector<int>{0});

  // A G+ chain to a G- next to an unrelated edge.
  auto chain = make_v(5, {{0, 1}, {1, 2}, {3, 4}}, {0}, {2});
  auto cl = genus_labeling(chain);
  REQUIRE(cl);
  CHECK(cl->edges == std::vector<int>{1, 1, 0});

  auto pinned = chain;
  pinned.force_zero[1] = true;
  CHECK_FALSE(genus_labeling(pinned));
}

TEST_CASE("a circulation on a sweep cycle changes nothing") {
  // 0 -> 1 -> 2 -> 0 with the G+ at 0 and the G- at 2.
  auto cyc = make_v(3, {{0, 1}, {1, 2}, {2, 0}}, {0}, {2});
  auto c = cross_check(cyc);
  CHECK(c.agree());
  CHECK(c.matching_found);
  auto back = make_v(3, {{0, 1}, {1, 2}, {2, 0}}, {2}, {0});
  CHECK(cross_check(back).matching_found);
  CHECK(cross_check(back).agree());
}

TEST_CASE("property: matching and flow agree with enumeration on random V") {
  std::mt19937 rng(20240611);
  int feasible = 0, total = 0;
  for (int round = 0; round < 1500; ++round) {
    auto v = random_v(rng, 2 + round % 5);
    if (v.edges.size() > 7) continue;
    ++total;
    const bool m = matching_exists(v);
    const bool f = labeling_exists(v, static_cast<int>(v.sources.size()));
    auto c = cross_check(v);
    CHECK(c.matching_found == m);
    CHECK(c.flow_feasible == f);
    CHECK(c.agree());
    feasible += f;
    if (c.labeling) {
      const auto& lab = *c.labeling;
      std::vector<int> net(v.vertex_count, 0);
      for (std::size_t e = 0; e < v.edges.size(); ++e) {
        CHECK(lab.edges[e] >= 0);
        if (v.force_zero[e]) CHECK(lab.edges[e] == 0);
        if (v.edges[e].first == v.edges[e].second) continue;
        net[v.edges[e].first] += lab.edges[e];
        net[v.edges[e].second] -= lab.edges[e];
      }
      for (int s : v.sources) --net[s];
      for (int s : v.sinks) ++net[s];
      CHECK(std::all_of(net.begin(), net.end(), [](int x) { return x == 0; }));
    }
    if (c.matching) {
      for (const auto& p : c.matching->pairs) {
        int at = p.source;
        for (int e : p.via) {
          CHECK(v.edges[e].first == at);
          at = v.edges[e].second;
        }
        CHECK(at == p.sink);
      }
    }
  }
  CHECK(total > 500);
  CHECK(feasible > 0);
  CHECK(feasible < total);
}

TEST_CASE("property: fixture V graphs pass their own labeling rules") {
  for (const char* name : {"sphere_pm", "sphere_mp", "example2", "example3", "torus"}) {
    auto v = decide(testing::fixture(name));
    REQUIRE(v.solution);
    CHECK(check_labeling(v.solution->v, SymbolTable::standard(), v.solution->labels).empty());
    CHECK(cross_check(directed_view(v.solution->v, SymbolTable::standard())).agree());
  }
}
