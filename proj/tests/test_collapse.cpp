#include "doctest.h"
#include "helpers.hpp"
#include "reebext/certificate.hpp"
#include "reebext/collapse.hpp"
#include "reebext/search.hpp"

using namespace reebext;

namespace {

bool has_violation(const CollapseReport& r, const std::string& needle) {
  for (const auto& v : r.violations)
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

SlotTransition step(int slot, Symbol s, std::vector<int> in, std::vector<int> out) {
  SlotTransition t;
  t.slot = slot;
  t.symbol = s;
  t.in = std::move(in);
  t.out = std::move(out);
  return t;
}

// Two births at slots 0 and 1 whose edges merge at slot 2, then a death.
LabeledReebGraph merge_instance(char merge_sign) {
  std::string text =
      "slots 4\nvertex a slot=0 sign=+\nvertex b slot=1 sign=+\nvertex m slot=2 sign=";
  text += merge_sign;
  text += "\nvertex d slot=3 sign=-\nedge e a -> m wraps=0\nedge f b -> m wraps=0\nedge g m -> d wraps=0\n";
  return parse_instance(text);
}

// Birth, a split into two edges, a merge of the same two edges, a death.
LabeledReebGraph handle_instance() {
  return parse_instance(
      "slots 4\nvertex a slot=0 sign=+\nvertex s slot=1 sign=+\nvertex m slot=2 sign=+\nvertex d slot=3 sign=-\n"
      "edge e a -> s wraps=0\nedge f s -> m wraps=0\nedge g s -> m wraps=0\nedge h m -> d wraps=0\n");
}

}  // namespace

TEST_CASE("birth into an empty level") {
  auto g = testing::sphere('+', '-');
  auto after = apply_slot(g, SymbolTable::standard(), {}, step(0, Symbol::MPlus, {}, {0}));
  REQUIRE(after.size() == 1);
  CHECK(after[0].id == 0);
  CHECK(after[0].strands == std::vector<Strand>{{0, 0}});
}

TEST_CASE("a negative merge of two components has no local model") {
  auto g = merge_instance('-');
  GapState two = {{0, {{0, 1}}}, {1, {{1, 0}}}};
  try {
    apply_slot(g, SymbolTable::standard(), two, step(2, Symbol::SMinus, {0, 1}, {2}));
    FAIL("expected a collapse error");
  } catch (const CollapseError& e) {
    CHECK(e.code() == CollapseErrorCode::NoSymbol);
  }
}

TEST_CASE("releasing the only strand leaves a closed token") {
  auto g = testing::sphere('-', '+');
  GapState one = {{1, {{0, 0}}}};
  auto after = apply_slot(g, SymbolTable::standard(), one, step(1, Symbol::NPlus, {1}, {2}));
  REQUIRE(after.size() == 1);
  CHECK(after[0].id == 2);
  CHECK(after[0].closed());
}

TEST_CASE("symbols must fit the vertex kind and sign") {
  auto g = testing::sphere('+', '-');
  CHECK_THROWS_AS(apply_slot(g, SymbolTable::standard(), {}, step(0, Symbol::MMinus, {}, {0})), CollapseError);
  SlotTransition drill = step(0, Symbol::MMinus, {}, {0});
  auto mp = testing::sphere('-', '+');
  try {
    apply_slot(mp, SymbolTable::standard(), {}, drill);
    FAIL("expected a collapse error");
  } catch (const CollapseError& e) {
    CHECK(e.code() == CollapseErrorCode::MissingParticipant);
  }
}

TEST_CASE("verify accepts the decided collapses of the fixtures") {
  for (const char* name : {"sphere_pm", "sphere_mp", "example2", "example3", "torus"}) {
    auto g = testing::fixture(name);
    auto v = decide(g);
    REQUIRE(v.solution);
    CHECK_MESSAGE(verify(g, SymbolTable::standard(), v.solution->collapse).ok(), name);
  }
}

TEST_CASE("verify rejects a cut pairing that does not link the strands") {
  auto g = parse_instance("slots 2\nvertex a slot=0 sign=-\nvertex b slot=1 sign=+\nedge e b -> a wraps=0\n"
                          "circle c degree=2\n");
  auto v = decide(g);
  REQUIRE(v.solution);
  Collapse bad = v.solution->collapse;
  // The degree-2 circle swaps its two strands across the cut; pair each with itself instead.
  bool changed = false;
  for (auto& p : bad.cut_pairs)
    for (const auto& c : bad.initial)
      if (p.initial_id != p.final_id && c.id == p.final_id && !c.strands.empty()) {
        p.initial_id = p.final_id;
        changed = true;
      }
  REQUIRE(changed);
  CHECK(has_violation(verify(g, SymbolTable::standard(), bad), "cut closure"));
}

TEST_CASE("verify rejects a J+ whose in-strands share a component") {
  auto g = handle_instance();
  REQUIRE(validate(g).ok());
  Collapse c;
  c.transitions = {step(0, Symbol::MPlus, {}, {0}), step(1, Symbol::SPlus, {0}, {1}),
                   step(2, Symbol::JPlus, {1}, {2}), step(3, Symbol::NMinus, {2}, {})};
  auto report = verify(g, SymbolTable::standard(), c);
  CHECK(has_violation(report, "participation: J+ requires different components"));

  c.transitions[2].symbol = Symbol::SMinus;
  CHECK_FALSE(verify(g, SymbolTable::standard(), c).ok());  // S- needs a negative merge
}

TEST_CASE("V of the spheres and the torus") {
  auto pm = decide(testing::sphere('+', '-'));
  REQUIRE(pm.solution);
  const auto& v = pm.solution->v;
  REQUIRE(v.edges.size() == 1);
  CHECK(v.edges[0].tail == 0);
  CHECK(v.edges[0].head == 1);
  CHECK(v.symbols == std::vector<Symbol>{Symbol::MPlus, Symbol::NMinus});
  CHECK(v.circles.empty());

  auto mp = decide(testing::sphere('-', '+'));
  REQUIRE(mp.solution);
  const auto& w = mp.solution->v;
  REQUIRE(w.edges.size() == 2);
  int strand_free = 0;
  for (const auto& e : w.edges) {
    bool free = true;
    for (const auto& grp : e.strand_groups) free = free && grp.empty();
    strand_free += free;
  }
  CHECK(strand_free == 1);
  CHECK(w.edges[0].tail == w.edges[1].head);
  CHECK(w.edges[1].tail == w.edges[0].head);

  for (int d : {1, 2, -1, -2}) {
    auto t = parse_instance("slots 0\ncircle c degree=" + std::to_string(d) + "\n");
    auto r = decide(t);
    REQUIRE(r.solution);
    REQUIRE(r.solution->v.circles.size() == 1);
    CHECK(r.solution->v.edges.empty());
    const auto& circle = r.solution->v.circles[0];
    std::size_t strands = 0;
    for (const auto& grp : circle.strand_groups) strands += grp.size();
    CHECK(strands == static_cast<std::size_t>(std::abs(d)));
    // One cut component per group: a lone group closes up after one segment.
    CHECK(circle.degree == static_cast<int>(circle.segments.size()));
    if (std::abs(d) == 1) CHECK(circle.degree == 1);
  }
}

TEST_CASE("property: every decided collapse replays back onto its cut") {
  int checked = 0;
  for (const auto& g : testing::small_instances()) {
    auto v = decide(g);
    if (!v.solution) continue;
    const auto& c = v.solution->collapse;
    auto report = verify(g, SymbolTable::standard(), c);
    CHECK(report.ok());
    auto r = replay(g, SymbolTable::standard(), c);
    for (const auto& p : c.cut_pairs) {
      const Component* fin = nullptr;
      const Component* ini = nullptr;
      for (const auto& x : r.final)
        if (x.id == p.final_id) fin = &x;
      for (const auto& x : r.initial)
        if (x.id == p.initial_id) ini = &x;
      REQUIRE(fin);
      REQUIRE(ini);
      CHECK(fin->strands == ini->strands);
    }
    // Every strand of every gap sits in exactly one component.
    for (int j = 0; j < g.slots(); ++j) {
      std::vector<Strand> all;
      for (const auto& comp : r.after[j]) all.insert(all.end(), comp.strands.begin(), comp.strands.end());
      std::sort(all.begin(), all.end());
      CHECK(all == g.strands_at(j));
    }
    ++checked;
  }
  CHECK(checked > 0);
}
