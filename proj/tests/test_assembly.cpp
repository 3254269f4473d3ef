#include "doctest.h"
#include "helpers.hpp"
#include "reebext/assembly.hpp"
#include "reebext/certificate.hpp"
#include "reebext/search.hpp"

using namespace reebext;

namespace {

Certificate certify(const LabeledReebGraph& g) {
  auto v = decide(g);
  REQUIRE(v.solution);
  return make_certificate(g, *v.solution);
}

std::vector<std::string> parts(const Trace& t) {
  std::vector<std::string> out;
  for (const auto& s : t.steps) out.push_back(s.part);
  return out;
}

}  // namespace

TEST_CASE("trace of the sphere bounding a ball") {
  auto cert = certify(testing::sphere('+', '-'));
  CHECK(parts(cert.trace) == std::vector<std::string>{"MOD(M+)", "MOD(N-)"});
  CHECK(cert.trace.steps[0].attach == "phi1");
  CHECK(cert.trace.steps[1].attach == "phi5:nu");
  CHECK(cert.trace.close.empty());

  auto sim = simulate(cert);
  CHECK(sim.chi_delta == std::vector<int>{1, -1});
  CHECK(sim.final.empty());
  auto report = manifold_report(cert.trace, sim, cert.graph, cert.v);
  CHECK(report.chi_from_trace == 1);
  CHECK(report.chi_agrees);
  CHECK(report.component_count == 1);
}

TEST_CASE("trace of the reversed sphere drills the token at the cut") {
  auto cert = certify(testing::sphere('-', '+'));
  CHECK(parts(cert.trace) == std::vector<std::string>{"MOD(M-)", "MOD(N+)"});
  CHECK(cert.trace.steps[0].attach == "phi2:mu");
  CHECK(cert.trace.steps[1].attach == "phi4:xi");
  const int token = cert.collapse.initial.at(0).id;
  CHECK(cert.trace.steps[0].carriers == std::vector<int>{token});
  REQUIRE(cert.trace.close.size() == 1);
  CHECK(cert.trace.close[0].initial_id == token);

  auto sim = simulate(cert);
  // A closed sphere, then a disk, then a closed sphere again.
  REQUIRE(sim.levels.size() == 3);
  for (int k : {0, 2}) {
    REQUIRE(sim.levels[k].size() == 1);
    CHECK(sim.levels[k].begin()->second == Surface{0, {}});
  }
  REQUIRE(sim.levels[1].size() == 1);
  CHECK(sim.levels[1].begin()->second.strands.size() == 1);
  CHECK(sim.chi == std::vector<int>{2, 1, 2});

  auto report = manifold_report(cert.trace, sim, cert.graph, cert.v);
  CHECK(report.chi_from_trace == 1);
  CHECK(report.chi_from_boundary == 1);
  CHECK(report.component_count == 1);
}

TEST_CASE("trace of the interleaved spheres") {
  auto cert = certify(testing::fixture("example2"));
  CHECK(parts(cert.trace) == std::vector<std::string>{"MOD(M+)", "MOD(M-)", "MOD(N+)", "MOD(N-)"});
  auto sim = simulate(cert);
  auto report = manifold_report(cert.trace, sim, cert.graph, cert.v);
  CHECK(report.chi_from_trace == 2);
  CHECK(report.chi_agrees);
  for (const char* p : {"MOD(M+)", "MOD(M-)", "MOD(N+)", "MOD(N-)"}) CHECK(report.parts.at(p) == 1);
}

TEST_CASE("a torus bounds a solid torus") {
  auto cert = certify(testing::fixture("torus"));
  CHECK(cert.trace.steps.empty());
  CHECK(cert.labels.circles == std::vector<int>{0});
  auto sim = simulate(cert);
  auto report = manifold_report(cert.trace, sim, cert.graph, cert.v);
  CHECK(report.chi_from_trace == 0);
  CHECK(report.chi_from_boundary == 0);
  CHECK(report.component_count == 1);
}

TEST_CASE("the torus next to the reversed sphere") {
  auto cert = certify(testing::fixture("example3"));
  auto sim = simulate(cert);
  auto report = manifold_report(cert.trace, sim, cert.graph, cert.v);
  CHECK(report.chi_from_trace == 1);
  CHECK(report.chi_agrees);
}

TEST_CASE("a wrong genus split is caught at its step") {
  auto cert = certify(testing::fixture("genus2_split"));
  int split_step = -1;
  for (auto& s : cert.trace.steps)
    if (*s.find("sym") == "J-") {
      CHECK(*s.find("g1") == "1");
      CHECK(*s.find("g2") == "1");
      split_step = s.index;
      for (auto& [k, v] : s.data)
        if (k == "g2") v = "0";
    }
  REQUIRE(split_step >= 0);
  try {
    simulate(cert);
    FAIL("expected a simulation error");
  } catch (const SimulationError& e) {
    CHECK(e.step() == split_step);
  }
  CHECK_FALSE(reverify(cert).empty());
}

TEST_CASE("other injected faults") {
  auto cert = certify(testing::fixture("example2"));
  auto carrier = cert;
  carrier.trace.steps[1].carriers = {42};
  CHECK_THROWS_AS(simulate(carrier), SimulationError);

  auto closure = certify(testing::sphere('-', '+'));
  closure.trace.close.clear();
  try {
    simulate(closure);
    FAIL("expected a simulation error");
  } catch (const SimulationError& e) {
    CHECK(e.step() == -1);
  }
}

TEST_CASE("property: every certificate simulates with balanced chi") {
  int checked = 0;
  for (const auto& g : testing::small_instances()) {
    auto v = decide(g);
    if (!v.solution) continue;
    auto cert = make_certificate(g, *v.solution);
    auto sim = simulate(cert);
    int sum = 0;
    for (std::size_t i = 0; i < cert.trace.steps.size(); ++i) {
      const auto sym = parse_symbol(*cert.trace.steps[i].find("sym"));
      REQUIRE(sym);
      CHECK(sim.chi_delta[i] == signature(*sym).chi_delta);
      CHECK(sim.chi[i + 1] - sim.chi[i] == sim.chi_delta[i]);
      sum += sim.chi_delta[i];
    }
    CHECK(sum == 0);
    CHECK(sim.chi.front() == sim.chi.back());
    auto report = manifold_report(cert.trace, sim, g, cert.v);
    CHECK(report.chi_agrees);
    CHECK(report.boundary_ok);
    // Part census: MOD(S+) is shared by S+, G+ and J+.
    int s_plus = 0;
    for (Symbol s : cert.v.symbols) s_plus += s == Symbol::SPlus || s == Symbol::GPlus || s == Symbol::JPlus;
    const int counted = report.parts.count("MOD(S+)") ? report.parts.at("MOD(S+)") : 0;
    CHECK(counted == s_plus);
    ++checked;
  }
  CHECK(checked > 100);
}
