#include "reebext/census.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "reebext/assembly.hpp"

namespace reebext {

namespace {

constexpr std::array<VertexKind, 4> kKinds = {VertexKind::Born, VertexKind::Dies, VertexKind::Split,
                                              VertexKind::Merge};

int outs_of(VertexKind k) { return k == VertexKind::Split ? 2 : (k == VertexKind::Dies ? 0 : 1); }
int ins_of(VertexKind k) { return k == VertexKind::Merge ? 2 : (k == VertexKind::Born ? 0 : 1); }

struct RawEdge {
  int tail, head, wraps;
};

// Rotation-invariant key: the smallest encoding over all slot shifts.
std::vector<int> canonical_key(int n, const std::vector<Sign>& signs, const std::vector<RawEdge>& edges,
                               std::vector<int> degrees) {
  std::sort(degrees.begin(), degrees.end());
  std::vector<int> best;
  for (int k = 0; k < std::max(n, 1); ++k) {
    std::vector<int> key{n};
    for (int s = 0; s < n; ++s) key.push_back(signs[(s - k + n) % n] == Sign::Plus);
    std::vector<std::array<int, 3>> es;
    for (const auto& e : edges) es.push_back({(e.tail + k) % n, (e.head + k) % n, e.wraps});
    std::sort(es.begin(), es.end());
    for (const auto& e : es) key.insert(key.end(), e.begin(), e.end());
    key.push_back(-1);
    key.insert(key.end(), degrees.begin(), degrees.end());
    if (best.empty() || key < best) best = key;
  }
  return best;
}

// Crossings of a sweep edge per gap, same convention as the graph model.
void add_crossings(std::vector<int>& load, int n, const RawEdge& e, int sign) {
  for (int g = 0; g < n; ++g) {
    int c = e.wraps;
    if (e.tail != e.head && (g - e.tail + n) % n < (e.head - e.tail + n) % n) ++c;
    load[g] += sign * c;
  }
}

}  // namespace

std::vector<LabeledReebGraph> enumerate_instances(const CensusOptions& options) {
  std::vector<LabeledReebGraph> out;
  std::set<std::vector<int>> seen;
  const int budget = options.max_strands;

  auto emit = [&](int n, const std::vector<RawEdge>& edges, const std::vector<int>& load) {
    const int peak = n == 0 ? 0 : *std::max_element(load.begin(), load.end());
    // Circle multisets fitting the remaining per-gap budget.
    std::vector<std::vector<int>> circle_sets;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int room, int max_degree) -> void {
      circle_sets.push_back(cur);
      for (int d = std::min(room, max_degree); d >= 1; --d) {
        cur.push_back(d);
        self(self, room - d, d);
        cur.pop_back();
      }
    };
    rec(rec, budget - peak, budget);
    for (auto& degrees : circle_sets) {
      std::sort(degrees.begin(), degrees.end());
      if (n == 0 && degrees.empty()) continue;
      for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<Sign> signs(n);
        for (int s = 0; s < n; ++s) signs[s] = (mask >> s & 1) ? Sign::Minus : Sign::Plus;
        if (!seen.insert(canonical_key(n, signs, edges, degrees)).second) continue;
        std::vector<Vertex> vs;
        for (int s = 0; s < n; ++s) vs.push_back({"v" + std::to_string(s), s, signs[s], std::nullopt});
        std::vector<Edge> es;
        for (std::size_t i = 0; i < edges.size(); ++i)
          es.push_back({"e" + std::to_string(i), edges[i].tail, edges[i].head, edges[i].wraps});
        std::vector<Circle> cs;
        for (std::size_t i = 0; i < degrees.size(); ++i) cs.push_back({"c" + std::to_string(i), degrees[i]});
        LabeledReebGraph g(n, std::move(vs), std::move(es), std::move(cs));
        if (validate(g).ok()) out.push_back(std::move(g));
      }
    }
  };

  for (int n = 0; n <= options.max_vertices; ++n) {
    if (n % 2 == 1) continue;  // χ = n - 2·#saddles must be even
    std::vector<int> kinds(n, 0);
    for (int code = 0; code < (1 << (2 * n)); ++code) {
      int balance = 0;
      std::vector<int> out_ports, in_ports;
      for (int s = 0; s < n; ++s) {
        kinds[s] = code >> (2 * s) & 3;
        const VertexKind k = kKinds[kinds[s]];
        for (int i = 0; i < outs_of(k); ++i) out_ports.push_back(s);
        for (int i = 0; i < ins_of(k); ++i) in_ports.push_back(s);
        balance += outs_of(k) - ins_of(k);
      }
      if (balance != 0) continue;
      std::vector<bool> used(in_ports.size(), false);
      std::vector<RawEdge> edges;
      std::vector<int> load(n, 0);
      auto assign = [&](auto&& self, std::size_t port) -> void {
        if (port == out_ports.size()) {
          emit(n, edges, load);
          return;
        }
        int last_head = -1;
        for (std::size_t i = 0; i < in_ports.size(); ++i) {
          if (used[i] || in_ports[i] == last_head) continue;
          last_head = in_ports[i];
          used[i] = true;
          const int tail = out_ports[port], head = in_ports[i];
          for (int w = tail == head ? 1 : 0; w <= options.max_wraps; ++w) {
            RawEdge e{tail, head, w};
            add_crossings(load, n, e, +1);
            if (*std::max_element(load.begin(), load.end()) <= budget) {
              edges.push_back(e);
              self(self, port + 1);
              edges.pop_back();
            }
            add_crossings(load, n, e, -1);
          }
          used[i] = false;
        }
      };
      assign(assign, 0);
    }
  }
  return out;
}

InstanceResult check_instance(const LabeledReebGraph& graph, const CensusOptions& options) {
  InstanceResult r;
  const auto& limits = options.limits;
  const Verdict d = decide(graph, limits);
  r.decided = d.kind;
  r.vgraphs = d.stats.vgraphs_tested;
  r.matching_flow_disagreements = d.stats.cross_check_disagreements;

  if (options.oracle) {
    const Verdict b = brute_force(graph, limits);
    r.oracle = b.kind;
    r.oracle_ran = true;
    if (b.solution) r.oracle_collapse_ok = verify(graph, SymbolTable::standard(), b.solution->collapse).ok();
  }

  if (options.rotations)
    for (int k = 1; k < graph.slots(); ++k)
      if (decide(rotate(graph, k), limits).kind != d.kind) r.rotations_ok = false;

  if (d.solution) {
    const auto& s = *d.solution;
    const auto& table = SymbolTable::standard();
    auto note = [&](const std::string& why) {
      if (r.sound) r.soundness_note = why;
      r.sound = false;
    };
    auto report = verify(graph, table, s.collapse, {limits.strict_circles});
    if (!report.ok()) note("verify: " + report.violations.front());
    auto cc = cross_check(directed_view(s.v, table), limits.include_empty_path);
    if (!cc.agree() || !cc.matching_found) note("cross_check disagrees");
    auto bad = check_labeling(s.v, table, s.labels);
    if (!bad.empty()) note("labeling: " + bad.front());
    try {
      const Trace trace = build_trace(graph, s.collapse, s.v, s.labels);
      const Simulation sim = simulate(trace, graph, s.collapse.initial, component_genus(s.v, s.labels));
      int sum = 0;
      for (int x : sim.chi_delta) sum += x;
      if (sum != 0) note("chiDelta does not sum to 0");
      const auto m = manifold_report(trace, sim, graph, s.v);
      if (!m.chi_agrees) note("χ(N) routes disagree");
      if (!m.boundary_ok) note("boundary audit failed");
    } catch (const std::exception& e) {
      note(std::string("simulate: ") + e.what());
    }
  }

  if (options.linear) {
    bool has_empty = false;
    for (int gap = 0; gap < graph.slots(); ++gap) {
      if (!graph.strands_at(gap).empty()) continue;
      has_empty = true;
      auto crosses = token_crosses(graph, gap, limits);
      if (!crosses || *crosses) continue;
      ++r.linear_compared;
      if (decide_linear(graph, gap, limits).kind != d.kind) ++r.linear_disagreements;
    }
    r.linear_excluded = has_empty && r.linear_compared == 0;
  }

  if (options.mirror) r.mirror_mismatch = decide(mirror(graph), limits).kind != d.kind;
  return r;
}

CensusReport summarize(const std::vector<LabeledReebGraph>& instances, const std::vector<InstanceResult>& results) {
  CensusReport rep;
  auto fail = [&](std::size_t i, const std::string& why) {
    if (rep.failures.size() < 20) rep.failures.push_back(why + "\n" + serialize_instance(instances[i]));
  };
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    ++rep.instances;
    switch (r.decided) {
      case VerdictKind::Extendable: ++rep.extendable; break;
      case VerdictKind::NotExtendable: ++rep.not_extendable; break;
      case VerdictKind::Inconclusive: ++rep.inconclusive; fail(i, "decide inconclusive"); break;
    }
    if (r.oracle_ran && r.oracle != r.decided) {
      ++rep.oracle_disagreements;
      fail(i, "decide " + std::string(verdict_name(r.decided)) + " vs oracle " + std::string(verdict_name(r.oracle)));
    }
    if (!r.oracle_collapse_ok) {
      ++rep.oracle_collapse_failures;
      fail(i, "oracle collapse does not verify");
    }
    rep.vgraphs += r.vgraphs;
    rep.matching_flow_disagreements += r.matching_flow_disagreements;
    if (r.matching_flow_disagreements) fail(i, "matching and flow disagree");
    if (!r.rotations_ok) {
      ++rep.rotation_failures;
      fail(i, "verdict changes under rotation");
    }
    if (r.decided == VerdictKind::Extendable) ++rep.certificates_checked;
    if (!r.sound) {
      ++rep.soundness_failures;
      fail(i, "unsound certificate: " + r.soundness_note);
    }
    if (r.linear_compared > 0) ++rep.linear_instances;
    rep.linear_compared += r.linear_compared;
    rep.linear_disagreements += r.linear_disagreements;
    if (r.linear_disagreements) fail(i, "linear sweep disagrees");
    rep.linear_excluded += r.linear_excluded;
    rep.mirror_mismatches += r.mirror_mismatch;
  }
  return rep;
}

CensusReport census(const CensusOptions& options) {
  const auto instances = enumerate_instances(options);
  std::vector<InstanceResult> results;
  results.reserve(instances.size());
  for (const auto& g : instances) results.push_back(check_instance(g, options));
  return summarize(instances, results);
}

CensusReport census_parallel(const CensusOptions& options, int threads) {
  const auto instances = enumerate_instances(options);
  std::vector<InstanceResult> results(instances.size());
  const auto count = static_cast<std::int64_t>(instances.size());
#ifdef _OPENMP
  const int t = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(t)
#else
  (void)threads;
#endif
  for (std::int64_t i = 0; i < count; ++i) results[i] = check_instance(instances[i], options);
  return summarize(instances, results);
}

bool CensusReport::passed() const {
  return inconclusive == 0 && oracle_disagreements == 0 && oracle_collapse_failures == 0 &&
         matching_flow_disagreements == 0 && rotation_failures == 0 && soundness_failures == 0 &&
         linear_disagreements == 0;
}

std::string CensusReport::table() const {
  std::ostringstream out;
  out << "instances              " << instances << "\n"
      << "extendable             " << extendable << "\n"
      << "not extendable         " << not_extendable << "\n"
      << "inconclusive           " << inconclusive << "\n"
      << "oracle disagreements   " << oracle_disagreements << "\n"
      << "oracle collapse errors " << oracle_collapse_failures << "\n"
      << "V graphs tested        " << vgraphs << "\n"
      << "matching/flow mismatch " << matching_flow_disagreements << "\n"
      << "rotation failures      " << rotation_failures << "\n"
      << "certificates checked   " << certificates_checked << "\n"
      << "unsound certificates   " << soundness_failures << "\n"
      << "linear: instances      " << linear_instances << "\n"
      << "linear: comparisons    " << linear_compared << "\n"
      << "linear: disagreements  " << linear_disagreements << "\n"
      << "linear: excluded       " << linear_excluded << "\n"
      << "mirror mismatches      " << mirror_mismatches << " (reported, not asserted)\n";
  for (const auto& f : failures) out << "FAIL " << f;
  return out.str();
}

}  // namespace reebext
