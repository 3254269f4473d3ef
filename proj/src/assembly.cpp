#include "reebext/assembly.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace reebext {

namespace {

std::string attach_for(Symbol s) {
  switch (s) {
    case Symbol::MPlus: return "phi1";
    case Symbol::MMinus: return "phi2:mu";
    case Symbol::NPlus: return "phi4:xi";
    case Symbol::NMinus: return "phi5:nu";
    case Symbol::SPlus:
    case Symbol::GPlus:
    case Symbol::JPlus: return "phi3:sigma";
    case Symbol::SMinus:
    case Symbol::GMinus:
    case Symbol::JMinus: return "phi3:tau";
  }
  return "?";
}

std::string join_strands(const LabeledReebGraph& g, const std::vector<Strand>& strands) {
  std::string out;
  for (Strand s : strands) {
    if (!out.empty()) out += '+';
    out += g.strand_label(s);
  }
  return out.empty() ? "-" : out;
}

const Component& by_id(const GapState& state, int id) {
  for (const auto& c : state)
    if (c.id == id) return c;
  throw CollapseError(CollapseErrorCode::Malformed, "component " + component_label(id) + " missing from the replay");
}

}  // namespace

const std::string* AssemblyStep::find(const std::string& key) const {
  for (const auto& [k, v] : data)
    if (k == key) return &v;
  return nullptr;
}

std::string part_for(Symbol s) {
  switch (s) {
    case Symbol::MPlus: return "MOD(M+)";
    case Symbol::MMinus: return "MOD(M-)";
    case Symbol::NPlus: return "MOD(N+)";
    case Symbol::NMinus: return "MOD(N-)";
    case Symbol::SPlus:
    case Symbol::GPlus:
    case Symbol::JPlus: return "MOD(S+)";
    default: return "MOD(S-)";
  }
}

std::map<int, int> component_genus(const VGraph& v, const GenusLabeling& labels) {
  std::map<int, int> genus;
  for (const auto& [id, owner] : v.segment_owner)
    genus[id] = owner >= 0 ? labels.edges.at(owner) : labels.circles.at(-owner - 1);
  return genus;
}

Trace build_trace(const LabeledReebGraph& graph, const Collapse& collapse, const VGraph& v,
                  const GenusLabeling& labels, const SymbolTable& table) {
  const Replay r = replay(graph, table, collapse);
  const auto genus = component_genus(v, labels);
  auto g_of = [&](int id) { return std::to_string(genus.at(id)); };
  Trace trace;
  for (int j = 0; j < graph.slots(); ++j) {
    const auto& t = collapse.transitions[j];
    const GapState& before = j == 0 ? r.initial : r.after[j - 1];
    const auto ins = graph.in_strands(j);
    const std::string tag = std::to_string(j);
    AssemblyStep step;
    step.index = j;
    step.slot = j;
    step.part = part_for(t.symbol);
    step.attach = attach_for(t.symbol);
    auto put = [&](std::string k, std::string val) { step.data.emplace_back(std::move(k), std::move(val)); };
    put("sym", std::string(symbol_name(t.symbol)));
    switch (t.symbol) {
      case Symbol::MPlus:
        put("D2", "d" + tag);
        break;
      case Symbol::MMinus:
        step.carriers = {*t.drill};
        put("D2", "d" + tag);
        break;
      case Symbol::NPlus:
        step.carriers = {before[holder(before, ins[0])].id};
        put("P", graph.strand_label(ins[0]));
        put("A", "a" + tag);
        break;
      case Symbol::NMinus:
        step.carriers = {before[holder(before, ins[0])].id};
        put("P", graph.strand_label(ins[0]));
        put("D2", "d" + tag);
        break;
      case Symbol::SPlus:
        step.carriers = {before[holder(before, ins[0])].id};
        put("P", graph.strand_label(ins[0]));
        put("arcs", "alpha1+alpha2");
        break;
      case Symbol::GPlus:
      case Symbol::JPlus: {
        const int k1 = before[holder(before, ins[0])].id, k2 = before[holder(before, ins[1])].id;
        step.carriers = {k1};
        if (k2 != k1) step.carriers.push_back(k2);
        put("P1", graph.strand_label(ins[0]));
        put("P2", graph.strand_label(ins[1]));
        put("arcs", "alpha1+alpha2");
        if (t.symbol == Symbol::JPlus) {
          put("K1", component_label(k1));
          put("g1", g_of(k1));
          put("K2", component_label(k2));
          put("g2", g_of(k2));
        }
        break;
      }
      case Symbol::SMinus:
        step.carriers = {before[holder(before, ins[0])].id};
        put("P1", graph.strand_label(ins[0]));
        put("P2", graph.strand_label(ins[1]));
        put("R", "r" + tag);
        put("sides", "beta1+beta2");
        break;
      case Symbol::GMinus:
      case Symbol::JMinus:
        step.carriers = {before[holder(before, ins[0])].id};
        put("P", graph.strand_label(ins[0]));
        put("R", "r" + tag);
        put("sides", "beta1+beta2");
        if (t.symbol == Symbol::JMinus) {
          put("K1", component_label(t.out[0]));
          put("S1", join_strands(graph, by_id(r.after[j], t.out[0]).strands));
          put("g1", g_of(t.out[0]));
          put("K2", component_label(t.out[1]));
          put("g2", g_of(t.out[1]));
        }
        break;
    }
    if (t.symbol != Symbol::NMinus && t.symbol != Symbol::JMinus) {
      put("out", component_label(t.out[0]));
      put("g", g_of(t.out[0]));
    }
    trace.steps.push_back(std::move(step));
  }
  trace.close = collapse.cut_pairs;
  return trace;
}

int euler_characteristic(const LevelState& level) {
  int chi = 0;
  for (const auto& [id, s] : level) chi += 2 - 2 * s.genus - static_cast<int>(s.strands.size());
  return chi;
}

SimulationError::SimulationError(int step, const std::string& msg)
    : std::runtime_error(step < 0 ? "closure: " + msg : "step " + std::to_string(step) + ": " + msg), step_(step) {}

Simulation simulate(const Trace& trace, const LabeledReebGraph& graph, const GapState& initial,
                    const std::map<int, int>& genus) {
  Simulation sim;
  auto audit = [&](const LevelState& level, int gap, int step) {
    std::vector<Strand> all;
    for (const auto& [id, s] : level) all.insert(all.end(), s.strands.begin(), s.strands.end());
    std::sort(all.begin(), all.end());
    if (all != graph.strands_at(gap)) throw SimulationError(step, "boundary strands do not match the level");
  };
  LevelState level;
  for (const auto& c : initial) {
    auto it = genus.find(c.id);
    if (it == genus.end()) throw SimulationError(-1, "no genus for " + component_label(c.id));
    level[c.id] = {it->second, c.strands};
  }
  audit(level, graph.cut_gap(), -1);
  sim.levels.push_back(level);
  sim.chi.push_back(euler_characteristic(level));

  if (static_cast<int>(trace.steps.size()) != graph.slots())
    throw SimulationError(-1, "expected one step per slot");
  for (const auto& step : trace.steps) {
    const int i = step.index;
    auto fail = [&](const std::string& msg) { throw SimulationError(i, msg); };
    auto need = [&](const std::string& key) -> const std::string& {
      const std::string* v = step.find(key);
      if (!v) fail("missing data " + key);
      return *v;
    };
    auto need_int = [&](const std::string& key) {
      try {
        return std::stoi(need(key));
      } catch (const std::invalid_argument&) {
        fail("data " + key + " is not an integer");
      }
      return 0;
    };
    auto need_id = [&](const std::string& key) {
      auto id = parse_component_label(need(key));
      if (!id) fail("data " + key + " is not a component id");
      return *id;
    };
    if (step.slot != i) fail("steps must follow the slots");
    const auto sym = parse_symbol(need("sym"));
    if (!sym) fail("unknown symbol");
    if (step.part != part_for(*sym)) fail("part " + step.part + " does not realize " + need("sym"));
    const int j = step.slot;
    const auto ins = graph.in_strands(j);
    const auto outs = graph.out_strands(j);
    for (int k : step.carriers)
      if (!level.count(k)) fail("carrier " + component_label(k) + " is not on the level");
    auto expect_carriers = [&](std::size_t n) {
      if (step.carriers.size() != n) fail("expected " + std::to_string(n) + " carrier(s)");
    };
    auto holds = [&](int k, Strand s) {
      const auto& st = level.at(k).strands;
      return std::find(st.begin(), st.end(), s) != st.end();
    };
    auto check_label = [&](const std::string& key, Strand s) {
      if (need(key) != graph.strand_label(s)) fail(key + " must be the boundary circle " + graph.strand_label(s));
    };

    // Every in-strand belongs to a carrier.
    for (Strand s : ins)
      if (std::none_of(step.carriers.begin(), step.carriers.end(), [&](int k) { return holds(k, s); }))
        fail("in-strand " + graph.strand_label(s) + " lies outside the carriers");

    LevelState next;
    std::vector<Strand> pooled;
    for (const auto& [id, surf] : level) {
      const bool carrier = std::find(step.carriers.begin(), step.carriers.end(), id) != step.carriers.end();
      Surface moved{surf.genus, {}};
      for (Strand s : surf.strands)
        if (std::find(ins.begin(), ins.end(), s) == ins.end()) moved.strands.push_back(*graph.advance(s));
      if (carrier) pooled.insert(pooled.end(), moved.strands.begin(), moved.strands.end());
      else next[id] = std::move(moved);
    }
    const int carried_genus = step.carriers.empty() ? 0 : level.at(step.carriers[0]).genus;
    std::vector<std::pair<int, Surface>> created;
    auto make = [&](int genus_value, std::vector<Strand> strands, std::vector<Strand> extra) {
      strands.insert(strands.end(), extra.begin(), extra.end());
      std::sort(strands.begin(), strands.end());
      return Surface{genus_value, std::move(strands)};
    };
    switch (*sym) {
      case Symbol::MPlus:
        expect_carriers(0);
        created.push_back({need_id("out"), make(0, {}, {outs[0]})});
        break;
      case Symbol::MMinus:
        expect_carriers(1);
        created.push_back({need_id("out"), make(carried_genus, pooled, {outs[0]})});
        break;
      case Symbol::NPlus:
        expect_carriers(1);
        check_label("P", ins[0]);
        created.push_back({need_id("out"), make(carried_genus, pooled, {})});
        break;
      case Symbol::NMinus:
        expect_carriers(1);
        check_label("P", ins[0]);
        if (level.at(step.carriers[0]).strands != std::vector<Strand>{ins[0]})
          fail("the disk side must close a component bounded by P alone");
        if (carried_genus != 0) fail("N- caps a component of genus " + std::to_string(carried_genus));
        break;
      case Symbol::SPlus:
      case Symbol::GMinus:
        expect_carriers(1);
        check_label("P", ins[0]);
        if (*sym == Symbol::GMinus && carried_genus < 1) fail("G- needs a carrier of positive genus");
        created.push_back(
            {need_id("out"), make(carried_genus - (*sym == Symbol::GMinus), pooled, {outs[0], outs[1]})});
        break;
      case Symbol::SMinus:
      case Symbol::GPlus:
        expect_carriers(1);
        check_label("P1", ins[0]);
        check_label("P2", ins[1]);
        created.push_back({need_id("out"), make(carried_genus + (*sym == Symbol::GPlus), pooled, {outs[0]})});
        break;
      case Symbol::JPlus: {
        expect_carriers(2);
        check_label("P1", ins[0]);
        check_label("P2", ins[1]);
        const int k1 = need_id("K1"), k2 = need_id("K2");
        if (k1 != step.carriers[0] || k2 != step.carriers[1] || !holds(k1, ins[0]) || !holds(k2, ins[1]))
          fail("J+ must fuse the components bounded by P1 and P2");
        const int g1 = need_int("g1"), g2 = need_int("g2");
        if (g1 != level.at(k1).genus || g2 != level.at(k2).genus) fail("J+ summands disagree with the level");
        created.push_back({need_id("out"), make(g1 + g2, pooled, {outs[0]})});
        break;
      }
      case Symbol::JMinus: {
        expect_carriers(1);
        check_label("P", ins[0]);
        std::vector<Strand> first;
        const std::string& s1 = need("S1");
        for (std::size_t pos = 0; pos <= s1.size();) {
          auto plus = s1.find('+', pos);
          if (plus == std::string::npos) plus = s1.size();
          auto s = graph.parse_strand(s1.substr(pos, plus - pos), j);
          if (!s) fail("S1 names an unknown strand");
          first.push_back(*s);
          pos = plus + 1;
        }
        std::sort(first.begin(), first.end());
        auto all = pooled;
        all.push_back(outs[0]);
        all.push_back(outs[1]);
        std::sort(all.begin(), all.end());
        if (!std::binary_search(first.begin(), first.end(), outs[0]) ||
            std::binary_search(first.begin(), first.end(), outs[1]) ||
            !std::includes(all.begin(), all.end(), first.begin(), first.end()))
          fail("the rectangle must separate the two new boundary circles");
        std::vector<Strand> second;
        std::set_difference(all.begin(), all.end(), first.begin(), first.end(), std::back_inserter(second));
        const int g1 = need_int("g1"), g2 = need_int("g2");
        if (g1 < 0 || g2 < 0 || g1 + g2 != carried_genus)
          fail("J- genus split " + std::to_string(carried_genus) + " = " + std::to_string(g1) + "+" +
               std::to_string(g2) + " does not add up");
        created.push_back({need_id("K1"), make(g1, first, {})});
        created.push_back({need_id("K2"), make(g2, second, {})});
        break;
      }
    }
    for (auto& [id, surf] : created) {
      if (next.count(id) || level.count(id)) fail("component " + component_label(id) + " is not new");
      auto it = genus.find(id);
      if (it == genus.end() || it->second != surf.genus)
        fail("genus of " + component_label(id) + " is " + std::to_string(surf.genus) + ", certificate says " +
             (it == genus.end() ? std::string("nothing") : std::to_string(it->second)));
      if (const std::string* g = step.find("g"); g && *sym != Symbol::JMinus && *g != std::to_string(surf.genus))
        fail("recorded genus " + *g + " disagrees with the bookkeeping");
      next[id] = std::move(surf);
    }
    audit(next, j, i);
    const int delta = euler_characteristic(next) - euler_characteristic(level);
    const int want = signature(*sym).chi_delta;
    if (delta != want)
      fail("χ changes by " + std::to_string(delta) + ", " + need("sym") + " requires " + std::to_string(want));
    sim.chi_delta.push_back(delta);
    level = std::move(next);
    sim.levels.push_back(level);
    sim.chi.push_back(euler_characteristic(level));
  }

  // Closure: the final level glues back onto the initial one.
  LevelState final = graph.slots() == 0 ? LevelState{} : level;
  if (graph.slots() == 0)
    for (const auto& [id, s] : level) {
      Surface moved{s.genus, {}};
      for (Strand x : s.strands) moved.strands.push_back(*graph.advance(x));
      std::sort(moved.strands.begin(), moved.strands.end());
      final[id] = std::move(moved);
    }
  const LevelState& start = sim.levels.front();
  std::set<int> seen_final, seen_start;
  for (const auto& p : trace.close) {
    auto f = final.find(p.final_id);
    auto s = start.find(p.initial_id);
    if (f == final.end() || s == start.end())
      throw SimulationError(-1, "pair " + component_label(p.final_id) + "=" + component_label(p.initial_id) +
                                    " names a missing component");
    if (f->second != s->second)
      throw SimulationError(-1, component_label(p.final_id) + " does not match " + component_label(p.initial_id));
    seen_final.insert(p.final_id);
    seen_start.insert(p.initial_id);
  }
  if (seen_final.size() != final.size() || seen_start.size() != start.size() || trace.close.size() != final.size())
    throw SimulationError(-1, "pairs must match the final level with the initial one bijectively");
  sim.final = final;
  return sim;
}

ManifoldReport manifold_report(const Trace& trace, const Simulation& sim, const LabeledReebGraph& graph,
                               const VGraph& v) {
  ManifoldReport report;
  std::vector<int> parent(v.slots);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : v.edges) parent[find(e.tail)] = find(e.head);
  for (int x = 0; x < v.slots; ++x) report.component_count += find(x) == x;
  report.component_count += static_cast<int>(v.circles.size());

  for (const auto& step : trace.steps) ++report.parts[step.part];
  auto count = [&](const char* p) {
    auto it = report.parts.find(p);
    return it == report.parts.end() ? 0 : it->second;
  };
  report.chi_from_trace = count("MOD(M+)") + count("MOD(N+)") - count("MOD(S+)");
  report.chi_from_boundary = surface_invariants(graph).chi / 2;
  report.chi_agrees = report.chi_from_trace == report.chi_from_boundary;

  report.boundary_ok = sim.levels.size() == trace.steps.size() + 1;
  for (std::size_t k = 0; report.boundary_ok && k < sim.levels.size(); ++k) {
    const int gap = k == 0 ? graph.cut_gap() : trace.steps[k - 1].slot;
    std::vector<Strand> all;
    for (const auto& [id, s] : sim.levels[k]) all.insert(all.end(), s.strands.begin(), s.strands.end());
    std::sort(all.begin(), all.end());
    report.boundary_ok = all == graph.strands_at(gap);
  }
  return report;
}

}  // namespace reebext
