#include "reebext/collapse.hpp"

#include <algorithm>
#include <set>

namespace reebext {

namespace {

std::string sym(Symbol s) { return std::string(symbol_name(s)); }

bool has_circle_strand(const LabeledReebGraph& graph, const Component& c) {
  return std::any_of(c.strands.begin(), c.strands.end(),
                     [&](Strand s) { return graph.is_circle_source(s.source); });
}

// Structural precondition of a participation rule, ignoring choices.
bool participation_fits(Participation p, const GapState& state, const std::vector<Strand>& ins) {
  switch (p) {
    case Participation::Create:
    case Participation::Drill:
      return true;
    case Participation::Release:
    case Participation::Widen:
    case Participation::Separate:
      return holder(state, ins.at(0)) >= 0;
    case Participation::Terminate: {
      int h = holder(state, ins.at(0));
      return h >= 0 && state[h].strands.size() == 1;
    }
    case Participation::Join: {
      int a = holder(state, ins.at(0)), b = holder(state, ins.at(1));
      return a >= 0 && a == b;
    }
    case Participation::Fuse: {
      int a = holder(state, ins.at(0)), b = holder(state, ins.at(1));
      return a >= 0 && b >= 0 && a != b;
    }
  }
  return false;
}

std::string participation_message(Symbol s, Participation p) {
  switch (p) {
    case Participation::Terminate: return "participation: " + sym(s) + " requires the dying strand alone in its component";
    case Participation::Join: return "participation: " + sym(s) + " requires the in-strands in one component";
    case Participation::Fuse: return "participation: " + sym(s) + " requires different components";
    default: return "participation: " + sym(s) + " has no component holding its in-strand";
  }
}

void sort_state(GapState& state) {
  std::sort(state.begin(), state.end(), [](const Component& a, const Component& b) { return a.id < b.id; });
}

}  // namespace

std::string component_label(int id) { return "k" + std::to_string(id); }

std::optional<int> parse_component_label(std::string_view s) {
  if (s.size() < 2 || s[0] != 'k') return std::nullopt;
  for (char c : s.substr(1))
    if (c < '0' || c > '9') return std::nullopt;
  return std::stoi(std::string(s.substr(1)));
}

int holder(const GapState& state, Strand s) {
  for (int i = 0; i < static_cast<int>(state.size()); ++i)
    if (std::binary_search(state[i].strands.begin(), state[i].strands.end(), s)) return i;
  return -1;
}

bool VCircle::strand_free() const {
  return std::all_of(strand_groups.begin(), strand_groups.end(), [](const auto& g) { return g.empty(); });
}

GapState apply_slot(const LabeledReebGraph& graph, const SymbolTable& table, const GapState& state,
                    const SlotTransition& t, const CollapseOptions& options) {
  const int v = graph.vertex_at_slot(t.slot);
  if (v < 0) throw CollapseError(CollapseErrorCode::Malformed, "slot " + std::to_string(t.slot) + " has no vertex");
  auto kind = graph.kind(v);
  if (!kind) throw CollapseError(CollapseErrorCode::Malformed, "vertex at slot " + std::to_string(t.slot) + " is not Morse");
  const Sign sign = graph.vertices()[v].sign;
  const auto compat = table.compatible_symbols(*kind, sign);
  if (std::find(compat.begin(), compat.end(), t.symbol) == compat.end())
    throw CollapseError(CollapseErrorCode::NoSymbol, "slot " + std::to_string(t.slot) + ": " + sym(t.symbol) +
                                                         " does not fit a " + std::string(kind_name(*kind)) +
                                                         " vertex with sign " + sign_char(sign));
  const auto& sig = table.signature(t.symbol);
  const auto ins = graph.in_strands(t.slot);
  const auto outs = graph.out_strands(t.slot);
  const std::string where = "slot " + std::to_string(t.slot) + ": ";

  if (!participation_fits(sig.participation, state, ins)) {
    bool any = std::any_of(compat.begin(), compat.end(), [&](Symbol s) {
      return participation_fits(table.signature(s).participation, state, ins);
    });
    if (!any && sig.participation != Participation::Terminate)
      throw CollapseError(CollapseErrorCode::NoSymbol, where + "no local model fits the in-strands");
    throw CollapseError(CollapseErrorCode::Participation, where + participation_message(t.symbol, sig.participation));
  }

  std::vector<int> participants;
  switch (sig.participation) {
    case Participation::Create:
      break;
    case Participation::Drill: {
      if (!t.drill) throw CollapseError(CollapseErrorCode::MissingParticipant, where + sym(t.symbol) + " needs a drill target");
      auto it = std::find_if(state.begin(), state.end(), [&](const Component& c) { return c.id == *t.drill; });
      if (it == state.end())
        throw CollapseError(CollapseErrorCode::MissingParticipant,
                            where + "drill target " + component_label(*t.drill) + " is not present");
      participants.push_back(static_cast<int>(it - state.begin()));
      break;
    }
    case Participation::Join:
    case Participation::Release:
    case Participation::Terminate:
    case Participation::Widen:
    case Participation::Separate:
      participants.push_back(holder(state, ins[0]));
      break;
    case Participation::Fuse:
      participants.push_back(holder(state, ins[0]));
      participants.push_back(holder(state, ins[1]));
      break;
  }
  if (sig.participation != Participation::Drill && t.drill)
    throw CollapseError(CollapseErrorCode::Malformed, where + sym(t.symbol) + " takes no drill target");
  if (options.strict_circles)
    for (int p : participants)
      if (has_circle_strand(graph, state[p]))
        throw CollapseError(CollapseErrorCode::Participation,
                            where + "strict circles: " + component_label(state[p].id) + " carries a circle strand");

  std::vector<int> want_in;
  for (int p : participants) want_in.push_back(state[p].id);
  auto got_in = t.in;
  std::sort(want_in.begin(), want_in.end());
  std::sort(got_in.begin(), got_in.end());
  if (want_in != got_in)
    throw CollapseError(CollapseErrorCode::MissingParticipant, where + "in= does not name the participating components");

  std::size_t want_out = 0;
  switch (sig.participation) {
    case Participation::Terminate: want_out = 0; break;
    case Participation::Separate: want_out = 2; break;
    default: want_out = 1; break;
  }
  if (t.out.size() != want_out)
    throw CollapseError(CollapseErrorCode::Malformed, where + sym(t.symbol) + " produces " + std::to_string(want_out) +
                                                          " component(s)");

  GapState next;
  std::vector<Strand> rest;
  for (int i = 0; i < static_cast<int>(state.size()); ++i) {
    const bool part = std::find(participants.begin(), participants.end(), i) != participants.end();
    Component moved{state[i].id, {}};
    for (Strand s : state[i].strands) {
      if (std::find(ins.begin(), ins.end(), s) != ins.end()) continue;
      auto a = graph.advance(s);
      if (!a) throw CollapseError(CollapseErrorCode::Malformed, where + "strand ends without meeting the vertex");
      moved.strands.push_back(*a);
    }
    if (part) rest.insert(rest.end(), moved.strands.begin(), moved.strands.end());
    else next.push_back(std::move(moved));
  }
  for (int id : t.out)
    if (std::any_of(next.begin(), next.end(), [&](const Component& c) { return c.id == id; }) ||
        std::find(t.in.begin(), t.in.end(), id) != t.in.end())
      throw CollapseError(CollapseErrorCode::Malformed, where + "out id " + component_label(id) + " is not fresh");

  auto emit = [&](int id, std::vector<Strand> strands) {
    std::sort(strands.begin(), strands.end());
    next.push_back({id, std::move(strands)});
  };
  switch (sig.participation) {
    case Participation::Create:
      emit(t.out[0], {outs.at(0)});
      break;
    case Participation::Drill:
    case Participation::Widen:
    case Participation::Join:
    case Participation::Fuse:
      rest.insert(rest.end(), outs.begin(), outs.end());
      emit(t.out[0], rest);
      break;
    case Participation::Release:
      emit(t.out[0], rest);
      break;
    case Participation::Terminate:
      break;
    case Participation::Separate: {
      if (!t.split) throw CollapseError(CollapseErrorCode::MissingParticipant, where + sym(t.symbol) + " needs a split");
      auto first = t.split->first, second = t.split->second;
      std::sort(first.begin(), first.end());
      std::sort(second.begin(), second.end());
      auto all = rest;
      all.insert(all.end(), outs.begin(), outs.end());
      std::sort(all.begin(), all.end());
      std::vector<Strand> merged;
      std::merge(first.begin(), first.end(), second.begin(), second.end(), std::back_inserter(merged));
      if (merged != all || !std::binary_search(first.begin(), first.end(), outs.at(0)) ||
          !std::binary_search(second.begin(), second.end(), outs.at(1)))
        throw CollapseError(CollapseErrorCode::Participation,
                            where + "split must separate the two out-strands and cover the component");
      emit(t.out[0], first);
      emit(t.out[1], second);
      break;
    }
  }
  sort_state(next);
  return next;
}

GapState advance_around(const LabeledReebGraph& graph, const GapState& state) {
  GapState next;
  for (const auto& c : state) {
    Component moved{c.id, {}};
    for (Strand s : c.strands) moved.strands.push_back(*graph.advance(s));
    std::sort(moved.strands.begin(), moved.strands.end());
    next.push_back(std::move(moved));
  }
  return next;
}

Replay replay(const LabeledReebGraph& graph, const SymbolTable& table, const Collapse& collapse,
              const CollapseOptions& options) {
  Replay r;
  std::set<int> used;
  std::vector<Strand> covered;
  for (const auto& c : collapse.initial) {
    if (!used.insert(c.id).second)
      throw CollapseError(CollapseErrorCode::Malformed, "initial component " + component_label(c.id) + " repeated");
    if (!std::is_sorted(c.strands.begin(), c.strands.end()))
      throw CollapseError(CollapseErrorCode::Malformed, "initial component " + component_label(c.id) + " not sorted");
    covered.insert(covered.end(), c.strands.begin(), c.strands.end());
  }
  std::sort(covered.begin(), covered.end());
  if (covered != graph.strands_at(graph.cut_gap()))
    throw CollapseError(CollapseErrorCode::Malformed, "initial components do not partition the strands at the cut");
  r.initial = collapse.initial;
  sort_state(r.initial);

  if (static_cast<int>(collapse.transitions.size()) != graph.slots())
    throw CollapseError(CollapseErrorCode::Malformed, "expected one transition per slot");
  GapState state = r.initial;
  for (int j = 0; j < graph.slots(); ++j) {
    const auto& t = collapse.transitions[j];
    if (t.slot != j) throw CollapseError(CollapseErrorCode::Malformed, "transitions must be listed in slot order");
    for (int id : t.out)
      if (!used.insert(id).second)
        throw CollapseError(CollapseErrorCode::Malformed, "component id " + component_label(id) + " reused");
    state = apply_slot(graph, table, state, t, options);
    r.after.push_back(state);
  }
  r.final = graph.slots() == 0 ? advance_around(graph, state) : state;
  return r;
}

VGraph to_vgraph(const LabeledReebGraph& graph, const SymbolTable& table, const Collapse& collapse) {
  const Replay r = replay(graph, table, collapse);
  const int n = graph.slots();

  struct Segment {
    std::vector<int> gaps;
    std::vector<std::vector<Strand>> strands;
    int origin = -1;    // slot, -1 for initial
    int terminus = -1;  // slot, -1 when it reaches the final gap
  };
  std::map<int, Segment> seg;
  for (const auto& c : r.initial) seg[c.id];
  if (n == 0) {
    for (const auto& c : r.initial) {
      seg[c.id].gaps.push_back(0);
      seg[c.id].strands.push_back(c.strands);
    }
  }
  for (int j = 0; j < n; ++j) {
    const auto& t = collapse.transitions[j];
    for (int id : t.in) seg[id].terminus = j;
    for (int id : t.out) seg[id].origin = j;
    for (const auto& c : r.after[j]) {
      seg[c.id].gaps.push_back(j);
      seg[c.id].strands.push_back(c.strands);
    }
  }
  std::map<int, int> pair_of;
  for (const auto& p : collapse.cut_pairs) pair_of[p.final_id] = p.initial_id;

  VGraph v;
  v.slots = n;
  for (const auto& t : collapse.transitions) {
    v.symbols.push_back(t.symbol);
    if (t.symbol == Symbol::GPlus) v.g_plus.push_back(t.slot);
    if (t.symbol == Symbol::GMinus) v.g_minus.push_back(t.slot);
  }

  auto follow = [&](int start, auto&& sink) {
    int cur = start;
    std::set<int> seen;
    while (true) {
      if (!seen.insert(cur).second) return;  // closed loop back to start
      sink(cur);
      const auto& s = seg.at(cur);
      if (s.terminus >= 0) return;
      auto it = pair_of.find(cur);
      if (it == pair_of.end())
        throw CollapseError(CollapseErrorCode::Malformed, "cut closure: " + component_label(cur) + " is not paired");
      cur = it->second;
      if (!seg.count(cur) || seg.at(cur).origin >= 0)
        throw CollapseError(CollapseErrorCode::Malformed,
                            "cut closure: " + component_label(it->first) + " is paired with a non-initial component");
    }
  };

  for (int j = 0; j < n; ++j) {
    for (int id : collapse.transitions[j].out) {
      VEdge e;
      e.tail = j;
      e.head = -1;
      const int index = static_cast<int>(v.edges.size());
      follow(id, [&](int cur) {
        const auto& s = seg.at(cur);
        e.segments.push_back(cur);
        e.gaps.insert(e.gaps.end(), s.gaps.begin(), s.gaps.end());
        e.strand_groups.insert(e.strand_groups.end(), s.strands.begin(), s.strands.end());
        if (s.terminus >= 0) e.head = s.terminus;
        v.segment_owner[cur] = index;
      });
      if (e.head < 0) throw CollapseError(CollapseErrorCode::Malformed, "V edge from slot " + std::to_string(j) + " never ends");
      v.edges.push_back(std::move(e));
    }
  }
  for (const auto& c : r.initial) {
    if (v.segment_owner.count(c.id)) continue;
    VCircle circle;
    const int index = -static_cast<int>(v.circles.size()) - 1;
    follow(c.id, [&](int cur) {
      const auto& s = seg.at(cur);
      if (s.terminus >= 0)
        throw CollapseError(CollapseErrorCode::Malformed, "cut closure: chain through " + component_label(cur) + " breaks");
      circle.segments.push_back(cur);
      circle.gaps.insert(circle.gaps.end(), s.gaps.begin(), s.gaps.end());
      circle.strand_groups.insert(circle.strand_groups.end(), s.strands.begin(), s.strands.end());
      v.segment_owner[cur] = index;
    });
    circle.degree = static_cast<int>(circle.segments.size());
    v.circles.push_back(std::move(circle));
  }
  return v;
}

CollapseReport verify(const LabeledReebGraph& graph, const SymbolTable& table, const Collapse& collapse,
                      const CollapseOptions& options) {
  CollapseReport report;
  auto& bad = report.violations;
  Replay r;
  try {
    r = replay(graph, table, collapse, options);
  } catch (const CollapseError& e) {
    bad.push_back(e.what());
    return report;
  }

  // Cut closure: a bijection final -> initial matching strand sets.
  std::map<int, const Component*> finals, initials;
  for (const auto& c : r.final) finals[c.id] = &c;
  for (const auto& c : r.initial) initials[c.id] = &c;
  std::set<int> seen_final, seen_initial;
  for (const auto& p : collapse.cut_pairs) {
    auto f = finals.find(p.final_id);
    auto i = initials.find(p.initial_id);
    if (f == finals.end() || i == initials.end()) {
      bad.push_back("cut closure: pair " + component_label(p.final_id) + " = " + component_label(p.initial_id) +
                    " names a missing component");
      continue;
    }
    if (!seen_final.insert(p.final_id).second || !seen_initial.insert(p.initial_id).second)
      bad.push_back("cut closure: pairing is not a bijection");
    if (f->second->strands != i->second->strands)
      bad.push_back("cut closure: " + component_label(p.final_id) + " and " + component_label(p.initial_id) +
                    " bound different strands");
  }
  if (seen_final.size() != finals.size() || seen_initial.size() != initials.size())
    bad.push_back("cut closure: pairing must cover every component at the cut");

  // Every circle strand at the cut is glued back to itself.
  for (int src = static_cast<int>(graph.edges().size()); src < graph.source_count(); ++src) {
    for (Strand s : graph.strands_at(graph.cut_gap())) {
      if (s.source != src) continue;
      int fh = holder(r.final, s);
      int ih = holder(r.initial, s);
      bool glued = fh >= 0 && ih >= 0 &&
                   std::any_of(collapse.cut_pairs.begin(), collapse.cut_pairs.end(), [&](const CutPair& p) {
                     return p.final_id == r.final[fh].id && p.initial_id == r.initial[ih].id;
                   });
      if (!glued) {
        bad.push_back("circle " + graph.source_id(src) + ": strand orbit does not close");
        break;
      }
    }
  }
  if (!bad.empty()) return report;

  VGraph v;
  try {
    v = to_vgraph(graph, table, collapse);
  } catch (const CollapseError& e) {
    bad.push_back(e.what());
    return report;
  }
  const int gaps = graph.gap_count();
  for (std::size_t e = 0; e < v.edges.size(); ++e) {
    const auto& edge = v.edges[e];
    bool monotone = !edge.gaps.empty() && edge.gaps.front() == edge.tail;
    for (std::size_t i = 1; monotone && i < edge.gaps.size(); ++i)
      monotone = edge.gaps[i] == (edge.gaps[i - 1] + 1) % gaps;
    if (monotone) monotone = (edge.gaps.back() + 1) % gaps == edge.head;
    if (!monotone) bad.push_back("commutativity: " + v.edge_label(static_cast<int>(e)) + " is not swept monotonically");
  }
  for (std::size_t c = 0; c < v.circles.size(); ++c) {
    const auto& circle = v.circles[c];
    if (circle.strand_free())
      bad.push_back("closed component " + v.circle_label(static_cast<int>(c)) + " never meets a vertex");
    for (std::size_t i = 1; i < circle.gaps.size(); ++i)
      if (circle.gaps[i] != (circle.gaps[i - 1] + 1) % gaps)
        bad.push_back("commutativity: " + v.circle_label(static_cast<int>(c)) + " is not swept monotonically");
  }
  for (int j = 0; j < graph.slots(); ++j) {
    Star got;
    for (const auto& e : v.edges) {
      got.in += e.head == j;
      got.out += e.tail == j;
    }
    const auto& want = table.signature(v.symbols[j]).v_star;
    if (got != want)
      bad.push_back("slot " + std::to_string(j) + ": V star of " + sym(v.symbols[j]) + " must be (" +
                    std::to_string(want.in) + "," + std::to_string(want.out) + ")");
  }
  return report;
}

}  // namespace reebext
