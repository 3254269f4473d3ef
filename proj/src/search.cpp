#include "reebext/search.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace reebext {

namespace {

// Set partitions of {0..m-1} as restricted growth strings, lexicographic.
std::vector<std::vector<int>> restricted_growth_strings(int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(m, 0);
  auto rec = [&](auto&& self, int i, int max_used) -> void {
    if (i == m) {
      out.push_back(a);
      return;
    }
    for (int b = 0; b <= max_used + 1; ++b) {
      a[i] = b;
      self(self, i + 1, std::max(max_used, b));
    }
  };
  if (m == 0) out.push_back({});
  else rec(rec, 1, 0);
  return out;
}

int closed_count(const GapState& s) {
  return static_cast<int>(std::count_if(s.begin(), s.end(), [](const Component& c) { return c.closed(); }));
}

struct Branch {
  int tokens = 0;
  GapState initial;
};

enum class Outcome { Found, Exhausted, Aborted };

struct BranchRun {
  Outcome outcome = Outcome::Exhausted;
  std::optional<Solution> solution;
  SearchStats stats;
};

// Called on every closed, non-eternal collapse; a returned solution ends the search.
using Visitor = std::function<std::optional<Solution>(const Collapse&, VGraph&&, SearchStats&)>;

struct EngineConfig {
  int min_tokens = 0;
  int max_tokens = 0;
  bool strict_circles = false;
};

class Engine {
 public:
  Engine(const LabeledReebGraph& graph, const SymbolTable& table, EngineConfig config)
      : graph_(graph), table_(table), config_(config) {
    const auto cut = graph.strands_at(graph.cut_gap());
    const auto rgs = restricted_growth_strings(static_cast<int>(cut.size()));
    for (int t = config.min_tokens; t <= config.max_tokens; ++t) {
      for (const auto& a : rgs) {
        Branch b;
        b.tokens = t;
        int blocks = a.empty() ? 0 : *std::max_element(a.begin(), a.end()) + 1;
        b.initial.resize(blocks);
        for (int i = 0; i < blocks; ++i) b.initial[i].id = i;
        for (std::size_t i = 0; i < a.size(); ++i) b.initial[a[i]].strands.push_back(cut[i]);
        for (int i = 0; i < t; ++i) b.initial.push_back({blocks + i, {}});
        branches_.push_back(std::move(b));
      }
    }
  }

  std::size_t branch_count() const { return branches_.size(); }

  BranchRun run(std::size_t index, std::int64_t cap, const Visitor& visit,
                const std::atomic<bool>* cancel = nullptr) const {
    Walker w{*this, branches_[index], cap, visit, cancel, {}, {}};
    const auto& init = branches_[index].initial;
    w.dfs(0, init, static_cast<int>(init.size()));
    return std::move(w.result);
  }

 private:
  struct Walker {
    const Engine& e;
    const Branch& branch;
    std::int64_t cap;
    const Visitor& visit;
    const std::atomic<bool>* cancel;
    std::vector<SlotTransition> stack;
    BranchRun result;
    bool stop = false;

    int first_mid_token() const { return static_cast<int>(branch.initial.size()); }

    bool strict_blocked(const GapState& state, const std::vector<int>& ids) const {
      if (!e.config_.strict_circles) return false;
      for (const auto& c : state)
        if (std::find(ids.begin(), ids.end(), c.id) != ids.end())
          for (Strand s : c.strands)
            if (e.graph_.is_circle_source(s.source)) return true;
      return false;
    }

    std::vector<SlotTransition> choices(int j, const GapState& state, int next_id) const {
      std::vector<SlotTransition> out;
      const auto& g = e.graph_;
      const int v = g.vertex_at_slot(j);
      const auto kind = g.kind(v);
      if (!kind) return out;
      const auto ins = g.in_strands(j);
      const auto outs = g.out_strands(j);
      for (Symbol sym : e.table_.compatible_symbols(*kind, g.vertices()[v].sign)) {
        const auto& sig = e.table_.signature(sym);
        SlotTransition t;
        t.slot = j;
        t.symbol = sym;
        auto push = [&](SlotTransition x) {
          if (!strict_blocked(state, x.in)) out.push_back(std::move(x));
        };
        switch (sig.participation) {
          case Participation::Create:
            t.out = {next_id};
            push(t);
            break;
          case Participation::Drill: {
            std::vector<int> targets;
            for (const auto& c : state)
              if (!c.closed()) targets.push_back(c.id);
            for (const auto& c : state)
              if (c.closed() && c.id >= first_mid_token()) targets.push_back(c.id);
            // Untouched initial tokens are interchangeable; drill the smallest.
            for (const auto& c : state)
              if (c.closed() && c.id < first_mid_token()) {
                targets.push_back(c.id);
                break;
              }
            for (int id : targets) {
              t.in = {id};
              t.drill = id;
              t.out = {next_id};
              push(t);
            }
            break;
          }
          case Participation::Release:
          case Participation::Terminate:
          case Participation::Widen: {
            int h = holder(state, ins.at(0));
            if (h < 0) break;
            if (sig.participation == Participation::Terminate && state[h].strands.size() != 1) break;
            t.in = {state[h].id};
            if (sig.participation != Participation::Terminate) t.out = {next_id};
            push(t);
            break;
          }
          case Participation::Join:
          case Participation::Fuse: {
            int a = holder(state, ins.at(0)), b = holder(state, ins.at(1));
            if (a < 0 || b < 0) break;
            if ((sig.participation == Participation::Join) != (a == b)) break;
            t.in = {state[a].id};
            if (a != b) t.in.push_back(state[b].id);
            t.out = {next_id};
            push(t);
            break;
          }
          case Participation::Separate: {
            int h = holder(state, ins.at(0));
            if (h < 0) break;
            std::vector<Strand> rest;
            for (Strand s : state[h].strands)
              if (std::find(ins.begin(), ins.end(), s) == ins.end()) rest.push_back(*g.advance(s));
            t.in = {state[h].id};
            t.out = {next_id, next_id + 1};
            const std::uint32_t masks = 1u << rest.size();
            for (std::uint32_t mask = 0; mask < masks; ++mask) {
              SplitSpec split{{outs.at(0)}, {outs.at(1)}};
              for (std::size_t i = 0; i < rest.size(); ++i) (mask >> i & 1 ? split.first : split.second).push_back(rest[i]);
              std::sort(split.first.begin(), split.first.end());
              std::sort(split.second.begin(), split.second.end());
              t.split = split;
              push(t);
            }
            break;
          }
        }
      }
      return out;
    }

    void dfs(int j, const GapState& state, int next_id) {
      if (stop) return;
      if (cancel && cancel->load(std::memory_order_relaxed)) {
        result.outcome = Outcome::Aborted;
        stop = true;
        return;
      }
      if (++result.stats.states > cap) {
        result.outcome = Outcome::Aborted;
        stop = true;
        return;
      }
      if (j == e.graph_.slots()) {
        close(state);
        return;
      }
      for (auto& t : choices(j, state, next_id)) {
        GapState next;
        try {
          next = apply_slot(e.graph_, e.table_, state, t, {e.config_.strict_circles});
        } catch (const CollapseError&) {
          continue;
        }
        if (closed_count(next) > e.config_.max_tokens) {
          ++result.stats.token_bound_prunes;
          continue;
        }
        const int used = static_cast<int>(t.out.size());
        stack.push_back(std::move(t));
        dfs(j + 1, next, next_id + used);
        if (stop) return;
        stack.pop_back();
      }
    }

    void close(const GapState& state) {
      const auto& g = e.graph_;
      const GapState final = g.slots() == 0 ? advance_around(g, state) : state;
      const GapState& initial = branch.initial;
      std::vector<CutPair> pairs;
      std::vector<int> final_tokens, initial_tokens;
      for (const auto& f : final) {
        if (f.closed()) {
          final_tokens.push_back(f.id);
          continue;
        }
        auto it = std::find_if(initial.begin(), initial.end(),
                               [&](const Component& c) { return !c.closed() && c.strands == f.strands; });
        if (it == initial.end()) return;
        pairs.push_back({f.id, it->id});
      }
      for (const auto& c : initial)
        if (c.closed()) initial_tokens.push_back(c.id);
      if (final_tokens.size() != initial_tokens.size()) return;
      const std::size_t fixed = pairs.size();
      do {
        pairs.resize(fixed);
        for (std::size_t i = 0; i < final_tokens.size(); ++i) pairs.push_back({final_tokens[i], initial_tokens[i]});
        std::sort(pairs.begin(), pairs.end(), [](const CutPair& a, const CutPair& b) { return a.final_id < b.final_id; });
        Collapse c{initial, stack, pairs};
        VGraph v;
        try {
          v = to_vgraph(g, e.table_, c);
        } catch (const CollapseError&) {
          continue;
        }
        if (std::any_of(v.circles.begin(), v.circles.end(), [](const VCircle& o) { return o.strand_free(); })) continue;
        ++result.stats.closed_collapses;
        if (auto sol = visit(c, std::move(v), result.stats)) {
          result.outcome = Outcome::Found;
          result.solution = std::move(sol);
          stop = true;
          return;
        }
      } while (std::next_permutation(initial_tokens.begin(), initial_tokens.end()));
    }
  };

  const LabeledReebGraph& graph_;
  const SymbolTable& table_;
  EngineConfig config_;
  std::vector<Branch> branches_;
};

Visitor allowability_visitor(const SymbolTable& table, bool include_empty_path) {
  return [&table, include_empty_path](const Collapse& c, VGraph&& v, SearchStats& stats) -> std::optional<Solution> {
    ++stats.vgraphs_tested;
    const DirectedV dv = directed_view(v, table);
    auto labels = genus_labeling(dv);
    auto gamma = allowable_matching(dv, include_empty_path);
    if (labels.has_value() != gamma.has_value()) ++stats.cross_check_disagreements;
    if (!labels || !gamma) return std::nullopt;
    return Solution{c, std::move(v), std::move(*labels), std::move(*gamma)};
  };
}

void accumulate(SearchStats& into, const SearchStats& from) {
  into.states += from.states;
  into.closed_collapses += from.closed_collapses;
  into.vgraphs_tested += from.vgraphs_tested;
  into.cross_check_disagreements += from.cross_check_disagreements;
  into.token_bound_prunes += from.token_bound_prunes;
}

// Serial driver: branches in order under one shared state budget.
Verdict drive(const Engine& engine, std::int64_t budget, const Visitor& visit) {
  Verdict verdict;
  std::int64_t remaining = budget;
  for (std::size_t b = 0; b < engine.branch_count(); ++b) {
    auto run = engine.run(b, remaining, visit);
    accumulate(verdict.stats, run.stats);
    if (run.outcome == Outcome::Found) {
      verdict.kind = VerdictKind::Extendable;
      verdict.solution = std::move(run.solution);
      return verdict;
    }
    if (run.outcome == Outcome::Aborted) {
      verdict.kind = VerdictKind::Inconclusive;
      return verdict;
    }
    remaining -= run.stats.states;
  }
  verdict.kind = VerdictKind::NotExtendable;
  return verdict;
}

std::optional<Verdict> chi_refutation(const LabeledReebGraph& graph, const SymbolTable& table) {
  if (!consistency_check(table).ok()) return std::nullopt;
  auto sum = chi_delta_sum(graph, table);
  if (!sum || *sum == 0) return std::nullopt;
  Verdict v;
  v.kind = VerdictKind::NotExtendable;
  v.stats.chi_pruned = true;
  return v;
}

// A token cap below #Dies can hide a solution, so exhausting it proves nothing.
Verdict capped(Verdict v, const LabeledReebGraph& graph, const SearchLimits& limits) {
  SearchLimits natural = limits;
  natural.max_closed_tokens = -1;
  if (v.kind == VerdictKind::NotExtendable && token_bound(graph, limits) < token_bound(graph, natural))
    v.kind = VerdictKind::Inconclusive;
  return v;
}

LabeledReebGraph cut_at(const LabeledReebGraph& graph, int gap) {
  if (graph.slots() == 0) return graph;
  return rotate(graph, graph.slots() - 1 - gap);
}

}  // namespace

int token_bound(const LabeledReebGraph& graph, const SearchLimits& limits) {
  if (limits.max_closed_tokens >= 0) return limits.max_closed_tokens;
  int dies = 0;
  for (int v = 0; v < static_cast<int>(graph.vertices().size()); ++v) dies += graph.kind(v) == VertexKind::Dies;
  return dies;
}

std::string_view verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Extendable: return "Extendable";
    case VerdictKind::NotExtendable: return "NotExtendable";
    case VerdictKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::optional<int> chi_delta_sum(const LabeledReebGraph& graph, const SymbolTable& table) {
  int sum = 0;
  for (int v = 0; v < static_cast<int>(graph.vertices().size()); ++v) {
    auto kind = graph.kind(v);
    if (!kind) return std::nullopt;
    auto syms = table.compatible_symbols(*kind, graph.vertices()[v].sign);
    if (syms.empty()) return std::nullopt;
    const int d = table.signature(syms[0]).chi_delta;
    for (Symbol s : syms)
      if (table.signature(s).chi_delta != d) return std::nullopt;
    sum += d;
  }
  return sum;
}

Verdict decide(const LabeledReebGraph& graph, const SearchLimits& limits, const SymbolTable& table) {
  if (auto refuted = chi_refutation(graph, table)) return *refuted;
  Engine engine(graph, table, {0, token_bound(graph, limits), limits.strict_circles});
  return capped(drive(engine, limits.max_states, allowability_visitor(table, limits.include_empty_path)), graph,
                limits);
}

Verdict decide_parallel(const LabeledReebGraph& graph, const SearchLimits& limits, const SymbolTable& table) {
  if (auto refuted = chi_refutation(graph, table)) return *refuted;
  Engine engine(graph, table, {0, token_bound(graph, limits), limits.strict_circles});
  const auto visit = allowability_visitor(table, limits.include_empty_path);
  const auto count = static_cast<std::int64_t>(engine.branch_count());
  std::vector<BranchRun> runs(count);
  std::vector<char> done(count, 0);
  // Lowest branch that ends the serial scan on its own (found or over budget).
  std::atomic<std::int64_t> decisive{count};
  std::atomic<bool> cancel_all{false};

#ifdef _OPENMP
  const int threads = limits.threads > 0 ? limits.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
  for (std::int64_t b = 0; b < count; ++b) {
    if (b > decisive.load() || cancel_all.load()) continue;
    runs[b] = engine.run(static_cast<std::size_t>(b), limits.max_states, visit, &cancel_all);
    if (cancel_all.load() && runs[b].outcome == Outcome::Aborted) continue;
    done[b] = 1;
    if (runs[b].outcome != Outcome::Exhausted) {
      std::int64_t cur = decisive.load();
      while (b < cur && !decisive.compare_exchange_weak(cur, b)) {
      }
      if (!limits.deterministic && runs[b].outcome == Outcome::Found) cancel_all.store(true);
    }
  }

  Verdict verdict;
  if (!limits.deterministic) {
    for (std::int64_t b = 0; b < count; ++b)
      if (done[b] && runs[b].outcome == Outcome::Found) {
        verdict.kind = VerdictKind::Extendable;
        verdict.solution = std::move(runs[b].solution);
        for (std::int64_t i = 0; i < count; ++i)
          if (done[i]) accumulate(verdict.stats, runs[i].stats);
        return verdict;
      }
  }
  // Replay the serial budget accounting over the per-branch results.
  std::int64_t remaining = limits.max_states;
  for (std::int64_t b = 0; b < count; ++b) {
    auto& run = runs[b];
    if (!done[b]) {
      // Only skipped after a decisive lower branch; unreachable otherwise.
      verdict.kind = VerdictKind::Inconclusive;
      return verdict;
    }
    if (run.stats.states > remaining || run.outcome == Outcome::Aborted) {
      SearchStats partial = run.stats;
      partial.states = remaining + 1;
      accumulate(verdict.stats, partial);
      verdict.kind = VerdictKind::Inconclusive;
      return verdict;
    }
    accumulate(verdict.stats, run.stats);
    if (run.outcome == Outcome::Found) {
      verdict.kind = VerdictKind::Extendable;
      verdict.solution = std::move(run.solution);
      return verdict;
    }
    remaining -= run.stats.states;
  }
  verdict.kind = VerdictKind::NotExtendable;
  return capped(std::move(verdict), graph, limits);
}

Verdict decide_linear(const LabeledReebGraph& graph, int gap, const SearchLimits& limits, const SymbolTable& table) {
  if (!graph.strands_at(gap).empty()) throw std::invalid_argument("decide_linear: gap carries strands");
  const auto cut = cut_at(graph, gap);
  if (auto refuted = chi_refutation(cut, table)) return *refuted;
  Engine engine(cut, table, {0, 0, limits.strict_circles});
  return drive(engine, limits.max_states, allowability_visitor(table, limits.include_empty_path));
}

std::optional<bool> token_crosses(const LabeledReebGraph& graph, int gap, const SearchLimits& limits,
                                  const SymbolTable& table) {
  const auto cut = cut_at(graph, gap);
  const int bound = token_bound(cut, limits);
  if (bound < 1) return false;
  Engine engine(cut, table, {1, bound, limits.strict_circles});
  Visitor any = [](const Collapse& c, VGraph&& v, SearchStats&) -> std::optional<Solution> {
    return Solution{c, std::move(v), {}, {}};
  };
  auto verdict = drive(engine, limits.max_states, any);
  if (verdict.kind == VerdictKind::Inconclusive) return std::nullopt;
  return verdict.kind == VerdictKind::Extendable;
}

}  // namespace reebext
