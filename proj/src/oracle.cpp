// Brute-force oracle. It re-derives every local rule from the symbol names
// and shares nothing with the search engine beyond the graph model, so the
// two can be compared instance by instance.

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "reebext/search.hpp"

namespace reebext {

namespace {

using Block = std::vector<Strand>;

struct Level {
  std::vector<Block> blocks;  // sorted blocks, sorted list
  int tokens = 0;
};

// One way a slot rewrites a level. Entries keep their provenance: the index
// of the passing component at the previous level, or -1 when born here.
struct Outcome {
  Symbol symbol = Symbol::MPlus;
  std::vector<Block> blocks;
  std::vector<int> block_from;
  std::vector<int> token_from;
  std::vector<int> consumed;    // previous-level components ending at the vertex
  std::vector<int> born_order;  // produced entries born here, in out-strand order (block k, or ~token i)
  std::optional<int> drilled;
};

std::vector<std::vector<Block>> all_partitions(const std::vector<Strand>& items) {
  std::vector<std::vector<Block>> out;
  std::vector<Block> cur;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == items.size()) {
      auto p = cur;
      std::sort(p.begin(), p.end());
      out.push_back(p);
      return;
    }
    // Index, not reference: the recursion appends to `cur`.
    for (std::size_t b = 0; b < cur.size(); ++b) {
      cur[b].push_back(items[i]);
      self(self, i + 1);
      cur[b].pop_back();
    }
    cur.push_back({items[i]});
    self(self, i + 1);
    cur.pop_back();
  };
  rec(rec, 0);
  return out;
}

std::vector<Symbol> symbols_for(VertexKind kind, Sign sign) {
  const bool plus = sign == Sign::Plus;
  switch (kind) {
    case VertexKind::Born: return {plus ? Symbol::MPlus : Symbol::MMinus};
    case VertexKind::Dies: return {plus ? Symbol::NPlus : Symbol::NMinus};
    case VertexKind::Split: return plus ? std::vector{Symbol::SPlus} : std::vector{Symbol::GMinus, Symbol::JMinus};
    case VertexKind::Merge: return plus ? std::vector{Symbol::GPlus, Symbol::JPlus} : std::vector{Symbol::SMinus};
  }
  return {};
}

class Oracle {
 public:
  Oracle(const LabeledReebGraph& g, const SearchLimits& limits) : g_(g), limits_(limits) {
    n_ = g.slots();
    k_ = token_bound(g, limits);
    for (int gap = 0; gap < g.gap_count(); ++gap) {
      std::vector<Level> levels;
      for (const auto& p : all_partitions(g.strands_at(gap)))
        for (int t = 0; t <= k_; ++t) levels.push_back({p, t});
      levels_.push_back(std::move(levels));
    }
  }

  Verdict run() {
    Verdict verdict;
    verdict.kind = VerdictKind::NotExtendable;
    if (n_ == 0) {
      for (const auto& c : levels_[0]) {
        ++verdict.stats.states;
        if (circle_only(c, verdict)) return verdict;
      }
      return verdict;
    }
    chosen_.assign(n_, nullptr);
    steps_.assign(n_, {});
    for (const auto& c : levels_[n_ - 1]) {
      chosen_[n_ - 1] = &c;
      if (walk(0, verdict)) return verdict;
    }
    return verdict;
  }

 private:
  bool strict_hit(const Block& b) const {
    if (!limits_.strict_circles) return false;
    return std::any_of(b.begin(), b.end(), [&](Strand s) { return g_.is_circle_source(s.source); });
  }

  Block carry(const Block& b, const std::vector<Strand>& drop) const {
    Block out;
    for (Strand s : b)
      if (std::find(drop.begin(), drop.end(), s) == drop.end()) out.push_back(*g_.advance(s));
    return out;
  }

  // Every outcome of slot j applied to level `a`.
  std::vector<Outcome> outcomes(int j, const Level& a) const {
    std::vector<Outcome> out;
    const int v = g_.vertex_at_slot(j);
    const auto ins = g_.in_strands(j);
    const auto outs = g_.out_strands(j);
    const int nb = static_cast<int>(a.blocks.size());
    auto find = [&](Strand s) {
      for (int i = 0; i < nb; ++i)
        if (std::find(a.blocks[i].begin(), a.blocks[i].end(), s) != a.blocks[i].end()) return i;
      return -1;
    };
    // Everything except `skip` blocks and the `skip_token` token passes on.
    auto base = [&](Symbol sym, std::vector<int> skip, int skip_token) {
      Outcome o;
      o.symbol = sym;
      for (int i = 0; i < nb; ++i)
        if (std::find(skip.begin(), skip.end(), i) == skip.end()) {
          o.blocks.push_back(carry(a.blocks[i], ins));
          o.block_from.push_back(i);
        }
      for (int t = 0; t < a.tokens; ++t)
        if (t != skip_token) o.token_from.push_back(nb + t);
      o.consumed = skip;
      if (skip_token >= 0) o.consumed.push_back(nb + skip_token);
      return o;
    };
    auto born_block = [](Outcome& o, Block b) {
      std::sort(b.begin(), b.end());
      o.born_order.push_back(static_cast<int>(o.blocks.size()));
      o.blocks.push_back(std::move(b));
      o.block_from.push_back(-1);
    };
    for (Symbol sym : symbols_for(*g_.kind(v), g_.vertices()[v].sign)) {
      switch (sym) {
        case Symbol::MPlus: {
          auto o = base(sym, {}, -1);
          born_block(o, {outs[0]});
          out.push_back(o);
          break;
        }
        case Symbol::MMinus: {
          for (int x = 0; x < nb; ++x) {
            if (strict_hit(a.blocks[x])) continue;
            auto o = base(sym, {x}, -1);
            auto b = carry(a.blocks[x], ins);
            b.push_back(outs[0]);
            born_block(o, b);
            o.drilled = x;
            out.push_back(o);
          }
          for (int t = 0; t < a.tokens; ++t) {
            auto o = base(sym, {}, t);
            born_block(o, {outs[0]});
            o.drilled = nb + t;
            out.push_back(o);
          }
          break;
        }
        case Symbol::NPlus: {
          int x = find(ins[0]);
          if (x < 0 || strict_hit(a.blocks[x])) break;
          auto o = base(sym, {x}, -1);
          auto rest = carry(a.blocks[x], ins);
          if (rest.empty()) {
            o.born_order.push_back(~static_cast<int>(o.token_from.size()));
            o.token_from.push_back(-1);
          } else {
            born_block(o, rest);
          }
          out.push_back(o);
          break;
        }
        case Symbol::NMinus: {
          int x = find(ins[0]);
          if (x < 0 || a.blocks[x] != Block{ins[0]} || strict_hit(a.blocks[x])) break;
          out.push_back(base(sym, {x}, -1));
          break;
        }
        case Symbol::SPlus:
        case Symbol::GMinus: {
          int x = find(ins[0]);
          if (x < 0 || strict_hit(a.blocks[x])) break;
          auto o = base(sym, {x}, -1);
          auto b = carry(a.blocks[x], ins);
          b.push_back(outs[0]);
          b.push_back(outs[1]);
          born_block(o, b);
          out.push_back(o);
          break;
        }
        case Symbol::SMinus:
        case Symbol::GPlus: {
          int x = find(ins[0]), y = find(ins[1]);
          if (x < 0 || x != y || strict_hit(a.blocks[x])) break;
          auto o = base(sym, {x}, -1);
          auto b = carry(a.blocks[x], ins);
          b.push_back(outs[0]);
          born_block(o, b);
          out.push_back(o);
          break;
        }
        case Symbol::JPlus: {
          int x = find(ins[0]), y = find(ins[1]);
          if (x < 0 || y < 0 || x == y || strict_hit(a.blocks[x]) || strict_hit(a.blocks[y])) break;
          auto o = base(sym, {std::min(x, y), std::max(x, y)}, -1);
          auto b = carry(a.blocks[x], ins);
          auto c = carry(a.blocks[y], ins);
          b.insert(b.end(), c.begin(), c.end());
          b.push_back(outs[0]);
          born_block(o, b);
          out.push_back(o);
          break;
        }
        case Symbol::JMinus: {
          int x = find(ins[0]);
          if (x < 0 || strict_hit(a.blocks[x])) break;
          const auto rest = carry(a.blocks[x], ins);
          for (std::uint32_t mask = 0; mask < (1u << rest.size()); ++mask) {
            auto o = base(sym, {x}, -1);
            Block p{outs[0]}, q{outs[1]};
            for (std::size_t i = 0; i < rest.size(); ++i) (mask >> i & 1 ? p : q).push_back(rest[i]);
            born_block(o, p);
            born_block(o, q);
            out.push_back(o);
          }
          break;
        }
      }
    }
    return out;
  }

  // Index of each produced block inside level `b`, or empty when the
  // partitions differ.
  static std::optional<std::vector<int>> match(const Outcome& o, const Level& b) {
    if (static_cast<int>(o.token_from.size()) != b.tokens || o.blocks.size() != b.blocks.size()) return std::nullopt;
    std::vector<int> where;
    for (const auto& blk : o.blocks) {
      auto it = std::find(b.blocks.begin(), b.blocks.end(), blk);
      if (it == b.blocks.end()) return std::nullopt;
      where.push_back(static_cast<int>(it - b.blocks.begin()));
    }
    return where;
  }

  struct Step {
    Outcome outcome;
    std::vector<int> next;  // previous-level component -> component index at this level, -1 if it ends
    std::vector<int> born;  // components at this level starting at the vertex, in out-strand order
  };

  Step link(const Outcome& o, const std::vector<int>& block_at, const std::vector<int>& token_perm,
            const Level& prev) const {
    Step s;
    s.outcome = o;
    const int nb_prev = static_cast<int>(prev.blocks.size());
    s.next.assign(nb_prev + prev.tokens, -1);
    const int nb = static_cast<int>(o.blocks.size());
    for (int k = 0; k < nb; ++k)
      if (o.block_from[k] >= 0) s.next[o.block_from[k]] = block_at[k];
    for (int i = 0; i < static_cast<int>(o.token_from.size()); ++i)
      if (o.token_from[i] >= 0) s.next[o.token_from[i]] = nb + token_perm[i];
    for (int e : o.born_order) s.born.push_back(e >= 0 ? block_at[e] : nb + token_perm[~e]);
    return s;
  }

  bool walk(int j, Verdict& verdict) {
    ++verdict.stats.states;
    const int prev_gap = (j + n_ - 1) % n_;
    const Level& a = *chosen_[prev_gap];
    for (const auto& o : outcomes(j, a)) {
      if (j < n_ - 1) {
        for (const auto& b : levels_[j]) {
          auto at = match(o, b);
          if (!at) continue;
          std::vector<int> ident(b.tokens);
          std::iota(ident.begin(), ident.end(), 0);
          chosen_[j] = &b;
          steps_[j] = link(o, *at, ident, a);
          if (walk(j + 1, verdict)) return true;
        }
      } else {
        const Level& c = *chosen_[n_ - 1];
        auto at = match(o, c);
        if (!at) continue;
        std::vector<int> perm(c.tokens);
        std::iota(perm.begin(), perm.end(), 0);
        do {
          steps_[j] = link(o, *at, perm, a);
          if (closed(verdict)) return true;
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
    }
    return false;
  }

  // Builds V from the chosen levels and tests allowability.
  bool closed(Verdict& verdict) {
    struct Arc {
      int tail, head;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<bool>> used(n_);
    for (int gap = 0; gap < n_; ++gap) used[gap].assign(chosen_[gap]->blocks.size() + chosen_[gap]->tokens, false);
    auto size_at = [&](int gap) { return static_cast<int>(used[gap].size()); };
    for (int j = 0; j < n_; ++j) {
      for (int start : steps_[j].born) {
        int gap = j, c = start;
        while (true) {
          used[gap][c] = true;
          int nxt = steps_[(gap + 1) % n_].next[c];
          if (nxt < 0) {
            arcs.push_back({j, (gap + 1) % n_});
            break;
          }
          gap = (gap + 1) % n_;
          c = nxt;
        }
      }
    }
    for (int gap = 0; gap < n_; ++gap) {
      for (int c = 0; c < size_at(gap); ++c) {
        if (used[gap][c]) continue;
        // A chain that never meets a vertex; reject it when it never carries strands.
        bool strands = false;
        int g = gap, x = c;
        while (!used[g][x]) {
          used[g][x] = true;
          strands |= x < static_cast<int>(chosen_[g]->blocks.size());
          x = steps_[(g + 1) % n_].next[x];
          g = (g + 1) % n_;
          if (x < 0) return false;  // cannot happen: unused components pass through
        }
        if (!strands) return false;
      }
    }
    ++verdict.stats.closed_collapses;
    ++verdict.stats.vgraphs_tested;

    std::vector<int> plus, minus;
    for (int j = 0; j < n_; ++j) {
      if (steps_[j].outcome.symbol == Symbol::GPlus) plus.push_back(j);
      if (steps_[j].outcome.symbol == Symbol::GMinus) minus.push_back(j);
    }
    if (plus.size() != minus.size()) return false;
    // Endpoints of every simple sweep path with at least one arc.
    auto ends_from = [&](int from) {
      std::vector<bool> hit(n_, false), on_path(n_, false);
      auto rec = [&](auto&& self, int u) -> void {
        on_path[u] = true;
        for (const auto& arc : arcs) {
          if (arc.tail != u) continue;
          hit[arc.head] = true;
          if (!on_path[arc.head]) self(self, arc.head);
        }
        on_path[u] = false;
      };
      rec(rec, from);
      return hit;
    };
    std::vector<int> gamma(minus.size());
    std::iota(gamma.begin(), gamma.end(), 0);
    bool allowable = plus.empty();
    while (!allowable) {
      allowable = true;
      for (std::size_t i = 0; i < plus.size() && allowable; ++i) allowable = ends_from(plus[i])[minus[gamma[i]]];
      if (!allowable && !std::next_permutation(gamma.begin(), gamma.end())) break;
    }
    if (!allowable) return false;
    verdict.kind = VerdictKind::Extendable;
    verdict.solution = Solution{to_collapse(), {}, {}, {}};
    return true;
  }

  // The same choice rendered as a Collapse, for cross-verification.
  Collapse to_collapse() const {
    Collapse col;
    int next_id = 0;
    std::vector<int> ids;
    const Level& cut = *chosen_[n_ - 1];
    for (const auto& b : cut.blocks) {
      ids.push_back(next_id);
      col.initial.push_back({next_id++, b});
    }
    for (int t = 0; t < cut.tokens; ++t) {
      ids.push_back(next_id);
      col.initial.push_back({next_id++, {}});
    }
    const auto initial_ids = ids;
    for (int j = 0; j < n_; ++j) {
      const Step& s = steps_[j];
      const Level& here = *chosen_[j];
      std::vector<int> next_ids(here.blocks.size() + here.tokens, -1);
      SlotTransition t;
      t.slot = j;
      t.symbol = s.outcome.symbol;
      for (std::size_t a = 0; a < s.next.size(); ++a) {
        if (s.next[a] >= 0) next_ids[s.next[a]] = ids[a];
        else t.in.push_back(ids[a]);
      }
      for (int b : s.born) {
        next_ids[b] = next_id;
        t.out.push_back(next_id++);
      }
      if (s.outcome.drilled) t.drill = ids[*s.outcome.drilled];
      if (t.symbol == Symbol::JMinus) t.split = SplitSpec{here.blocks[s.born[0]], here.blocks[s.born[1]]};
      std::sort(t.in.begin(), t.in.end());
      col.transitions.push_back(t);
      if (j == n_ - 1) {
        for (std::size_t c = 0; c < next_ids.size(); ++c) col.cut_pairs.push_back({next_ids[c], initial_ids[c]});
        std::sort(col.cut_pairs.begin(), col.cut_pairs.end(),
                  [](const CutPair& x, const CutPair& y) { return x.final_id < y.final_id; });
      }
      ids = next_ids;
    }
    return col;
  }

  // No slots: the partition must be invariant under the monodromy.
  bool circle_only(const Level& c, Verdict& verdict) const {
    if (c.tokens > 0) return false;
    for (const auto& b : c.blocks) {
      Block moved = carry(b, {});
      std::sort(moved.begin(), moved.end());
      if (std::find(c.blocks.begin(), c.blocks.end(), moved) == c.blocks.end()) return false;
    }
    ++verdict.stats.closed_collapses;
    ++verdict.stats.vgraphs_tested;
    verdict.kind = VerdictKind::Extendable;
    Collapse col;
    for (int i = 0; i < static_cast<int>(c.blocks.size()); ++i) col.initial.push_back({i, c.blocks[i]});
    for (int i = 0; i < static_cast<int>(c.blocks.size()); ++i) {
      Block moved = carry(c.blocks[i], {});
      std::sort(moved.begin(), moved.end());
      int to = static_cast<int>(std::find(c.blocks.begin(), c.blocks.end(), moved) - c.blocks.begin());
      col.cut_pairs.push_back({i, to});
    }
    verdict.solution = Solution{col, {}, {}, {}};
    return true;
  }

  const LabeledReebGraph& g_;
  SearchLimits limits_;
  int n_ = 0;
  int k_ = 0;
  std::vector<std::vector<Level>> levels_;
  std::vector<const Level*> chosen_;
  std::vector<Step> steps_;
};

}  // namespace

Verdict brute_force(const LabeledReebGraph& graph, const SearchLimits& limits) {
  if (static_cast<int>(graph.vertices().size()) > kOracleMaxVertices)
    throw std::invalid_argument("brute_force: more than " + std::to_string(kOracleMaxVertices) + " vertices");
  for (int gap = 0; gap < graph.gap_count(); ++gap)
    if (static_cast<int>(graph.strands_at(gap).size()) > kOracleMaxStrands)
      throw std::invalid_argument("brute_force: more than " + std::to_string(kOracleMaxStrands) +
                                  " strands at gap " + std::to_string(gap));
  return Oracle(graph, limits).run();
}

}  // namespace reebext
