#include "reebext/allowability.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace reebext {

namespace {

// Edmonds-Karp on a small residual graph.
class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes) : adj_(nodes) {}

  int add_edge(int from, int to, int cap) {
    adj_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, cap});
    adj_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, 0});
    return static_cast<int>(arcs_.size()) - 2;
  }

  int max_flow(int s, int t) {
    int total = 0;
    while (true) {
      std::vector<int> via(adj_.size(), -1);
      std::deque<int> queue{s};
      std::vector<bool> seen(adj_.size(), false);
      seen[s] = true;
      while (!queue.empty() && !seen[t]) {
        int u = queue.front();
        queue.pop_front();
        for (int a : adj_[u]) {
          int w = arcs_[a].to;
          if (!seen[w] && arcs_[a].cap > 0) {
            seen[w] = true;
            via[w] = a;
            queue.push_back(w);
          }
        }
      }
      if (!seen[t]) return total;
      int push = std::numeric_limits<int>::max();
      for (int w = t; w != s; w = arcs_[via[w] ^ 1].to) push = std::min(push, arcs_[via[w]].cap);
      for (int w = t; w != s; w = arcs_[via[w] ^ 1].to) {
        arcs_[via[w]].cap -= push;
        arcs_[via[w] ^ 1].cap += push;
      }
      total += push;
    }
  }

  int flow_on(int arc) const { return arcs_[arc ^ 1].cap; }

 private:
  struct Arc {
    int to;
    int cap;
  };
  std::vector<std::vector<int>> adj_;
  std::vector<Arc> arcs_;
};

std::vector<int> shortest_path(const DirectedV& v, int from, int to) {
  // BFS over (vertex, used >= 1 edge); edges scanned in index order.
  std::vector<int> via(v.vertex_count, -1);
  std::vector<bool> seen(v.vertex_count, false);
  std::deque<int> queue;
  for (int e = 0; e < static_cast<int>(v.edges.size()); ++e) {
    if (v.edges[e].first != from) continue;
    int w = v.edges[e].second;
    if (!seen[w]) {
      seen[w] = true;
      via[w] = e;
      queue.push_back(w);
    }
  }
  while (!queue.empty() && !seen[to]) {
    int u = queue.front();
    queue.pop_front();
    for (int e = 0; e < static_cast<int>(v.edges.size()); ++e) {
      if (v.edges[e].first != u) continue;
      int w = v.edges[e].second;
      if (!seen[w]) {
        seen[w] = true;
        via[w] = e;
        queue.push_back(w);
      }
    }
  }
  std::vector<int> path;
  if (!seen[to]) return path;
  int cur = to;
  do {
    int e = via[cur];
    path.push_back(e);
    cur = v.edges[e].first;
  } while (cur != from || path.empty());
  // A path that returned to `from` before reaching `to` cannot occur: BFS
  // marks `to` through the first edge that lands on it.
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

DirectedV directed_view(const VGraph& v, const SymbolTable& table) {
  DirectedV d;
  d.vertex_count = v.slots;
  for (const auto& e : v.edges) {
    d.edges.emplace_back(e.tail, e.head);
    bool pinned = table.signature(v.symbols[e.tail]).genus_rule == GenusRule::ForceZeroOut ||
                  table.signature(v.symbols[e.head]).genus_rule == GenusRule::ForceZeroIn;
    d.force_zero.push_back(pinned);
  }
  for (int j = 0; j < v.slots; ++j) {
    auto rule = table.signature(v.symbols[j]).genus_rule;
    if (rule == GenusRule::SourceOne) d.sources.push_back(j);
    if (rule == GenusRule::SinkOne) d.sinks.push_back(j);
  }
  d.circle_count = static_cast<int>(v.circles.size());
  return d;
}

ReachRelation::ReachRelation(const DirectedV& v, bool include_empty_path)
    : reach_(v.vertex_count, std::vector<bool>(v.vertex_count, false)), empty_path_(include_empty_path) {
  for (int s = 0; s < v.vertex_count; ++s) {
    std::deque<int> queue;
    for (const auto& [t, h] : v.edges)
      if (t == s && !reach_[s][h]) {
        reach_[s][h] = true;
        queue.push_back(h);
      }
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (const auto& [t, h] : v.edges)
        if (t == u && !reach_[s][h]) {
          reach_[s][h] = true;
          queue.push_back(h);
        }
    }
  }
}

ReachRelation reach(const DirectedV& v, bool include_empty_path) { return ReachRelation(v, include_empty_path); }

std::optional<Matching> allowable_matching(const DirectedV& v, bool include_empty_path) {
  if (v.sources.size() != v.sinks.size()) return std::nullopt;
  const ReachRelation rel(v, include_empty_path);
  const int k = static_cast<int>(v.sources.size());
  // candidate[i][j]: sink j ⪯ source i
  std::vector<std::vector<bool>> candidate(k, std::vector<bool>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) candidate[i][j] = rel.precedes(v.sinks[j], v.sources[i]);

  std::vector<int> match_of_sink(k, -1);
  for (int i = 0; i < k; ++i) {
    std::vector<bool> visited(k, false);
    auto augment = [&](auto&& self, int src) -> bool {
      for (int j = 0; j < k; ++j) {
        if (!candidate[src][j] || visited[j]) continue;
        visited[j] = true;
        if (match_of_sink[j] < 0 || self(self, match_of_sink[j])) {
          match_of_sink[j] = src;
          return true;
        }
      }
      return false;
    };
    if (!augment(augment, i)) return std::nullopt;
  }
  Matching m;
  m.pairs.resize(k);
  for (int j = 0; j < k; ++j) {
    int i = match_of_sink[j];
    m.pairs[i].source = v.sources[i];
    m.pairs[i].sink = v.sinks[j];
    if (v.sources[i] != v.sinks[j]) m.pairs[i].via = shortest_path(v, v.sources[i], v.sinks[j]);
  }
  return m;
}

std::optional<GenusLabeling> genus_labeling(const DirectedV& v) {
  const int k = static_cast<int>(v.sources.size());
  if (k != static_cast<int>(v.sinks.size())) return std::nullopt;
  const int source = v.vertex_count, sink = v.vertex_count + 1;
  FlowNetwork net(v.vertex_count + 2);
  std::vector<int> arc(v.edges.size(), -1);
  for (int e = 0; e < static_cast<int>(v.edges.size()); ++e) {
    const auto& [t, h] = v.edges[e];
    if (t == h) continue;  // a loop never carries net flow
    arc[e] = net.add_edge(t, h, v.force_zero[e] ? 0 : k);
  }
  for (int s : v.sources) net.add_edge(source, s, 1);
  for (int s : v.sinks) net.add_edge(s, sink, 1);
  if (net.max_flow(source, sink) != k) return std::nullopt;
  GenusLabeling labels;
  for (int e = 0; e < static_cast<int>(v.edges.size()); ++e) labels.edges.push_back(arc[e] < 0 ? 0 : net.flow_on(arc[e]));
  labels.circles.assign(v.circle_count, 0);
  return labels;
}

std::vector<std::string> check_labeling(const VGraph& v, const SymbolTable& table, const GenusLabeling& labels) {
  std::vector<std::string> bad;
  if (labels.edges.size() != v.edges.size() || labels.circles.size() != v.circles.size()) {
    bad.push_back("genus labeling does not cover V");
    return bad;
  }
  for (std::size_t e = 0; e < labels.edges.size(); ++e)
    if (labels.edges[e] < 0) bad.push_back(v.edge_label(static_cast<int>(e)) + ": negative genus");
  for (std::size_t c = 0; c < labels.circles.size(); ++c)
    if (labels.circles[c] < 0) bad.push_back(v.circle_label(static_cast<int>(c)) + ": negative genus");
  for (int j = 0; j < v.slots; ++j) {
    int in = 0, out = 0;
    std::vector<int> ins, outs;
    for (std::size_t e = 0; e < v.edges.size(); ++e) {
      if (v.edges[e].head == j) ins.push_back(labels.edges[e]);
      if (v.edges[e].tail == j) outs.push_back(labels.edges[e]);
    }
    for (int g : ins) in += g;
    for (int g : outs) out += g;
    const auto& sig = table.signature(v.symbols[j]);
    bool holds = true;
    switch (sig.genus_rule) {
      case GenusRule::Conserve:
      case GenusRule::SumAtMerge:
      case GenusRule::SumAtSplit: holds = in == out; break;
      case GenusRule::SourceOne: holds = out == in + 1; break;
      case GenusRule::SinkOne: holds = in == out + 1; break;
      case GenusRule::ForceZeroOut: holds = out == 0 && in == 0; break;
      case GenusRule::ForceZeroIn: holds = in == 0 && out == 0; break;
    }
    if (!holds)
      bad.push_back("slot " + std::to_string(j) + ": genus rule " + std::string(genus_rule_name(sig.genus_rule)) +
                    " of " + std::string(symbol_name(v.symbols[j])) + " fails");
  }
  return bad;
}

CrossCheck cross_check(const DirectedV& v, bool include_empty_path) {
  CrossCheck c;
  c.matching = allowable_matching(v, include_empty_path);
  c.labeling = genus_labeling(v);
  c.matching_found = c.matching.has_value();
  c.flow_feasible = c.labeling.has_value();
  return c;
}

}  // namespace reebext
