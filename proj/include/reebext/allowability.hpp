#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reebext/collapse.hpp"
#include "reebext/symbols.hpp"

namespace reebext {

/// V with every edge directed in sweep direction. Vertices are slots.
struct DirectedV {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;  // (tail, head), indexed like VGraph::edges
  std::vector<bool> force_zero;            // genus pinned to 0 by an adjacent symbol
  std::vector<int> sources;                // G+ vertices
  std::vector<int> sinks;                  // G- vertices
  int circle_count = 0;                    // vertexless circles, carried along for labeling
};

DirectedV directed_view(const VGraph& v, const SymbolTable& table);

/// x ⪯ y iff a sweep-directed path runs from y to x.
class ReachRelation {
 public:
  ReachRelation(const DirectedV& v, bool include_empty_path);
  /// A sweep-directed path with at least one edge leads from `from` to `to`.
  bool reaches(int from, int to) const { return reach_[from][to]; }
  bool precedes(int x, int y) const { return (empty_path_ && x == y) || reach_[y][x]; }
  int size() const { return static_cast<int>(reach_.size()); }

 private:
  std::vector<std::vector<bool>> reach_;
  bool empty_path_;
};

ReachRelation reach(const DirectedV& v, bool include_empty_path = true);

struct MatchPair {
  int source = 0;  // G+ vertex
  int sink = 0;    // G- vertex
  std::vector<int> via;  // edge indices of a sweep path from source to sink
  bool operator==(const MatchPair&) const = default;
};

struct Matching {
  std::vector<MatchPair> pairs;  // ordered by source
  bool operator==(const Matching&) const = default;
};

/// Bijection G+ -> G- along sweep-directed paths (augmenting paths,
/// deterministic in vertex order), or nullopt.
std::optional<Matching> allowable_matching(const DirectedV& v, bool include_empty_path = true);

struct GenusLabeling {
  std::vector<int> edges;    // per V edge
  std::vector<int> circles;  // per vertexless circle
  bool operator==(const GenusLabeling&) const = default;
};

/// Integral genus labeling as a feasibility flow: one unit leaves every G+,
/// one unit enters every G-, conservation elsewhere, nothing on pinned edges.
std::optional<GenusLabeling> genus_labeling(const DirectedV& v);

/// Violations of the per-vertex genus rules (empty when the labeling fits).
std::vector<std::string> check_labeling(const VGraph& v, const SymbolTable& table, const GenusLabeling& labels);

struct CrossCheck {
  bool matching_found = false;
  bool flow_feasible = false;
  bool agree() const { return matching_found == flow_feasible; }
  std::optional<Matching> matching;
  std::optional<GenusLabeling> labeling;
};

CrossCheck cross_check(const DirectedV& v, bool include_empty_path = true);

}  // namespace reebext
