#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reebext/reeb_graph.hpp"
#include "reebext/symbols.hpp"

namespace reebext {

/// A component of a regular level surface, identified by the strands it
/// bounds. No strands means a closed component (a closed token).
struct Component {
  int id = 0;
  std::vector<Strand> strands;  // sorted

  bool closed() const { return strands.empty(); }
  bool operator==(const Component&) const = default;
};

/// Partition of one gap's strands plus its closed tokens, ordered by id.
using GapState = std::vector<Component>;

std::string component_label(int id);
std::optional<int> parse_component_label(std::string_view s);

struct SplitSpec {
  std::vector<Strand> first;   // holds the first out-strand
  std::vector<Strand> second;  // holds the second out-strand
  bool operator==(const SplitSpec&) const = default;
};

struct SlotTransition {
  int slot = 0;
  Symbol symbol = Symbol::MPlus;
  std::vector<int> in;
  std::vector<int> out;
  std::optional<int> drill;
  std::optional<SplitSpec> split;
  bool operator==(const SlotTransition&) const = default;
};

struct CutPair {
  int final_id = 0;
  int initial_id = 0;
  bool operator==(const CutPair&) const = default;
};

/// A collapse as a sweep: the partition at the cut, one transition per slot
/// and the gluing of the final components back onto the initial ones.
struct Collapse {
  std::vector<Component> initial;
  std::vector<SlotTransition> transitions;
  std::vector<CutPair> cut_pairs;
  bool operator==(const Collapse&) const = default;
};

struct CollapseOptions {
  // Circles of W_f may only map onto vertexless circles of V.
  bool strict_circles = false;
};

enum class CollapseErrorCode { NoSymbol, MissingParticipant, Participation, Malformed };

class CollapseError : public std::runtime_error {
 public:
  CollapseError(CollapseErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  CollapseErrorCode code() const { return code_; }

 private:
  CollapseErrorCode code_;
};

/// Index of the component holding `s`, or -1.
int holder(const GapState& state, Strand s);

/// Rewrites the partition before `t.slot` into the partition after it.
/// Throws CollapseError when the transition does not fit the state.
GapState apply_slot(const LabeledReebGraph& graph, const SymbolTable& table, const GapState& state,
                    const SlotTransition& t, const CollapseOptions& options = {});

/// Monodromy of an instance without slots: every circle strand moves on.
GapState advance_around(const LabeledReebGraph& graph, const GapState& state);

struct Replay {
  GapState initial;
  std::vector<GapState> after;  // after[j]: partition at gap j once slot j is applied
  GapState final;
};

/// Replays the transitions from the initial partition. Throws CollapseError.
Replay replay(const LabeledReebGraph& graph, const SymbolTable& table, const Collapse& collapse,
              const CollapseOptions& options = {});

struct VEdge {
  int tail = 0;  // slot
  int head = 0;  // slot
  std::vector<int> segments;  // component ids in sweep order
  std::vector<int> gaps;
  std::vector<std::vector<Strand>> strand_groups;
};

struct VCircle {
  std::vector<int> segments;
  std::vector<int> gaps;
  std::vector<std::vector<Strand>> strand_groups;
  int degree = 0;  // turns around S^1
  bool strand_free() const;
};

/// The quotient graph V with h recorded as the gaps each edge spans.
struct VGraph {
  int slots = 0;
  std::vector<Symbol> symbols;  // per slot
  std::vector<VEdge> edges;
  std::vector<VCircle> circles;
  std::vector<int> g_plus;   // slots assigned G+
  std::vector<int> g_minus;  // slots assigned G-
  // component id -> index into edges (>= 0) or -(circle index + 1)
  std::map<int, int> segment_owner;

  std::string edge_label(int e) const { return "E" + std::to_string(e); }
  std::string circle_label(int c) const { return "O" + std::to_string(c); }
};

/// Builds V from a collapse whose replay succeeds. Throws CollapseError.
VGraph to_vgraph(const LabeledReebGraph& graph, const SymbolTable& table, const Collapse& collapse);

struct CollapseReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks conditions 1-4 of a collapse: transitions conform to the table and
/// compose around the circle, the cut gluing closes every strand, and h is
/// monotone along every V edge with the star counts the symbols require.
CollapseReport verify(const LabeledReebGraph& graph, const SymbolTable& table, const Collapse& collapse,
                      const CollapseOptions& options = {});

}  // namespace reebext
