#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reebext {

enum class Sign { Plus, Minus };

/// Morse type of a vertex read in sweep direction.
enum class VertexKind { Born, Dies, Split, Merge };

char sign_char(Sign s);
Sign flip(Sign s);
std::string_view kind_name(VertexKind k);
std::optional<VertexKind> parse_kind(std::string_view s);

struct Vertex {
  std::string id;
  int slot = 0;
  Sign sign = Sign::Plus;
  // Optional kind declared in the instance file; checked against the edges.
  std::optional<VertexKind> declared_kind;
};

/// Edge stored in sweep direction. `tail`/`head` index into the vertex list.
/// For a self-loop `wraps` is the total number of turns; otherwise it counts
/// full turns beyond the direct sweep arc from tail to head.
struct Edge {
  std::string id;
  int tail = 0;
  int head = 0;
  int wraps = 0;
};

struct Circle {
  std::string id;
  int degree = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& msg);
  int line() const { return line_; }

 private:
  int line_;
};

/// One crossing of a regular level by an edge or a circle. Sources are
/// numbered edges first, then circles; `k` counts crossings from the start
/// of the source (the tail for edges).
struct Strand {
  int source = 0;
  int k = 0;
  auto operator<=>(const Strand&) const = default;
};

/// Labeled Reeb graph over an oriented circle, in sweep coordinates: slot j
/// holds the j-th critical value met when travelling against the orientation,
/// gap g is the regular level right after slot g, and gap n-1 is the cut.
class LabeledReebGraph {
 public:
  LabeledReebGraph() = default;
  LabeledReebGraph(int slots, std::vector<Vertex> vertices, std::vector<Edge> edges,
                   std::vector<Circle> circles);

  int slots() const { return n_; }
  /// Number of gaps; an instance with no slots still has one regular level.
  int gap_count() const { return n_ > 0 ? n_ : 1; }
  int cut_gap() const { return gap_count() - 1; }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Circle>& circles() const { return circles_; }

  int in_degree(int v) const { return static_cast<int>(in_edges_[v].size()); }
  int out_degree(int v) const { return static_cast<int>(out_edges_[v].size()); }
  const std::vector<int>& in_edges(int v) const { return in_edges_[v]; }
  const std::vector<int>& out_edges(int v) const { return out_edges_[v]; }

  /// Kind derived from the in/out degrees; nullopt for non-Morse patterns.
  std::optional<VertexKind> kind(int v) const;
  /// Vertex index at a slot, or -1.
  int vertex_at_slot(int slot) const;
  int find_vertex(std::string_view id) const;

  int source_count() const { return static_cast<int>(edges_.size() + circles_.size()); }
  bool is_circle_source(int source) const { return source >= static_cast<int>(edges_.size()); }
  const std::string& source_id(int source) const;

  int total_crossings(int source) const;
  int gap_of(Strand s) const;
  /// Follows a strand across the slot after its gap; nullopt when the edge
  /// ends at that slot.
  std::optional<Strand> advance(Strand s) const;
  /// Occurrences at a gap, ordered by source then crossing.
  std::vector<Strand> strands_at(int gap) const;
  /// Last crossings of the edges entering the vertex at `slot`.
  std::vector<Strand> in_strands(int slot) const;
  /// First crossings of the edges leaving the vertex at `slot`.
  std::vector<Strand> out_strands(int slot) const;

  /// "<source>#<i>" where i is the index of this crossing among the source's
  /// crossings of the same gap.
  std::string strand_label(Strand s) const;
  std::optional<Strand> parse_strand(std::string_view label, int gap) const;

  bool operator==(const LabeledReebGraph& other) const;

 private:
  void index();

  int n_ = 0;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Circle> circles_;
  std::vector<std::vector<int>> in_edges_;
  std::vector<std::vector<int>> out_edges_;
  std::vector<int> slot_vertex_;
};

/// Number of times the edge crosses the gap.
int crossings(const LabeledReebGraph& graph, int edge, int gap);

LabeledReebGraph parse_instance(std::string_view text);
std::string serialize_instance(const LabeledReebGraph& graph);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const LabeledReebGraph& graph);

struct SurfaceComponent {
  std::vector<int> vertices;
  std::vector<int> edges;
  int circle = -1;  // circle index for circle components
  int chi = 0;
  int genus = 0;
};

struct SurfaceInvariants {
  std::vector<SurfaceComponent> components;
  int chi = 0;
};

SurfaceInvariants surface_invariants(const LabeledReebGraph& graph);

/// Shifts every slot by k (mod n).
LabeledReebGraph rotate(const LabeledReebGraph& graph, int k);
/// Reverses the circle: slot order reversed, edges reversed, signs flipped.
LabeledReebGraph mirror(const LabeledReebGraph& graph);

}  // namespace reebext
