#pragma once

#include <string>

#include "reebext/allowability.hpp"
#include "reebext/collapse.hpp"
#include "reebext/reeb_graph.hpp"

namespace reebext {

/// W_f with signed nodes; edges carry their wraps, circles are a node with a
/// self-loop carrying the degree.
std::string emit_dot(const LabeledReebGraph& graph);

/// V with one node per slot labeled by its symbol and edges labeled by genus.
std::string emit_dot(const VGraph& v, const GenusLabeling& labels);

/// W_f and V side by side, each vertex joined to its image by a dashed edge.
std::string emit_dot(const LabeledReebGraph& graph, const VGraph& v, const GenusLabeling& labels);

}  // namespace reebext
