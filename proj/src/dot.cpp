#include "reebext/dot.hpp"

#include <sstream>

namespace reebext {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void wf_body(std::ostringstream& out, const LabeledReebGraph& graph, const std::string& prefix, const std::string& indent) {
  for (std::size_t i = 0; i < graph.vertices().size(); ++i) {
    const auto& v = graph.vertices()[i];
    out << indent << prefix << "v" << i << " [label=" << quote(std::string(1, sign_char(v.sign)))
        << ", xlabel=" << quote(v.id + "@" + std::to_string(v.slot)) << "];\n";
  }
  for (std::size_t i = 0; i < graph.circles().size(); ++i) {
    const auto& c = graph.circles()[i];
    out << indent << prefix << "c" << i << " [label=" << quote(c.id) << ", shape=circle];\n";
  }
  for (const auto& e : graph.edges())
    out << indent << prefix << "v" << e.tail << " -> " << prefix << "v" << e.head
        << " [label=" << quote(e.id + " wraps=" + std::to_string(e.wraps)) << "];\n";
  for (std::size_t i = 0; i < graph.circles().size(); ++i)
    out << indent << prefix << "c" << i << " -> " << prefix << "c" << i
        << " [label=" << quote("degree=" + std::to_string(graph.circles()[i].degree)) << "];\n";
}

void v_body(std::ostringstream& out, const VGraph& v, const GenusLabeling& labels, const std::string& prefix,
            const std::string& indent) {
  for (int s = 0; s < v.slots; ++s)
    out << indent << prefix << "s" << s << " [label=" << quote(std::string(symbol_name(v.symbols[s])))
        << ", xlabel=" << quote("slot " + std::to_string(s)) << "];\n";
  for (std::size_t c = 0; c < v.circles.size(); ++c)
    out << indent << prefix << "o" << c << " [label=" << quote(v.circle_label(static_cast<int>(c)))
        << ", shape=circle];\n";
  for (std::size_t e = 0; e < v.edges.size(); ++e) {
    const int g = e < labels.edges.size() ? labels.edges[e] : 0;
    out << indent << prefix << "s" << v.edges[e].tail << " -> " << prefix << "s" << v.edges[e].head
        << " [label=" << quote("g=" + std::to_string(g)) << ", xlabel=" << quote(v.edge_label(static_cast<int>(e)))
        << "];\n";
  }
  for (std::size_t c = 0; c < v.circles.size(); ++c) {
    const int g = c < labels.circles.size() ? labels.circles[c] : 0;
    out << indent << prefix << "o" << c << " -> " << prefix << "o" << c << " [label="
        << quote("degree=" + std::to_string(v.circles[c].degree) + " g=" + std::to_string(g)) << "];\n";
  }
}

}  // namespace

std::string emit_dot(const LabeledReebGraph& graph) {
  std::ostringstream out;
  out << "digraph wf {\n  rankdir=LR;\n";
  wf_body(out, graph, "", "  ");
  out << "}\n";
  return out.str();
}

std::string emit_dot(const VGraph& v, const GenusLabeling& labels) {
  std::ostringstream out;
  out << "digraph v {\n  rankdir=LR;\n";
  v_body(out, v, labels, "", "  ");
  out << "}\n";
  return out.str();
}

std::string emit_dot(const LabeledReebGraph& graph, const VGraph& v, const GenusLabeling& labels) {
  std::ostringstream out;
  out << "digraph collapse {\n  rankdir=LR;\n";
  out << "  subgraph cluster_wf {\n    label=\"W_f\";\n";
  wf_body(out, graph, "w_", "    ");
  out << "  }\n  subgraph cluster_v {\n    label=\"V\";\n";
  v_body(out, v, labels, "v_", "    ");
  out << "  }\n";
  for (std::size_t i = 0; i < graph.vertices().size(); ++i)
    out << "  w_v" << i << " -> v_s" << graph.vertices()[i].slot << " [style=dashed, constraint=false];\n";
  out << "}\n";
  return out.str();
}

}  // namespace reebext
