#include "reebext/reeb_graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace reebext {

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

bool valid_id(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

int parse_int(std::string_view s, int line, std::string_view what) {
  if (s.empty()) throw ParseError(line, "missing value for " + std::string(what));
  std::size_t pos = 0;
  int value = 0;
  try {
    value = std::stoi(std::string(s), &pos);
  } catch (const std::exception&) {
    throw ParseError(line, "expected integer for " + std::string(what) + ", got '" + std::string(s) + "'");
  }
  if (pos != s.size())
    throw ParseError(line, "expected integer for " + std::string(what) + ", got '" + std::string(s) + "'");
  return value;
}

// Parses "key=value"; throws if the key differs.
std::string_view keyed(std::string_view tok, std::string_view key, int line) {
  if (tok.size() <= key.size() || tok.substr(0, key.size()) != key || tok[key.size()] != '=')
    throw ParseError(line, "expected " + std::string(key) + "=..., got '" + std::string(tok) + "'");
  return tok.substr(key.size() + 1);
}

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) { return parent_[x] == x ? x : parent_[x] = find(parent_[x]); }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

}  // namespace

ParseError::ParseError(int line, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

char sign_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

Sign flip(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }

std::string_view kind_name(VertexKind k) {
  switch (k) {
    case VertexKind::Born: return "Born";
    case VertexKind::Dies: return "Dies";
    case VertexKind::Split: return "Split";
    case VertexKind::Merge: return "Merge";
  }
  return "?";
}

std::optional<VertexKind> parse_kind(std::string_view s) {
  for (auto k : {VertexKind::Born, VertexKind::Dies, VertexKind::Split, VertexKind::Merge})
    if (kind_name(k) == s) return k;
  return std::nullopt;
}

LabeledReebGraph::LabeledReebGraph(int slots, std::vector<Vertex> vertices, std::vector<Edge> edges,
                                   std::vector<Circle> circles)
    : n_(slots), vertices_(std::move(vertices)), edges_(std::move(edges)), circles_(std::move(circles)) {
  index();
}

void LabeledReebGraph::index() {
  in_edges_.assign(vertices_.size(), {});
  out_edges_.assign(vertices_.size(), {});
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    const auto& edge = edges_[e];
    if (edge.tail >= 0 && edge.tail < static_cast<int>(vertices_.size())) out_edges_[edge.tail].push_back(e);
    if (edge.head >= 0 && edge.head < static_cast<int>(vertices_.size())) in_edges_[edge.head].push_back(e);
  }
  slot_vertex_.assign(std::max(n_, 0), -1);
  for (int v = 0; v < static_cast<int>(vertices_.size()); ++v) {
    int s = vertices_[v].slot;
    if (s >= 0 && s < n_ && slot_vertex_[s] < 0) slot_vertex_[s] = v;
  }
}

std::optional<VertexKind> LabeledReebGraph::kind(int v) const {
  int in = in_degree(v), out = out_degree(v);
  if (in == 0 && out == 1) return VertexKind::Born;
  if (in == 1 && out == 0) return VertexKind::Dies;
  if (in == 1 && out == 2) return VertexKind::Split;
  if (in == 2 && out == 1) return VertexKind::Merge;
  return std::nullopt;
}

int LabeledReebGraph::vertex_at_slot(int slot) const {
  if (slot < 0 || slot >= n_) return -1;
  return slot_vertex_[slot];
}

int LabeledReebGraph::find_vertex(std::string_view id) const {
  for (int v = 0; v < static_cast<int>(vertices_.size()); ++v)
    if (vertices_[v].id == id) return v;
  return -1;
}

const std::string& LabeledReebGraph::source_id(int source) const {
  if (is_circle_source(source)) return circles_[source - edges_.size()].id;
  return edges_[source].id;
}

int LabeledReebGraph::total_crossings(int source) const {
  if (is_circle_source(source)) return std::abs(circles_[source - edges_.size()].degree) * gap_count();
  if (n_ <= 0) return 0;
  const auto& e = edges_[source];
  if (e.tail == e.head) return e.wraps * n_;
  return e.wraps * n_ + mod(vertices_[e.head].slot - vertices_[e.tail].slot, n_);
}

int LabeledReebGraph::gap_of(Strand s) const {
  if (is_circle_source(s.source)) return s.k % gap_count();
  return mod(vertices_[edges_[s.source].tail].slot + s.k, n_);
}

std::optional<Strand> LabeledReebGraph::advance(Strand s) const {
  int total = total_crossings(s.source);
  if (is_circle_source(s.source)) return Strand{s.source, (s.k + 1) % total};
  if (s.k + 1 < total) return Strand{s.source, s.k + 1};
  return std::nullopt;
}

std::vector<Strand> LabeledReebGraph::strands_at(int gap) const {
  std::vector<Strand> out;
  const int g = gap_count();
  for (int src = 0; src < source_count(); ++src) {
    int total = total_crossings(src);
    int first = is_circle_source(src) ? gap : mod(gap - vertices_[edges_[src].tail].slot, n_);
    for (int k = first; k < total; k += g) out.push_back({src, k});
  }
  return out;
}

std::vector<Strand> LabeledReebGraph::in_strands(int slot) const {
  std::vector<Strand> out;
  int v = vertex_at_slot(slot);
  if (v < 0) return out;
  for (int e : in_edges_[v]) out.push_back({e, total_crossings(e) - 1});
  return out;
}

std::vector<Strand> LabeledReebGraph::out_strands(int slot) const {
  std::vector<Strand> out;
  int v = vertex_at_slot(slot);
  if (v < 0) return out;
  for (int e : out_edges_[v]) out.push_back({e, 0});
  return out;
}

std::string LabeledReebGraph::strand_label(Strand s) const {
  return source_id(s.source) + "#" + std::to_string(s.k / gap_count());
}

std::optional<Strand> LabeledReebGraph::parse_strand(std::string_view label, int gap) const {
  auto hash = label.find('#');
  if (hash == std::string_view::npos) return std::nullopt;
  auto id = label.substr(0, hash);
  auto idx = label.substr(hash + 1);
  if (idx.empty() || !std::all_of(idx.begin(), idx.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  int m = std::stoi(std::string(idx));
  for (int src = 0; src < source_count(); ++src) {
    if (source_id(src) != id) continue;
    int first = is_circle_source(src) ? gap : mod(gap - vertices_[edges_[src].tail].slot, n_);
    int k = first + m * gap_count();
    if (k >= total_crossings(src)) return std::nullopt;
    return Strand{src, k};
  }
  return std::nullopt;
}

bool LabeledReebGraph::operator==(const LabeledReebGraph& o) const {
  if (n_ != o.n_ || vertices_.size() != o.vertices_.size() || edges_.size() != o.edges_.size() ||
      circles_.size() != o.circles_.size())
    return false;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const auto &a = vertices_[i], &b = o.vertices_[i];
    if (a.id != b.id || a.slot != b.slot || a.sign != b.sign || a.declared_kind != b.declared_kind) return false;
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto &a = edges_[i], &b = o.edges_[i];
    if (a.id != b.id || a.tail != b.tail || a.head != b.head || a.wraps != b.wraps) return false;
  }
  for (std::size_t i = 0; i < circles_.size(); ++i)
    if (circles_[i].id != o.circles_[i].id || circles_[i].degree != o.circles_[i].degree) return false;
  return true;
}

int crossings(const LabeledReebGraph& graph, int edge, int gap) {
  const int n = graph.slots();
  const auto& e = graph.edges()[edge];
  if (e.tail == e.head) return e.wraps;
  int tail = graph.vertices()[e.tail].slot;
  int head = graph.vertices()[e.head].slot;
  bool inside = mod(gap - tail, n) < mod(head - tail, n);
  return e.wraps + (inside ? 1 : 0);
}

LabeledReebGraph parse_instance(std::string_view text) {
  int n = -1;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Circle> circles;
  std::map<std::string, int, std::less<>> vertex_index;
  std::set<std::string, std::less<>> source_ids;
  std::map<int, int> slot_line;
  struct PendingEdge {
    Edge edge;
    std::string tail, head;
    int line;
  };
  std::vector<PendingEdge> pending;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto tok = split_ws(raw);
    if (tok.empty()) continue;
    const auto& head = tok[0];
    if (head == "slots") {
      if (n >= 0) throw ParseError(line, "duplicate 'slots' line");
      if (tok.size() != 2) throw ParseError(line, "expected 'slots <n>'");
      n = parse_int(tok[1], line, "slots");
      if (n < 0) throw ParseError(line, "slot count must be >= 0");
      continue;
    }
    if (n < 0) throw ParseError(line, "'slots <n>' must come first");
    if (head == "vertex") {
      if (tok.size() < 4 || tok.size() > 5) throw ParseError(line, "expected 'vertex <id> slot=<j> sign=<+|->'");
      Vertex v;
      v.id = tok[1];
      if (!valid_id(v.id)) throw ParseError(line, "invalid id '" + v.id + "'");
      if (vertex_index.count(v.id)) throw ParseError(line, "duplicate vertex id '" + v.id + "'");
      v.slot = parse_int(keyed(tok[2], "slot", line), line, "slot");
      auto s = keyed(tok[3], "sign", line);
      if (s == "+") v.sign = Sign::Plus;
      else if (s == "-") v.sign = Sign::Minus;
      else throw ParseError(line, "sign must be + or -");
      if (tok.size() == 5) {
        auto k = parse_kind(keyed(tok[4], "kind", line));
        if (!k) throw ParseError(line, "unknown kind '" + tok[4] + "'");
        v.declared_kind = k;
      }
      if (auto it = slot_line.find(v.slot); it != slot_line.end())
        throw ParseError(line, "duplicate slot " + std::to_string(v.slot) + " (first used on line " +
                                   std::to_string(it->second) + ")");
      slot_line[v.slot] = line;
      vertex_index[v.id] = static_cast<int>(vertices.size());
      vertices.push_back(std::move(v));
    } else if (head == "edge") {
      if (tok.size() != 6 || tok[3] != "->") throw ParseError(line, "expected 'edge <id> <tail> -> <head> wraps=<w>'");
      PendingEdge p;
      p.edge.id = tok[1];
      if (!valid_id(p.edge.id)) throw ParseError(line, "invalid id '" + p.edge.id + "'");
      if (!source_ids.insert(p.edge.id).second) throw ParseError(line, "duplicate edge/circle id '" + p.edge.id + "'");
      p.tail = tok[2];
      p.head = tok[4];
      p.edge.wraps = parse_int(keyed(tok[5], "wraps", line), line, "wraps");
      if (p.edge.wraps < 0) throw ParseError(line, "wraps must be >= 0");
      p.line = line;
      pending.push_back(std::move(p));
    } else if (head == "circle") {
      if (tok.size() != 3) throw ParseError(line, "expected 'circle <id> degree=<d>'");
      Circle c;
      c.id = tok[1];
      if (!valid_id(c.id)) throw ParseError(line, "invalid id '" + c.id + "'");
      if (!source_ids.insert(c.id).second) throw ParseError(line, "duplicate edge/circle id '" + c.id + "'");
      c.degree = parse_int(keyed(tok[2], "degree", line), line, "degree");
      if (c.degree == 0) throw ParseError(line, "circle degree must be nonzero");
      circles.push_back(std::move(c));
    } else {
      throw ParseError(line, "unknown directive '" + head + "'");
    }
  }
  if (n < 0) throw ParseError(line, "missing 'slots <n>' line");
  for (auto& p : pending) {
    auto t = vertex_index.find(p.tail);
    if (t == vertex_index.end()) throw ParseError(p.line, "unknown vertex '" + p.tail + "'");
    auto h = vertex_index.find(p.head);
    if (h == vertex_index.end()) throw ParseError(p.line, "unknown vertex '" + p.head + "'");
    p.edge.tail = t->second;
    p.edge.head = h->second;
    edges.push_back(std::move(p.edge));
  }
  return LabeledReebGraph(n, std::move(vertices), std::move(edges), std::move(circles));
}

std::string serialize_instance(const LabeledReebGraph& graph) {
  std::ostringstream out;
  out << "slots " << graph.slots() << "\n";
  for (const auto& v : graph.vertices()) {
    out << "vertex " << v.id << " slot=" << v.slot << " sign=" << sign_char(v.sign);
    if (v.declared_kind) out << " kind=" << kind_name(*v.declared_kind);
    out << "\n";
  }
  for (const auto& e : graph.edges())
    out << "edge " << e.id << " " << graph.vertices()[e.tail].id << " -> " << graph.vertices()[e.head].id
        << " wraps=" << e.wraps << "\n";
  for (const auto& c : graph.circles()) out << "circle " << c.id << " degree=" << c.degree << "\n";
  return out.str();
}

ValidationReport validate(const LabeledReebGraph& graph) {
  ValidationReport report;
  auto& bad = report.violations;
  const int n = graph.slots();
  if (n < 0) bad.push_back("slot count must be >= 0");
  std::vector<int> occupancy(std::max(n, 0), 0);
  for (const auto& v : graph.vertices()) {
    if (v.slot < 0 || v.slot >= n) {
      bad.push_back("vertex " + v.id + ": slot out of range");
      continue;
    }
    if (++occupancy[v.slot] == 2) bad.push_back("slot " + std::to_string(v.slot) + ": duplicate slot");
  }
  for (int s = 0; s < n; ++s)
    if (occupancy[s] == 0) bad.push_back("slot " + std::to_string(s) + ": no vertex");

  int deg1 = 0, deg3 = 0;
  for (int v = 0; v < static_cast<int>(graph.vertices().size()); ++v) {
    const auto& vert = graph.vertices()[v];
    int degree = graph.in_degree(v) + graph.out_degree(v);
    if (degree != 1 && degree != 3) {
      bad.push_back("vertex " + vert.id + ": vertex degree must be 1 or 3");
      continue;
    }
    (degree == 1 ? deg1 : deg3)++;
    auto k = graph.kind(v);
    if (!k) {
      bad.push_back("vertex " + vert.id + ": saddle must have 1 in / 2 out or 2 in / 1 out");
      continue;
    }
    if (vert.declared_kind && *vert.declared_kind != *k)
      bad.push_back("vertex " + vert.id + ": kind/direction mismatch (declared " +
                    std::string(kind_name(*vert.declared_kind)) + ", edges give " + std::string(kind_name(*k)) + ")");
  }
  for (const auto& e : graph.edges()) {
    if (e.wraps < 0) bad.push_back("edge " + e.id + ": wraps must be >= 0");
    if (e.tail == e.head && e.wraps < 1) bad.push_back("edge " + e.id + ": self-loop requires wraps >= 1");
  }
  for (const auto& c : graph.circles())
    if (c.degree == 0) bad.push_back("circle " + c.id + ": degree must be nonzero");
  if ((deg1 - deg3) % 2 != 0) bad.push_back("Euler characteristic must be even");
  return report;
}

SurfaceInvariants surface_invariants(const LabeledReebGraph& graph) {
  const int nv = static_cast<int>(graph.vertices().size());
  UnionFind uf(nv);
  for (const auto& e : graph.edges()) uf.unite(e.tail, e.head);
  std::map<int, int> root_to_comp;
  SurfaceInvariants inv;
  for (int v = 0; v < nv; ++v) {
    int r = uf.find(v);
    auto [it, fresh] = root_to_comp.try_emplace(r, static_cast<int>(inv.components.size()));
    if (fresh) inv.components.emplace_back();
    auto& comp = inv.components[it->second];
    comp.vertices.push_back(v);
    int degree = graph.in_degree(v) + graph.out_degree(v);
    comp.chi += degree == 1 ? 1 : (degree == 3 ? -1 : 0);
  }
  for (int e = 0; e < static_cast<int>(graph.edges().size()); ++e)
    inv.components[root_to_comp[uf.find(graph.edges()[e].tail)]].edges.push_back(e);
  for (int c = 0; c < static_cast<int>(graph.circles().size()); ++c) {
    SurfaceComponent comp;
    comp.circle = c;
    inv.components.push_back(comp);
  }
  for (auto& comp : inv.components) {
    comp.genus = (2 - comp.chi) / 2;
    inv.chi += comp.chi;
  }
  return inv;
}

LabeledReebGraph rotate(const LabeledReebGraph& graph, int k) {
  const int n = graph.slots();
  if (n == 0) return graph;
  auto vertices = graph.vertices();
  for (auto& v : vertices) v.slot = mod(v.slot + k, n);
  return LabeledReebGraph(n, std::move(vertices), graph.edges(), graph.circles());
}

LabeledReebGraph mirror(const LabeledReebGraph& graph) {
  const int n = graph.slots();
  auto vertices = graph.vertices();
  for (auto& v : vertices) {
    v.slot = n - 1 - v.slot;
    v.sign = flip(v.sign);
    if (v.declared_kind) {
      switch (*v.declared_kind) {
        case VertexKind::Born: v.declared_kind = VertexKind::Dies; break;
        case VertexKind::Dies: v.declared_kind = VertexKind::Born; break;
        case VertexKind::Split: v.declared_kind = VertexKind::Merge; break;
        case VertexKind::Merge: v.declared_kind = VertexKind::Split; break;
      }
    }
  }
  auto edges = graph.edges();
  for (auto& e : edges) std::swap(e.tail, e.head);
  auto circles = graph.circles();
  for (auto& c : circles) c.degree = -c.degree;
  return LabeledReebGraph(n, std::move(vertices), std::move(edges), std::move(circles));
}

}  // namespace reebext
