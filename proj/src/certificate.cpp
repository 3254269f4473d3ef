#include "reebext/certificate.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace reebext {

namespace {

std::string join_ids(const std::vector<int>& ids) {
  if (ids.empty()) return "-";
  std::string out;
  for (int id : ids) out += (out.empty() ? "" : ",") + component_label(id);
  return out;
}

std::string join_strands(const LabeledReebGraph& g, const std::vector<Strand>& strands) {
  if (strands.empty()) return "-";
  std::string out;
  for (Strand s : strands) out += (out.empty() ? "" : ",") + g.strand_label(s);
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(sep, pos);
    out.emplace_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

struct Line {
  int number;
  std::vector<std::string> words;
  std::map<std::string, std::string> kv;

  const std::string& get(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(number, "missing " + key + "=");
    return it->second;
  }
  int get_int(const std::string& key) const {
    try {
      return std::stoi(get(key));
    } catch (const std::invalid_argument&) {
      throw ParseError(number, key + " must be an integer");
    }
  }
};

Line tokenize(int number, const std::string& raw) {
  Line line{number, {}, {}};
  std::istringstream in(raw);
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq != std::string::npos && eq > 0) line.kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    else line.words.push_back(tok);
  }
  return line;
}

int parse_id(const Line& line, const std::string& s) {
  auto id = parse_component_label(s);
  if (!id) throw ParseError(line.number, "bad component id '" + s + "'");
  return *id;
}

std::vector<int> parse_ids(const Line& line, const std::string& s) {
  std::vector<int> out;
  if (s == "-") return out;
  for (const auto& part : split(s, ',')) out.push_back(parse_id(line, part));
  return out;
}

std::vector<Strand> parse_strands(const Line& line, const LabeledReebGraph& g, const std::string& s, int gap) {
  std::vector<Strand> out;
  if (s == "-") return out;
  for (const auto& part : split(s, ',')) {
    auto strand = g.parse_strand(part, gap);
    if (!strand) throw ParseError(line.number, "unknown strand '" + part + "' at gap " + std::to_string(gap));
    out.push_back(*strand);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const std::string& vertex_name(const LabeledReebGraph& g, int slot) { return g.vertices()[g.vertex_at_slot(slot)].id; }

}  // namespace

Certificate make_certificate(const LabeledReebGraph& graph, const Solution& solution, const SymbolTable& table) {
  Certificate cert{graph, solution.collapse, solution.v, solution.labels, solution.gamma, {}};
  cert.trace = build_trace(graph, solution.collapse, solution.v, solution.labels, table);
  return cert;
}

std::string serialize_certificate(const Certificate& cert) {
  const auto& g = cert.graph;
  std::ostringstream out;
  out << "reebext-certificate " << kCertificateVersion << "\n";
  out << "[instance]\n" << serialize_instance(g);
  out << "[collapse]\n";
  for (const auto& c : cert.collapse.initial)
    out << "start " << component_label(c.id) << " strands=" << join_strands(g, c.strands) << "\n";
  for (const auto& t : cert.collapse.transitions) {
    out << "transition " << t.slot << " symbol=" << symbol_name(t.symbol) << " in=" << join_ids(t.in)
        << " out=" << join_ids(t.out) << " drill=" << (t.drill ? component_label(*t.drill) : "-") << " split=";
    if (t.split)
      out << join_strands(g, t.split->first) << "/" << join_strands(g, t.split->second);
    else
      out << "-";
    out << "\n";
  }
  for (const auto& p : cert.collapse.cut_pairs)
    out << "pair " << component_label(p.final_id) << " = " << component_label(p.initial_id) << "\n";
  out << "[genus]\n";
  for (std::size_t e = 0; e < cert.v.edges.size(); ++e) {
    const auto& edge = cert.v.edges[e];
    out << "vedge " << cert.v.edge_label(static_cast<int>(e)) << " tail=" << edge.tail << " head=" << edge.head
        << " segments=" << join_ids(edge.segments) << " genus=" << cert.labels.edges[e] << "\n";
  }
  for (std::size_t c = 0; c < cert.v.circles.size(); ++c) {
    const auto& circle = cert.v.circles[c];
    out << "vcircle " << cert.v.circle_label(static_cast<int>(c)) << " segments=" << join_ids(circle.segments)
        << " degree=" << circle.degree << " genus=" << cert.labels.circles[c] << "\n";
  }
  out << "[gamma]\n";
  for (const auto& m : cert.gamma.pairs) {
    out << "match " << vertex_name(g, m.source) << " -> " << vertex_name(g, m.sink) << " via ";
    if (m.via.empty()) out << "-";
    for (std::size_t i = 0; i < m.via.size(); ++i) out << (i ? "," : "") << cert.v.edge_label(m.via[i]);
    out << "\n";
  }
  out << "[trace]\n";
  for (const auto& s : cert.trace.steps) {
    std::vector<std::string> data;
    for (const auto& [k, v] : s.data) data.push_back(k + ":" + v);
    std::string joined;
    for (const auto& d : data) joined += (joined.empty() ? "" : ",") + d;
    out << "step " << s.index << " slot=" << s.slot << " part=" << s.part << " attach=" << s.attach
        << " K=" << join_ids(s.carriers) << " data=" << (joined.empty() ? "-" : joined) << "\n";
  }
  out << "close pairs=";
  if (cert.trace.close.empty()) out << "-";
  for (std::size_t i = 0; i < cert.trace.close.size(); ++i)
    out << (i ? "," : "") << component_label(cert.trace.close[i].final_id) << "="
        << component_label(cert.trace.close[i].initial_id);
  out << "\n";
  return out.str();
}

Certificate parse_certificate(std::string_view text, const SymbolTable& table) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  std::string section;
  std::string instance_text;
  int instance_first_line = 0;
  std::vector<Line> collapse_lines, genus_lines, gamma_lines, trace_lines;
  bool header = false;
  while (std::getline(in, raw)) {
    ++number;
    if (!header) {
      if (raw != "reebext-certificate " + std::to_string(kCertificateVersion))
        throw ParseError(number, "expected header 'reebext-certificate " + std::to_string(kCertificateVersion) + "'");
      header = true;
      continue;
    }
    if (!raw.empty() && raw.front() == '[') {
      section = raw;
      if (section == "[instance]") instance_first_line = number;
      else if (section != "[collapse]" && section != "[genus]" && section != "[gamma]" && section != "[trace]")
        throw ParseError(number, "unknown section " + section);
      continue;
    }
    if (section == "[instance]") {
      instance_text += raw + "\n";
      continue;
    }
    Line line = tokenize(number, raw);
    if (line.words.empty() && line.kv.empty()) continue;
    if (section == "[collapse]") collapse_lines.push_back(std::move(line));
    else if (section == "[genus]") genus_lines.push_back(std::move(line));
    else if (section == "[gamma]") gamma_lines.push_back(std::move(line));
    else if (section == "[trace]") trace_lines.push_back(std::move(line));
    else throw ParseError(number, "content outside a section");
  }
  if (!header) throw ParseError(1, "empty certificate");

  Certificate cert;
  try {
    cert.graph = parse_instance(instance_text);
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    throw ParseError(instance_first_line + e.line(), msg.substr(msg.find(": ") + 2));
  }
  const auto& g = cert.graph;

  for (const auto& line : collapse_lines) {
    const std::string& head = line.words.at(0);
    if (head == "start") {
      if (line.words.size() != 2) throw ParseError(line.number, "expected 'start <id> strands=...'");
      cert.collapse.initial.push_back(
          {parse_id(line, line.words[1]), parse_strands(line, g, line.get("strands"), g.cut_gap())});
    } else if (head == "transition") {
      if (line.words.size() != 2) throw ParseError(line.number, "expected 'transition <slot> ...'");
      SlotTransition t;
      try {
        t.slot = std::stoi(line.words[1]);
      } catch (const std::exception&) {
        throw ParseError(line.number, "slot must be an integer");
      }
      auto sym = parse_symbol(line.get("symbol"));
      if (!sym) throw ParseError(line.number, "unknown symbol '" + line.get("symbol") + "'");
      t.symbol = *sym;
      t.in = parse_ids(line, line.get("in"));
      t.out = parse_ids(line, line.get("out"));
      if (line.get("drill") != "-") t.drill = parse_id(line, line.get("drill"));
      if (const auto& s = line.get("split"); s != "-") {
        auto halves = split(s, '/');
        if (halves.size() != 2) throw ParseError(line.number, "split must be <strands>/<strands>");
        t.split = SplitSpec{parse_strands(line, g, halves[0], t.slot), parse_strands(line, g, halves[1], t.slot)};
      }
      cert.collapse.transitions.push_back(std::move(t));
    } else if (head == "pair") {
      if (line.words.size() != 4 || line.words[2] != "=") throw ParseError(line.number, "expected 'pair kA = kB'");
      cert.collapse.cut_pairs.push_back({parse_id(line, line.words[1]), parse_id(line, line.words[3])});
    } else {
      throw ParseError(line.number, "unknown collapse line '" + head + "'");
    }
  }

  try {
    cert.v = to_vgraph(g, table, cert.collapse);
  } catch (const CollapseError& e) {
    throw ParseError(genus_lines.empty() ? number : genus_lines.front().number,
                     std::string("collapse does not close: ") + e.what());
  }

  cert.labels.edges.assign(cert.v.edges.size(), 0);
  cert.labels.circles.assign(cert.v.circles.size(), 0);
  std::size_t edges_seen = 0, circles_seen = 0;
  for (const auto& line : genus_lines) {
    const std::string& head = line.words.at(0);
    if ((head != "vedge" && head != "vcircle") || line.words.size() != 2)
      throw ParseError(line.number, "expected 'vedge <E> ...' or 'vcircle <O> ...'");
    const bool edge = head == "vedge";
    const std::size_t index = edge ? edges_seen++ : circles_seen++;
    const std::string want = edge ? cert.v.edge_label(static_cast<int>(index)) : cert.v.circle_label(static_cast<int>(index));
    if (line.words[1] != want) throw ParseError(line.number, "expected " + want);
    const auto segments = parse_ids(line, line.get("segments"));
    if (edge) {
      if (index >= cert.v.edges.size()) throw ParseError(line.number, "more V edges than the collapse has");
      const auto& e = cert.v.edges[index];
      if (line.get_int("tail") != e.tail || line.get_int("head") != e.head || segments != e.segments)
        throw ParseError(line.number, want + " does not match the collapse");
      cert.labels.edges[index] = line.get_int("genus");
    } else {
      if (index >= cert.v.circles.size()) throw ParseError(line.number, "more V circles than the collapse has");
      const auto& c = cert.v.circles[index];
      if (segments != c.segments || line.get_int("degree") != c.degree)
        throw ParseError(line.number, want + " does not match the collapse");
      cert.labels.circles[index] = line.get_int("genus");
    }
  }
  if (edges_seen != cert.v.edges.size() || circles_seen != cert.v.circles.size())
    throw ParseError(number, "genus section must list every V edge and circle");

  for (const auto& line : gamma_lines) {
    if (line.words.size() != 6 || line.words[0] != "match" || line.words[2] != "->" || line.words[4] != "via")
      throw ParseError(line.number, "expected 'match <G+> -> <G-> via <edges>'");
    const int a = g.find_vertex(line.words[1]), b = g.find_vertex(line.words[3]);
    if (a < 0 || b < 0) throw ParseError(line.number, "unknown vertex in match");
    MatchPair m{g.vertices()[a].slot, g.vertices()[b].slot, {}};
    if (line.words[5] != "-")
      for (const auto& e : split(line.words[5], ',')) {
        if (e.size() < 2 || e[0] != 'E') throw ParseError(line.number, "bad edge '" + e + "'");
        try {
          m.via.push_back(std::stoi(e.substr(1)));
        } catch (const std::exception&) {
          throw ParseError(line.number, "bad edge '" + e + "'");
        }
      }
    cert.gamma.pairs.push_back(std::move(m));
  }

  for (const auto& line : trace_lines) {
    const std::string& head = line.words.at(0);
    if (head == "step") {
      if (line.words.size() != 2) throw ParseError(line.number, "expected 'step <i> ...'");
      AssemblyStep s;
      try {
        s.index = std::stoi(line.words[1]);
      } catch (const std::exception&) {
        throw ParseError(line.number, "step index must be an integer");
      }
      s.slot = line.get_int("slot");
      s.part = line.get("part");
      s.attach = line.get("attach");
      s.carriers = parse_ids(line, line.get("K"));
      if (const auto& d = line.get("data"); d != "-")
        for (const auto& item : split(d, ',')) {
          auto colon = item.find(':');
          if (colon == std::string::npos) throw ParseError(line.number, "data items are key:value");
          s.data.emplace_back(item.substr(0, colon), item.substr(colon + 1));
        }
      cert.trace.steps.push_back(std::move(s));
    } else if (head == "close") {
      if (const auto& p = line.get("pairs"); p != "-")
        for (const auto& item : split(p, ',')) {
          auto eq = item.find('=');
          if (eq == std::string::npos) throw ParseError(line.number, "pairs are kA=kB");
          cert.trace.close.push_back({parse_id(line, item.substr(0, eq)), parse_id(line, item.substr(eq + 1))});
        }
    } else {
      throw ParseError(line.number, "unknown trace line '" + head + "'");
    }
  }
  return cert;
}

std::vector<std::string> reverify(const Certificate& cert, const SymbolTable& table, const CollapseOptions& options) {
  std::vector<std::string> bad;
  const auto& g = cert.graph;
  for (const auto& v : validate(g).violations) bad.push_back("instance: " + v);
  if (!bad.empty()) return bad;
  for (const auto& v : verify(g, table, cert.collapse, options).violations) bad.push_back("collapse: " + v);
  if (!bad.empty()) return bad;

  for (const auto& v : check_labeling(cert.v, table, cert.labels)) bad.push_back("genus: " + v);

  const DirectedV dv = directed_view(cert.v, table);
  std::vector<int> sources, sinks;
  for (const auto& m : cert.gamma.pairs) {
    sources.push_back(m.source);
    sinks.push_back(m.sink);
    int cur = m.source;
    for (int e : m.via) {
      if (e < 0 || e >= static_cast<int>(dv.edges.size()) || dv.edges[e].first != cur) {
        bad.push_back("gamma: path from slot " + std::to_string(m.source) + " is not sweep-directed");
        cur = -1;
        break;
      }
      cur = dv.edges[e].second;
    }
    if (cur != m.sink || (m.via.empty() && m.source != m.sink))
      bad.push_back("gamma: path from slot " + std::to_string(m.source) + " misses slot " + std::to_string(m.sink));
  }
  std::sort(sources.begin(), sources.end());
  std::sort(sinks.begin(), sinks.end());
  auto want_sources = dv.sources, want_sinks = dv.sinks;
  std::sort(want_sources.begin(), want_sources.end());
  std::sort(want_sinks.begin(), want_sinks.end());
  if (sources != want_sources || sinks != want_sinks) bad.push_back("gamma: not a bijection from G+ onto G-");

  const auto cc = cross_check(dv);
  if (!cc.agree()) bad.push_back("allowability: matching and genus flow disagree");

  if (cert.trace != build_trace(g, cert.collapse, cert.v, cert.labels, table))
    bad.push_back("trace: does not follow the collapse");
  try {
    const Simulation sim = simulate(cert);
    const auto report = manifold_report(cert.trace, sim, g, cert.v);
    if (!report.chi_agrees)
      bad.push_back("manifold: χ(N) from the trace is " + std::to_string(report.chi_from_trace) + ", χ(M)/2 is " +
                    std::to_string(report.chi_from_boundary));
    if (!report.boundary_ok) bad.push_back("manifold: boundary audit failed");
  } catch (const SimulationError& e) {
    bad.push_back(std::string("trace: ") + e.what());
  }
  return bad;
}

Simulation simulate(const Certificate& cert) {
  return simulate(cert.trace, cert.graph, cert.collapse.initial, component_genus(cert.v, cert.labels));
}

}  // namespace reebext
