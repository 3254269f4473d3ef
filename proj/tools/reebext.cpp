// Command-line front end: validate, decide, certify, oracle, census,
// simulate, render and selftest.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "reebext/assembly.hpp"
#include "reebext/census.hpp"
#include "reebext/certificate.hpp"
#include "reebext/dot.hpp"
#include "reebext/search.hpp"

using namespace reebext;

namespace {

constexpr int kExitUsage = 3;
constexpr int kExitError = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

bool is_certificate(const std::string& text) { return text.rfind("reebext-certificate", 0) == 0; }

int exit_code(VerdictKind k) {
  switch (k) {
    case VerdictKind::Extendable: return 0;
    case VerdictKind::NotExtendable: return 1;
    case VerdictKind::Inconclusive: return 2;
  }
  return 2;
}

struct Common {
  int max_closed_tokens = -1;
  std::int64_t max_states = SearchLimits{}.max_states;
  bool strict_circles = false;
  bool deterministic = false;
  int threads = 0;
  std::string table_path;

  void attach(CLI::App* app) {
    app->add_option("--max-closed-tokens", max_closed_tokens, "closed tokens allowed at the cut (-1: #Dies)");
    app->add_option("--max-states", max_states, "search budget in visited states");
    app->add_flag("--strict-circles", strict_circles, "circles may only map onto vertexless circles of V");
    app->add_flag("--deterministic", deterministic, "serial-equivalent search order and certificate");
    app->add_option("--threads", threads, "OpenMP threads (0: default)");
    app->add_option("--table", table_path, "symbol table override file");
  }

  SearchLimits limits() const {
    SearchLimits l;
    l.max_closed_tokens = max_closed_tokens;
    l.max_states = max_states;
    l.strict_circles = strict_circles;
    l.deterministic = deterministic;
    l.threads = threads;
    return l;
  }

  SymbolTable table() const {
    if (table_path.empty()) return SymbolTable::standard();
    SymbolTable t = SymbolTable::parse(read_file(table_path));
    auto report = consistency_check(t);
    for (const auto& v : report.violations) std::cerr << "table: " << v << "\n";
    return t;
  }
};

LabeledReebGraph load_instance(const std::string& path) { return parse_instance(read_file(path)); }

void print_stats(const Verdict& v) {
  std::cout << "states " << v.stats.states << "\n"
            << "closed collapses " << v.stats.closed_collapses << "\n"
            << "V graphs tested " << v.stats.vgraphs_tested << "\n";
  if (v.stats.chi_pruned) std::cout << "refuted by the Euler characteristic sum\n";
}

Verdict run_decide(const LabeledReebGraph& g, const Common& c, const SymbolTable& table) {
  return decide_parallel(g, c.limits(), table);
}

int cmd_validate(const std::string& path) {
  auto g = load_instance(path);
  auto report = validate(g);
  for (const auto& v : report.violations) std::cout << v << "\n";
  if (report.ok()) {
    auto inv = surface_invariants(g);
    std::cout << "ok: " << g.slots() << " slots, " << g.edges().size() << " edges, " << g.circles().size()
              << " circles, chi(M) = " << inv.chi << "\n";
  }
  return report.ok() ? 0 : 1;
}

int cmd_decide(const std::string& path, const Common& c, bool certify, const std::string& out) {
  auto g = load_instance(path);
  if (auto report = validate(g); !report.ok()) {
    for (const auto& v : report.violations) std::cerr << v << "\n";
    return kExitError;
  }
  auto table = c.table();
  Verdict v = run_decide(g, c, table);
  if (certify && v.solution) {
    write_output(out, serialize_certificate(make_certificate(g, *v.solution, table)));
    if (out.empty() || out == "-") return exit_code(v.kind);
  }
  std::cout << verdict_name(v.kind) << "\n";
  print_stats(v);
  return exit_code(v.kind);
}

int cmd_oracle(const std::string& path, const Common& c) {
  auto g = load_instance(path);
  if (auto report = validate(g); !report.ok()) {
    for (const auto& v : report.violations) std::cerr << v << "\n";
    return kExitError;
  }
  Verdict v = brute_force(g, c.limits());
  std::cout << verdict_name(v.kind) << "\n";
  return exit_code(v.kind);
}

int cmd_simulate(const std::string& path, const Common& c) {
  auto table = c.table();
  Certificate cert = parse_certificate(read_file(path), table);
  auto problems = reverify(cert, table, CollapseOptions{c.strict_circles});
  for (const auto& p : problems) std::cout << p << "\n";
  if (!problems.empty()) return 1;
  Simulation sim = simulate(cert);
  std::cout << "level chi " << sim.chi[0] << "\n";
  for (std::size_t i = 0; i < cert.trace.steps.size(); ++i) {
    const auto& s = cert.trace.steps[i];
    std::cout << "step " << s.index << " slot " << s.slot << " " << s.part << " delta " << sim.chi_delta[i]
              << " level chi " << sim.chi[i + 1] << "\n";
  }
  auto report = manifold_report(cert.trace, sim, cert.graph, cert.v);
  std::cout << "components " << report.component_count << "\n"
            << "chi(N) " << report.chi_from_trace << " (chi(M)/2 = " << report.chi_from_boundary << ")\n";
  for (const auto& [part, count] : report.parts) std::cout << part << " " << count << "\n";
  return report.chi_agrees && report.boundary_ok ? 0 : 1;
}

int cmd_render(const std::string& path, const std::string& what, const Common& c, const std::string& out) {
  const std::string text = read_file(path);
  if (is_certificate(text)) {
    Certificate cert = parse_certificate(text, c.table());
    if (what == "wf") write_output(out, emit_dot(cert.graph));
    else if (what == "v") write_output(out, emit_dot(cert.v, cert.labels));
    else write_output(out, emit_dot(cert.graph, cert.v, cert.labels));
    return 0;
  }
  auto g = parse_instance(text);
  if (what == "wf") {
    write_output(out, emit_dot(g));
    return 0;
  }
  auto table = c.table();
  Verdict v = run_decide(g, c, table);
  if (!v.solution) {
    std::cerr << "no collapse to render: " << verdict_name(v.kind) << "\n";
    return exit_code(v.kind);
  }
  if (what == "v") write_output(out, emit_dot(v.solution->v, v.solution->labels));
  else write_output(out, emit_dot(g, v.solution->v, v.solution->labels));
  return 0;
}

int cmd_census(CensusOptions options, bool serial, int threads) {
  auto start = std::chrono::steady_clock::now();
  CensusReport report = serial ? census(options) : census_parallel(options, threads);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << report.table();
  for (const auto& f : report.failures) std::cout << "failure:\n" << f << "\n";
  std::cout << "seconds " << secs << "\n" << (report.passed() ? "PASS" : "FAIL") << "\n";
  return report.passed() ? 0 : 1;
}

struct FixtureCase {
  const char* file;
  VerdictKind expected;
};

int cmd_selftest(const std::string& dir, int threads) {
  const FixtureCase cases[] = {
      {"sphere_pm.txt", VerdictKind::Extendable},    {"sphere_mp.txt", VerdictKind::Extendable},
      {"sphere_pp.txt", VerdictKind::NotExtendable}, {"sphere_mm.txt", VerdictKind::NotExtendable},
      {"example2.txt", VerdictKind::Extendable},     {"example3.txt", VerdictKind::Extendable},
      {"torus.txt", VerdictKind::Extendable},
  };
  bool ok = true;
  for (const auto& fc : cases) {
    auto g = load_instance(dir + "/" + fc.file);
    Verdict v = decide(g);
    bool pass = v.kind == fc.expected;
    if (pass && v.solution) {
      Certificate cert = make_certificate(g, *v.solution);
      pass = reverify(cert).empty() && serialize_certificate(parse_certificate(serialize_certificate(cert))) ==
                                           serialize_certificate(cert);
    }
    std::cout << (pass ? "pass " : "FAIL ") << fc.file << " " << verdict_name(v.kind) << "\n";
    ok = ok && pass;
  }
  CensusOptions options;
  options.max_vertices = 2;
  options.max_strands = 2;
  CensusReport report = census_parallel(options, threads);
  std::cout << (report.passed() ? "pass " : "FAIL ") << "census up to 2 vertices, " << report.instances
            << " instances\n";
  ok = ok && report.passed();
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reebext: decide whether a labeled Reeb graph bounds a non-singular extension"};
  app.require_subcommand(1);
  Common common;
  std::string input, out, what = "wf", format = "dot", fixtures = "data/fixtures";

  auto* validate_cmd = app.add_subcommand("validate", "check an instance file");
  validate_cmd->add_option("instance", input)->required();

  auto* decide_cmd = app.add_subcommand("decide", "decide extendability (exit 0/1/2)");
  decide_cmd->add_option("instance", input)->required();
  common.attach(decide_cmd);

  auto* certify_cmd = app.add_subcommand("certify", "decide and write the certificate");
  certify_cmd->add_option("instance", input)->required();
  certify_cmd->add_option("--out", out, "certificate path (default stdout)");
  common.attach(certify_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force verdict for small instances");
  oracle_cmd->add_option("instance", input)->required();
  common.attach(oracle_cmd);

  CensusOptions census_options;
  bool serial = false, skip_oracle = false, skip_linear = false, skip_mirror = false;
  auto* census_cmd = app.add_subcommand("census", "cross-check decide on every small instance");
  census_cmd->add_option("--max-vertices", census_options.max_vertices);
  census_cmd->add_option("--max-wraps", census_options.max_wraps);
  census_cmd->add_option("--max-strands", census_options.max_strands, "strands per gap");
  census_cmd->add_flag("--serial", serial, "serial reference run");
  census_cmd->add_flag("--no-oracle", skip_oracle);
  census_cmd->add_flag("--no-linear", skip_linear);
  census_cmd->add_flag("--no-mirror", skip_mirror);
  common.attach(census_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "re-verify a certificate and print its ledger");
  simulate_cmd->add_option("certificate", input)->required();
  simulate_cmd->add_flag("--strict-circles", common.strict_circles);
  simulate_cmd->add_option("--table", common.table_path);

  auto* render_cmd = app.add_subcommand("render", "DOT for an instance or certificate");
  render_cmd->add_option("input", input)->required();
  render_cmd->add_option("--what", what)->check(CLI::IsMember({"wf", "v", "collapse"}));
  render_cmd->add_option("--format", format)->check(CLI::IsMember({"dot"}));
  render_cmd->add_option("--out", out);
  common.attach(render_cmd);

  auto* selftest_cmd = app.add_subcommand("selftest", "fixture verdicts and a small census");
  selftest_cmd->add_option("--fixtures", fixtures);
  selftest_cmd->add_option("--threads", common.threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(input);
    if (*decide_cmd) return cmd_decide(input, common, false, "");
    if (*certify_cmd) return cmd_decide(input, common, true, out);
    if (*oracle_cmd) return cmd_oracle(input, common);
    if (*census_cmd) {
      census_options.oracle = !skip_oracle;
      census_options.linear = !skip_linear;
      census_options.mirror = !skip_mirror;
      census_options.limits = common.limits();
      return cmd_census(census_options, serial, common.threads);
    }
    if (*simulate_cmd) return cmd_simulate(input, common);
    if (*render_cmd) return cmd_render(input, what, common, out);
    if (*selftest_cmd) return cmd_selftest(fixtures, common.threads);
  } catch (const ParseError& e) {
    std::cerr << input << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
