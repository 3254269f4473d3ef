#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "reebext/allowability.hpp"
#include "reebext/collapse.hpp"

namespace reebext {

/// One part attachment. `data` keeps key order for serialization.
struct AssemblyStep {
  int index = 0;
  int slot = 0;
  std::string part;    // MOD(M+), MOD(M-), MOD(N+), MOD(N-), MOD(S+), MOD(S-)
  std::string attach;  // phi1, phi2:mu, phi3:sigma, phi3:tau, phi4:xi, phi5:nu
  std::vector<int> carriers;  // K: components of the preceding level the part touches
  std::vector<std::pair<std::string, std::string>> data;

  const std::string* find(const std::string& key) const;
  bool operator==(const AssemblyStep&) const = default;
};

struct Trace {
  std::vector<AssemblyStep> steps;
  std::vector<CutPair> close;
  bool operator==(const Trace&) const = default;
};

std::string part_for(Symbol s);

/// Genus of every component id, read off the labels of the V edge or circle it lies on.
std::map<int, int> component_genus(const VGraph& v, const GenusLabeling& labels);

Trace build_trace(const LabeledReebGraph& graph, const Collapse& collapse, const VGraph& v,
                  const GenusLabeling& labels, const SymbolTable& table = SymbolTable::standard());

struct Surface {
  int genus = 0;
  std::vector<Strand> strands;
  bool operator==(const Surface&) const = default;
};

/// Level surface descriptors by component id.
using LevelState = std::map<int, Surface>;

int euler_characteristic(const LevelState& level);

class SimulationError : public std::runtime_error {
 public:
  SimulationError(int step, const std::string& msg);
  int step() const { return step_; }  // -1 for the closure

 private:
  int step_;
};

struct Simulation {
  std::vector<LevelState> levels;  // levels[0] initial, levels[i + 1] after step i
  std::vector<int> chi;            // χ of every level
  std::vector<int> chi_delta;      // per step
  LevelState final;
};

/// Replays the trace from the initial level. Throws SimulationError naming
/// the first step whose bookkeeping disagrees with the certificate.
Simulation simulate(const Trace& trace, const LabeledReebGraph& graph, const GapState& initial,
                    const std::map<int, int>& genus);

struct ManifoldReport {
  int component_count = 0;
  int chi_from_trace = 0;
  int chi_from_boundary = 0;  // χ(M) / 2
  bool chi_agrees = false;
  bool boundary_ok = false;
  std::map<std::string, int> parts;
};

ManifoldReport manifold_report(const Trace& trace, const Simulation& sim, const LabeledReebGraph& graph,
                               const VGraph& v);

}  // namespace reebext
