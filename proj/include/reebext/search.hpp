#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reebext/allowability.hpp"
#include "reebext/collapse.hpp"
#include "reebext/reeb_graph.hpp"
#include "reebext/symbols.hpp"

namespace reebext {

struct SearchLimits {
  int max_closed_tokens = -1;  // -1: number of Dies vertices
  std::int64_t max_states = 5'000'000;
  bool strict_circles = false;
  bool deterministic = true;
  bool include_empty_path = true;
  int threads = 0;  // 0: OpenMP default
};

/// Token bound actually used for `graph` under `limits`.
int token_bound(const LabeledReebGraph& graph, const SearchLimits& limits);

enum class VerdictKind { Extendable, NotExtendable, Inconclusive };

std::string_view verdict_name(VerdictKind k);

struct SearchStats {
  std::int64_t states = 0;
  std::int64_t closed_collapses = 0;
  std::int64_t vgraphs_tested = 0;
  std::int64_t cross_check_disagreements = 0;
  std::int64_t token_bound_prunes = 0;
  bool chi_pruned = false;  // refuted by the Euler characteristic sum alone
};

struct Solution {
  Collapse collapse;
  VGraph v;
  GenusLabeling labels;
  Matching gamma;
};

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::optional<Solution> solution;
  SearchStats stats;
};

/// Depth-first search over collapses in sweep order; the first allowable one
/// found is returned as the certificate.
Verdict decide(const LabeledReebGraph& graph, const SearchLimits& limits = {},
               const SymbolTable& table = SymbolTable::standard());

/// Same contract as decide, with the top-level branches (cut partition and
/// token count) explored by OpenMP threads. Verdict and certificate match
/// the serial run.
Verdict decide_parallel(const LabeledReebGraph& graph, const SearchLimits& limits = {},
                        const SymbolTable& table = SymbolTable::standard());

/// Linear sweep: `gap` must carry no strands; the circle is cut there and
/// both boundary levels are forced empty.
Verdict decide_linear(const LabeledReebGraph& graph, int gap, const SearchLimits& limits = {},
                      const SymbolTable& table = SymbolTable::standard());

/// Whether some closed collapse (allowable or not) keeps a closed token
/// alive across `gap`. nullopt when the budget runs out.
std::optional<bool> token_crosses(const LabeledReebGraph& graph, int gap, const SearchLimits& limits = {},
                                  const SymbolTable& table = SymbolTable::standard());

/// Sum of chiDelta over the vertices, when every compatible symbol of each
/// vertex agrees on it.
std::optional<int> chi_delta_sum(const LabeledReebGraph& graph, const SymbolTable& table);

/// Exhaustive oracle sharing no search code with decide. Throws
/// std::invalid_argument outside the size guard.
Verdict brute_force(const LabeledReebGraph& graph, const SearchLimits& limits = {});

inline constexpr int kOracleMaxVertices = 6;
inline constexpr int kOracleMaxStrands = 5;

}  // namespace reebext
