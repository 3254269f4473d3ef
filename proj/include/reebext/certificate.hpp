#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "reebext/assembly.hpp"
#include "reebext/search.hpp"

namespace reebext {

inline constexpr int kCertificateVersion = 1;

/// Everything needed to re-check an Extendable verdict offline.
struct Certificate {
  LabeledReebGraph graph;
  Collapse collapse;
  VGraph v;  // derived from the collapse, kept for emission
  GenusLabeling labels;
  Matching gamma;
  Trace trace;
};

Certificate make_certificate(const LabeledReebGraph& graph, const Solution& solution,
                             const SymbolTable& table = SymbolTable::standard());

std::string serialize_certificate(const Certificate& cert);

/// Throws ParseError (line numbers count from the top of the file).
Certificate parse_certificate(std::string_view text, const SymbolTable& table = SymbolTable::standard());

/// Re-runs every check on a certificate; empty when it holds up.
std::vector<std::string> reverify(const Certificate& cert, const SymbolTable& table = SymbolTable::standard(),
                                  const CollapseOptions& options = {});

Simulation simulate(const Certificate& cert);

}  // namespace reebext
