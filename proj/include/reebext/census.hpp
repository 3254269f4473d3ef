#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reebext/search.hpp"

namespace reebext {

struct CensusOptions {
  int max_vertices = 4;
  int max_wraps = 1;
  int max_strands = 3;  // per gap, edges and circles together
  bool rotations = true;
  bool linear = true;
  bool mirror = true;
  bool oracle = true;
  SearchLimits limits;
};

/// Every valid labeled Reeb graph within the bounds, one per rotation class,
/// in a fixed order. Circle degrees are positive: the sign of a degree only
/// relabels strands and never changes a verdict.
std::vector<LabeledReebGraph> enumerate_instances(const CensusOptions& options);

struct InstanceResult {
  VerdictKind decided = VerdictKind::Inconclusive;
  VerdictKind oracle = VerdictKind::Inconclusive;
  bool oracle_ran = false;
  bool oracle_collapse_ok = true;
  std::int64_t vgraphs = 0;
  std::int64_t matching_flow_disagreements = 0;
  bool rotations_ok = true;
  bool sound = true;
  std::string soundness_note;
  int linear_compared = 0;
  int linear_disagreements = 0;
  bool linear_excluded = false;  // has an empty gap, but a closed token can cross every one
  bool mirror_mismatch = false;
};

struct CensusReport {
  int instances = 0;
  int extendable = 0;
  int not_extendable = 0;
  int inconclusive = 0;
  int oracle_disagreements = 0;
  int oracle_collapse_failures = 0;
  std::int64_t vgraphs = 0;
  std::int64_t matching_flow_disagreements = 0;
  int rotation_failures = 0;
  int soundness_failures = 0;
  int certificates_checked = 0;
  int linear_instances = 0;
  int linear_compared = 0;
  int linear_disagreements = 0;
  int linear_excluded = 0;
  int mirror_mismatches = 0;
  std::vector<std::string> failures;  // serialized offending instances with a reason

  bool passed() const;
  std::string table() const;
  bool operator==(const CensusReport&) const = default;
};

InstanceResult check_instance(const LabeledReebGraph& graph, const CensusOptions& options);

/// Serial reference.
CensusReport census(const CensusOptions& options);
/// OpenMP over instances; the report equals the serial one.
CensusReport census_parallel(const CensusOptions& options, int threads = 0);

CensusReport summarize(const std::vector<LabeledReebGraph>& instances, const std::vector<InstanceResult>& results);

}  // namespace reebext
