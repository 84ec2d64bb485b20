// Self-checks run by `sgq selftest` and after every convergence study.
#pragma once

#include "sgq/experiment.hpp"
#include "sgq/multi_index.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sgq {

struct AuditResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Random downward closed set of at most `size` indices in dimensions
/// 1..dims, grown one admissible neighbour at a time (step 2 when `even`).
std::vector<MultiIndex> random_downward_closed(std::mt19937_64& rng, std::size_t size, std::uint32_t dims,
                                               bool even);

/// The fixed library audit suite. Deterministic; runs in a few seconds.
std::vector<AuditResult> run_library_audits(std::uint64_t seed = 1);

/// Post-run checks for a convergence table: one row per budget, no failed
/// budget, finite errors. Non-monotone error is reported as a warning only.
std::vector<AuditResult> audit_table(const ResultTable& t, const ExperimentConfig& cfg);

bool all_passed(const std::vector<AuditResult>& results);

}  // namespace sgq
