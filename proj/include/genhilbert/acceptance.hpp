#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace genhilbert {

struct AcceptanceOptions {
  std::uint64_t seed = 42;
  /// Criterion ids to run; empty runs all.
  std::vector<int> only;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  /// One-line human summary of the measured quantities.
  std::string summary;
  /// Measured quantities; deterministic given the seed.
  nlohmann::json metrics;
  double seconds = 0.0;
  /// Wall-clock limit in seconds, 0 when the criterion has none.
  double time_limit = 0.0;
};

std::vector<int> criterion_ids();

CriterionResult run_criterion(int id, const AcceptanceOptions& options);

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  4  duality factors: ..." with the wall time appended.
std::string format_line(const CriterionResult& r);

/// Results without wall-clock data.
nlohmann::json results_json(const std::vector<CriterionResult>& results, std::uint64_t seed);

}  // namespace genhilbert
