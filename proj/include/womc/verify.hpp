#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "womc/report.hpp"
#include "womc/scenario.hpp"

namespace womc {

struct CheckResult {
  std::string name;
  std::string anchor;  // the property, stated as a formula
  std::uint64_t instances = 0;
  std::uint64_t skipped = 0;  // instances too large for the check's enumeration
  bool pass = true;
  double worst_deviation = 0.0;
  std::string counterexample;        // first failure, empty when passing
  std::optional<std::uint64_t> seed;  // seed reproducing the first failure
};

struct VerifyReport {
  std::string scenario;  // empty when no scenario file was given
  int random = 0;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool pass() const;
};

struct VerifyOptions {
  int random = 0;
  std::uint64_t seed = 0;
  /// Perturbs one reached transition entry in the model used to predict
  /// the next sufficient state; the determinism check must then fail.
  bool corrupt_transition = false;
  Limits limits;
};

/// Runs every invariant suite on `scenario` (may be null) and on
/// options.random seeded random instances.
VerifyReport run_verify(const LoadedScenario* scenario, const std::string& scenario_name,
                        const VerifyOptions& options);

/// Check names in report order, one per invariant.
std::vector<std::string> check_names();

Json verify_json(const VerifyReport& report);

}  // namespace womc
