#pragma once

#include <string>

#include <json.hpp>

#include "womc/belief.hpp"
#include "womc/prescription.hpp"
#include "womc/scenario.hpp"
#include "womc/solver.hpp"
#include "womc/topology.hpp"

namespace womc {

using Json = nlohmann::json;  // std::map objects: keys serialize sorted

/// Rounds to 12 significant digits so the dumped text is stable.
double round12(double v);
/// Pretty JSON with a trailing newline.
std::string dump_json(const Json& j);

Json label_json(const VarLabel& l);  // {"agent": 1-based, "time", "kind": "Y"|"U"}
Json labels_json(const InfoSet& set);

/// Memory, accessible, new-information and inaccessible sets of every agent at t.
Json infostruct_json(const DelayMatrix& d, int t);

Json solve_json(const SolveResult& r, bool timing);

/// {"owner", "parts": {target: {t: {cond key: {domain key: action}}}}}.
/// Empty realizations are keyed "-".
Json strategy_json(const Scenario& s, const FullStrategy& psi);

/// Sufficient states with positive probability, in canonical order.
Json belief_json(const Scenario& s, const BeliefState& pi);

/// Realization over `labels` from {"Y1@0": "value name", ...}.
/// Throws ParseError on unknown labels, missing labels or unknown values.
Realization realization_from_json(const Scenario& s, const InfoSet& labels, const Json& j);

/// History document for the belief command:
///   {"time": t, "accessible": {label: value},
///    "prescriptions": [ {target: {domain key: action}} for each tau < t ]}
/// Prescription entries not listed take the first feasible action.
struct BeliefHistory {
  Realization accessible;
  std::vector<CompletePrescription> thetas;
};
BeliefHistory parse_history(const Scenario& s, const DelayMatrix& d, int k, const Json& j);

/// One CSV row of the compare command.
struct CompareRow {
  std::string method;
  std::optional<double> value;  // empty when the method hit a cap
  std::uint64_t candidates = 0;
  double seconds = 0.0;
  std::string match_brute;  // "yes", "no" or "NA"
};
std::string compare_csv(const std::vector<CompareRow>& rows, bool timing);

std::string format12(double v);

}  // namespace womc
