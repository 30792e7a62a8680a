#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "womc/prescription.hpp"
#include "womc/scenario.hpp"
#include "womc/topology.hpp"

namespace womc {

enum class Method { Brute, CommonInfo, Structural };
std::string method_name(Method m);  // "brute", "common-info", "structural"

struct SolveResult {
  Method method = Method::Brute;
  int agent = -1;  // owner of the strategy; -1 for brute force
  double value = 0.0;
  std::optional<Policy> policy;
  std::optional<FullStrategy> strategy;
  std::uint64_t candidates = 0;
  double seconds = 0.0;
};

/// Exact expected total cost by enumeration of primitive assignments.
double evaluate_policy(const Scenario& s, const DelayMatrix& d, const Policy& g, const Limits& limits = {});
double evaluate_policy_serial(const Scenario& s, const DelayMatrix& d, const Policy& g, const Limits& limits = {});
/// Same expectation with every action generated from prescriptions of psi.
double evaluate_strategy(const Scenario& s, const DelayMatrix& d, const FullStrategy& psi, const Limits& limits = {});

/// Global minimum over deterministic memory-feedback policies.
SolveResult brute_force_optimal(const Scenario& s, const DelayMatrix& d, const Limits& limits = {});
/// Backward induction over reachable beliefs of the last agent.
SolveResult common_info_dp(const Scenario& s, const DelayMatrix& d, const Limits& limits = {});
/// Exhaustive search over strategies of agent k that depend on accessible
/// information only through the belief tuples of the beyond agents.
SolveResult structural_search(const Scenario& s, const DelayMatrix& d, int k, const Limits& limits = {});

struct DomainCell {
  int agent = 0;
  int time = 0;
  std::size_t own_labels = 0;    // |L^{[k,k]}_t|
  std::size_t last_labels = 0;   // |L^{[k,K]}_t|
  std::uint64_t own_realizations = 1;
  std::uint64_t last_realizations = 1;
  bool subset = true;
};
struct DomainReport {
  std::vector<DomainCell> cells;
  bool all_subset() const;
};
DomainReport domain_comparison(const Scenario& s, const DelayMatrix& d);

/// Open-loop reachable memory realizations of agent k at t (indices into
/// memory_labels), over every primitive assignment and action sequence.
std::vector<std::vector<std::vector<std::uint64_t>>> reachable_memories(const Scenario& s, const DelayMatrix& d,
                                                                        const Limits& limits = {});

}  // namespace womc
