#pragma once

#include <vector>

#include "womc/labels.hpp"
#include "womc/scenario.hpp"
#include "womc/topology.hpp"

namespace womc {

/// Domain of agent k's prescription for target j at t: L^{[j,k]} when
/// j < k, L^{[j,j]} otherwise.
InfoSet prescription_domain(const DelayMatrix& d, int k, int j, int t);
/// Information the prescription is computed from: A^k_t when j < k, A^j_t otherwise.
InfoSet prescription_conditioning(const DelayMatrix& d, int k, int j, int t);

/// Extensional map from realizations of `domain` to target actions.
struct PrescriptionFunction {
  int owner = 0;
  int target = 0;
  int time = 0;
  Indexer domain;
  std::vector<int> table;  // by domain index
};

/// Table lookup. Throws DomainMismatch when l's labels differ from the domain.
int act(const PrescriptionFunction& gamma, const Realization& l);

/// psi_t^{[owner,target]}: conditioning realization -> prescription function,
/// stored as one flat table indexed [cond * |domain| + dom].
struct StrategyPart {
  int owner = 0;
  int target = 0;
  int time = 0;
  Indexer cond;
  Indexer domain;
  std::vector<int> table;  // -1 = unset

  PrescriptionFunction at(std::uint64_t cond_index) const;
  /// `a` may be any realization containing the conditioning labels.
  PrescriptionFunction at(const Realization& a) const { return at(cond.index(a)); }
  int lookup(std::uint64_t c, std::uint64_t l) const { return table[c * domain.size() + l]; }
};

struct FullStrategy {
  int owner = 0;
  std::vector<std::vector<StrategyPart>> parts;  // [target][t]

  int agent_count() const { return static_cast<int>(parts.size()); }
  const StrategyPart& part(int target, int t) const { return parts[target][t]; }
};

/// Theta_t^k: one prescription per target.
struct CompletePrescription {
  int owner = 0;
  int time = 0;
  std::vector<PrescriptionFunction> parts;  // [target]
};

/// Strategy tables for owner k with every entry unset (-1).
FullStrategy blank_strategy(const Scenario& s, const DelayMatrix& d, int k);
/// Fills every entry from g (reachable or not). Throws UndefinedPolicyEntry.
FullStrategy policy_to_strategy(const Scenario& s, const DelayMatrix& d, const Policy& g, int k);
/// g_t^j(m) = psi_t^{[k,j]}(cond(m))(dom(m)) for every agent j.
Policy strategy_to_policy(const Scenario& s, const DelayMatrix& d, const FullStrategy& psi);
/// Action-equivalent strategy owned by j, built through the induced policy.
FullStrategy positional_transfer(const FullStrategy& psi, int j, const Scenario& s, const DelayMatrix& d);

/// Theta_t^k = psi_t^k(A_t^k); `a` must contain A_t^k.
CompletePrescription complete_prescription(const FullStrategy& psi, int t, const Realization& a);

/// Action of `target` at t under psi, read off a trajectory prefix.
int strategy_action(const FullStrategy& psi, int target, int t, const Trajectory& tr);

/// Random strategy with entries drawn uniformly from the feasible sets.
FullStrategy random_strategy(const Scenario& s, const DelayMatrix& d, int k, std::uint64_t seed);
/// Random total policy with entries drawn uniformly from the feasible sets.
Policy random_policy(const Scenario& s, const DelayMatrix& d, std::uint64_t seed);

/// Canonical text of a realization: "Y1@0=a,U2@1=b" with value names.
std::string realization_key(const Scenario& s, const Realization& r);

}  // namespace womc
