#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "womc/labels.hpp"
#include "womc/prescription.hpp"
#include "womc/scenario.hpp"
#include "womc/topology.hpp"

namespace womc {

/// Components of S^k_t besides X_t, in order
/// (L^{[1,k]}, ..., L^{[k-1,k]}, L^{[k,k]}, ..., L^{[K,K]}).
std::vector<InfoSet> sufficient_components(const DelayMatrix& d, int k, int t);
/// Union of the components; a realization over it is a consistent tuple.
InfoSet sufficient_labels(const DelayMatrix& d, int k, int t);

struct SufficientState {
  int owner = 0;
  int time = 0;
  int x = 0;
  Realization l;  // over sufficient_labels(owner, time)

  Realization component(const DelayMatrix& d, int i) const;
  friend bool operator==(const SufficientState&, const SufficientState&) = default;
};

/// Every consistent sufficient state, ordered by x then by l.
std::vector<SufficientState> sufficient_state_space(const Scenario& s, const DelayMatrix& d, int k, int t,
                                                    std::uint64_t cap = 10'000'000);

/// Precomputed label routing for one step of agent k's sufficient state at t.
class StepPlan {
 public:
  StepPlan(const Scenario& s, const DelayMatrix& d, int k, int t);

  int owner() const { return k_; }
  int time() const { return t_; }
  const Indexer& current() const { return current_; }
  const Indexer& next() const { return next_; }
  const Indexer& accessible() const { return accessible_; }
  const Indexer& new_info() const { return new_info_; }
  const Indexer& domain(int j) const { return domains_[j]; }

  /// Actions U^{1:K}_t prescribed by theta at the state (x, current values).
  void actions(const CompletePrescription& theta, const std::vector<int>& current, std::vector<int>& u) const;
  /// Next-state index over next() and new-info index; false when a
  /// required label is neither in the state nor in `accessible`.
  bool advance(const Scenario& s, int x, const std::vector<int>& current, const std::vector<int>* accessible,
               const std::vector<int>& u, int w, const std::vector<int>& v_next, int& x_next,
               std::uint64_t& next_index, std::uint64_t& z_index) const;
  void check_theta(const CompletePrescription& theta) const;
  /// Index into domain(j) of the state's values.
  std::uint64_t domain_index(int j, const std::vector<int>& current) const;
  /// Decodes a key of a belief over current() into (x, values).
  int decode(std::uint64_t key, std::vector<int>& current) const;

 private:
  struct Source {
    int kind;  // 0 state, 1 accessible, 2 action U^j_t, 3 observation Y^j_{t+1}
    int pos;   // position or agent
    std::uint64_t stride;
  };
  std::vector<Source> route(const Scenario& s, const InfoSet& target, const Indexer& idx) const;

  int k_ = 0;
  int t_ = 0;
  int horizon_ = 0;
  Indexer current_, next_, accessible_, new_info_;
  std::vector<Indexer> domains_;
  std::vector<std::vector<std::pair<int, std::uint64_t>>> domain_route_;  // [j] -> (position in current, stride)
  std::vector<Source> next_route_, z_route_;
};

struct StepResult {
  SufficientState next;
  Realization new_info;  // over Z^k_{t+1}
};

/// One Witsenhausen step: actions from theta, state update, observations
/// at t+1, and repartition into the t+1 sets. Throws DomainMismatch and,
/// when a label for a beyond agent's set lies only in the accessible part,
/// InsufficientState.
StepResult state_step(const Scenario& s, const DelayMatrix& d, const SufficientState& st, int w,
                      const std::vector<int>& v_next, const CompletePrescription& theta);
double stage_cost_hat(const Scenario& s, const SufficientState& st, const CompletePrescription& theta);

/// Distribution over sufficient states, keyed x * |labels| + index(l).
struct BeliefState {
  int owner = 0;
  int time = 0;
  Indexer labels;
  Realization accessible;  // the conditioning realization of A^k_t
  std::vector<std::pair<std::uint64_t, double>> probs;  // sorted by key, positive entries only

  double total() const;
  double prob(std::uint64_t key) const;
  SufficientState state(std::uint64_t key) const;
};

/// Max |p - q| over the union of supports; infinite if label sets differ.
double linf_distance(const BeliefState& a, const BeliefState& b);

/// P(S^k_t | A^k_t = a, Theta_{0:t-1} = thetas), t = thetas.size(), by
/// exhaustive enumeration. Throws ZeroProbabilityCondition.
BeliefState belief_from_scratch(const Scenario& s, const DelayMatrix& d, int k, const Realization& a,
                                const std::vector<CompletePrescription>& thetas, std::uint64_t cap = 10'000'000);

struct Outcome {
  Realization z;
  double prob = 0.0;
  BeliefState next;
};

/// Each positive-probability new-information value with its probability
/// and posterior, in canonical z order.
std::vector<Outcome> belief_outcomes(const Scenario& s, const StepPlan& plan, const BeliefState& pi,
                                     const CompletePrescription& theta);
std::vector<Outcome> belief_outcomes(const Scenario& s, const DelayMatrix& d, const BeliefState& pi,
                                     const CompletePrescription& theta);
/// Distribution of A^k_0 and the initial beliefs.
std::vector<Outcome> initial_outcomes(const Scenario& s, const DelayMatrix& d, int k, std::uint64_t cap = 10'000'000);

/// Filter step. Throws ZeroProbabilityObservation.
BeliefState belief_update(const Scenario& s, const DelayMatrix& d, const BeliefState& pi,
                          const CompletePrescription& theta, const Realization& z);

double expected_cost(const Scenario& s, const StepPlan& plan, const BeliefState& pi, const CompletePrescription& theta);
double expected_cost(const Scenario& s, const DelayMatrix& d, const BeliefState& pi, const CompletePrescription& theta);

}  // namespace womc
