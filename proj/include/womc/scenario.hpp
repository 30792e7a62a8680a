#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "womc/labels.hpp"
#include "womc/topology.hpp"

namespace womc {

/// Enumeration caps and worker count. Results never depend on `jobs`.
struct Limits {
  std::uint64_t primitive_cap = 10'000'000;
  std::uint64_t policy_cap = 1'000'000;
  int jobs = 1;
};

struct FiniteSpace {
  std::string name;
  std::vector<std::string> values;

  int size() const noexcept { return static_cast<int>(values.size()); }
  int index_of(const std::string& label) const;  // -1 if absent
};

/// Finite system model. Every table is total over its domain and indexed by
/// time 0..horizon. Joint actions are packed with agent 0 most significant.
struct Scenario {
  int horizon = 0;
  int agent_count = 1;
  FiniteSpace state_space;
  std::vector<FiniteSpace> action_spaces;  // [k]
  std::vector<FiniteSpace> obs_spaces;     // [k]
  FiniteSpace w_space;
  std::vector<FiniteSpace> v_spaces;       // [k]

  std::vector<int> transition;             // [t][x][joint u][w] -> x'
  std::vector<int> observation;            // [k][t][x][v] -> y
  std::vector<double> cost;                // [t][x][joint u]
  std::vector<double> init_dist;           // [x]
  std::vector<std::vector<double>> w_dists;               // [t][w]
  std::vector<std::vector<std::vector<double>>> v_dists;  // [t][k][v]
  std::vector<std::vector<std::vector<int>>> feasible;    // [k][t] -> action indices

  int joint_action_count() const;
  int pack_actions(std::span<const int> actions) const;
  std::vector<int> unpack_actions(int joint) const;

  std::size_t transition_index(int t, int x, int joint_u, int w) const;
  std::size_t observation_index(int k, int t, int x, int v) const;
  std::size_t cost_index(int t, int x, int joint_u) const;

  int next_state(int t, int x, int joint_u, int w) const { return transition[transition_index(t, x, joint_u, w)]; }
  int observe(int k, int t, int x, int v) const { return observation[observation_index(k, t, x, v)]; }
  double stage_cost(int t, int x, int joint_u) const { return cost[cost_index(t, x, joint_u)]; }

  /// Size of the value space of a label (|Y^k| or |U^k|).
  int radix(const VarLabel& l) const;

  /// Allocates every table with the right shape; entries zeroed.
  void allocate_tables();
  /// Full-space feasible sets for every (k, t).
  void default_feasible();
};

/// Throws BadDistribution / MissingTableEntry when an invariant fails.
void validate_scenario(const Scenario& s);

/// One assignment of the primitive random variables (X_0, W_{0:T}, V_{0:T}^{1:K}).
struct World {
  int x0 = 0;
  std::vector<int> w;  // [t]
  std::vector<int> v;  // [t * K + k]
  double prob = 1.0;
};

struct Transmission {
  int from = 0;
  int time = 0;
  int obs = 0;       // Y^from_time
  int prev_act = -1; // U^from_{time-1}, -1 at time 0
};

struct Delivery {
  int from = 0;
  int to = 0;
  int sent = 0;
  int arrived = 0;
  std::vector<int> hops;
};

/// States x_0..x_{T+1}; per-(t, k) observations and actions.
struct Trajectory {
  int horizon = 0;
  int agent_count = 1;
  std::vector<int> states;
  std::vector<int> w;
  std::vector<int> v;
  std::vector<int> obs;  // [t * K + k]
  std::vector<int> act;  // [t * K + k], -1 before the action is taken
  std::vector<double> stage_costs;
  std::vector<Transmission> transmissions;
  std::vector<Delivery> deliveries;

  int y(int t, int k) const { return obs[static_cast<std::size_t>(t * agent_count + k)]; }
  int u(int t, int k) const { return act[static_cast<std::size_t>(t * agent_count + k)]; }
  int value(const VarLabel& l) const { return l.kind == Kind::Obs ? y(l.time, l.agent) : u(l.time, l.agent); }
  double total_cost() const;
};

/// Mixed-radix index over the realizations of an InfoSet, first label most
/// significant. Index order equals canonical realization order.
class Indexer {
 public:
  Indexer() = default;
  Indexer(const Scenario& s, InfoSet labels);

  const InfoSet& labels() const noexcept { return labels_; }
  std::uint64_t size() const noexcept { return size_; }
  std::uint64_t index(const Trajectory& tr) const;
  std::uint64_t index(const Realization& r) const;  // r must contain every label
  Realization decode(std::uint64_t index) const;
  int radix(std::size_t pos) const { return radix_[pos]; }

 private:
  InfoSet labels_;
  std::vector<int> radix_;
  std::vector<std::uint64_t> stride_;
  std::uint64_t size_ = 1;
};

/// Values of `labels` read from a trajectory.
Realization realization_of(const Trajectory& tr, const InfoSet& labels);

/// Ceiling on any single dense table (policy, prescription strategy).
inline constexpr std::uint64_t kMaxTableEntries = 1ull << 24;

struct PolicyTable {
  Indexer memory;
  std::vector<int> action;  // -1 = undefined
};

/// Deterministic memory-feedback policy g_t^k as explicit tables.
class Policy {
 public:
  Policy() = default;
  /// Tables over every memory realization, all entries undefined (-1).
  static Policy blank(const Scenario& s, const DelayMatrix& d);
  static Policy constant(const Scenario& s, const DelayMatrix& d, const std::vector<int>& actions);

  int agent_count() const { return static_cast<int>(tables_.size()); }
  int horizon() const { return tables_.empty() ? -1 : static_cast<int>(tables_[0].size()) - 1; }
  PolicyTable& table(int k, int t) { return tables_[k][t]; }
  const PolicyTable& table(int k, int t) const { return tables_[k][t]; }

  /// Action for agent k at time t given the realized trajectory so far.
  /// Throws UndefinedPolicyEntry.
  int act(int k, int t, const Trajectory& tr) const;

  friend bool operator==(const Policy& a, const Policy& b);

 private:
  std::vector<std::vector<PolicyTable>> tables_;  // [k][t]
};

/// Parses the structured text format documented in docs/scenario_format.md.
struct LoadedScenario {
  Topology topology;
  Scenario scenario;
};
LoadedScenario load_scenario(const std::string& document);
LoadedScenario load_scenario_file(const std::string& path);
std::string write_scenario(const Topology& topology, const Scenario& s);

/// Samples the primitives from `seed` (one stream per primitive variable)
/// and runs the per-step sequence: observe, receive and memorize via
/// hop-by-hop relay along information paths, transmit, act, state update.
Trajectory simulate(const Scenario& s, const Topology& topology, const Policy& g, std::uint64_t seed);
/// Relay simulation with the primitives fixed to `world`.
Trajectory simulate_world(const Scenario& s, const Topology& topology, const Policy& g, const World& world);
/// Primitive assignment drawn from `seed` with one stream per variable.
World sample_world(const Scenario& s, std::uint64_t seed);

/// Deterministic propagation of a primitive assignment under `g`.
Trajectory propagate(const Scenario& s, const World& world, const Policy& g);

/// Reads the primitive variables of a world back out of a trajectory.
World primitives_of(const Trajectory& tr, double prob);

struct WeightedTrajectory {
  Trajectory trajectory;
  double prob = 0.0;
};

/// Every positive-probability primitive assignment propagated under g, in
/// canonical primitive order. Throws EnumerationCapExceeded.
std::vector<WeightedTrajectory> joint_distribution(const Scenario& s, const Policy& g, const Limits& limits = {});

/// Number of primitive assignments |X| |W|^{T+1} prod_k |V^k|^{T+1}.
std::uint64_t primitive_count(const Scenario& s);

}  // namespace womc
