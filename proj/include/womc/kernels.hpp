#pragma once

// Data-parallel kernels over primitive assignments and policy candidates.
// Each parallel kernel has a serial reference twin used by the tests; the
// parallel versions write into index-addressed slots and reduce serially, so
// output is bit-identical for any worker count.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "womc/scenario.hpp"

namespace womc {

/// Positive-probability primitive assignments in canonical order
/// (x0 most significant, then w_0..w_T, then v_t^k by t then k).
std::vector<World> enumerate_worlds(const Scenario& s, std::uint64_t cap);

/// Fresh trajectory for `world` with the observations at time 0 filled.
Trajectory start_trajectory(const Scenario& s, const World& world);
/// Applies U_t = u: stage cost, X_{t+1} and, when t < T, the observations at t+1.
void advance_trajectory(const Scenario& s, Trajectory& tr, int t, std::span<const int> u);

/// Runs `steps` full steps (observe, act, cost, advance) and, when
/// steps <= T, the observation at time `steps`. `choose(k, t, tr)` returns
/// U^k_t and may read any earlier entry of `tr`.
template <class Choose>
Trajectory rollout(const Scenario& s, const World& world, int steps, Choose&& choose) {
  const int K = s.agent_count;
  Trajectory tr = start_trajectory(s, world);
  std::vector<int> u(static_cast<std::size_t>(K));
  for (int t = 0; t < steps && t <= s.horizon; ++t) {
    for (int k = 0; k < K; ++k) {
      u[k] = choose(k, t, static_cast<const Trajectory&>(tr));
      tr.act[t * K + k] = u[k];
    }
    advance_trajectory(s, tr, t, u);
  }
  return tr;
}

std::vector<WeightedTrajectory> propagate_all(const Scenario& s, const std::vector<World>& worlds, const Policy& g,
                                              int jobs);
std::vector<WeightedTrajectory> propagate_all_serial(const Scenario& s, const std::vector<World>& worlds,
                                                     const Policy& g);

/// Sum over worlds of prob x total cost under g, summed in world order.
double expected_total_cost(const Scenario& s, const std::vector<World>& worlds, const Policy& g, int jobs);
double expected_total_cost_serial(const Scenario& s, const std::vector<World>& worlds, const Policy& g);

/// out[i] = fn(i) for i in [0, n), evaluated with `jobs` workers.
std::vector<double> parallel_map(std::uint64_t n, int jobs, const std::function<double(std::uint64_t)>& fn);

/// First index of the minimum (strict < scan in index order).
std::uint64_t first_argmin(const std::vector<double>& values);

}  // namespace womc
