#pragma once

#include <cstdint>
#include <random>

#include "womc/scenario.hpp"
#include "womc/topology.hpp"

namespace womc {

/// Strongly connected: a random Hamiltonian cycle plus each remaining
/// ordered pair linked with probability `extra`. Delays uniform in 1..max_delay.
Topology random_topology(std::mt19937_64& rng, int agents, int max_delay, double extra = 0.3);

/// Arbitrary directed graph (may be disconnected); for validation tests.
Topology random_digraph(std::mt19937_64& rng, int agents, int max_delay, double density);

struct RandomShape {
  int states = 2;
  int actions = 2;
  int observations = 2;
  int w_values = 2;
  int v_values = 1;
};

/// Random total tables; probabilities are small-integer ratios, costs are
/// multiples of 1/8.
Scenario random_scenario(std::mt19937_64& rng, int agents, int horizon, const RandomShape& shape);

/// Copy of `topology` with every delay increased by `amount`.
Topology shift_delays(const Topology& topology, int amount);

/// Independent per-index seed derived from a batch seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace womc
