#pragma once

#include <cstdint>
#include <vector>

#include "womc/labels.hpp"
#include "womc/scenario.hpp"
#include "womc/topology.hpp"

namespace womc {

/// Everything agent k holds at time t: Y^j up to t - d(j,k), U^j up to
/// t - d(j,k) - 1, for every agent j.
InfoSet memory_labels(const DelayMatrix& d, int k, int t);

/// Intersection of the memories of agents 0..k.
InfoSet accessible_labels(const DelayMatrix& d, int k, int t);

/// Labels entering the accessible set at t. At t = 0 this is the whole
/// accessible set.
InfoSet new_info_labels(const DelayMatrix& d, int k, int t);

/// Part of agent k's memory outside the accessible set of agent j >= k.
/// Throws NotBeyond when j < k.
InfoSet inaccessible_labels(const DelayMatrix& d, int k, int j, int t);

struct BeyondSet {
  int base = 0;
  std::vector<int> members;  // base..K-1
};
BeyondSet beyond(int k, int agent_count);
inline bool is_beyond(int j, int k) { return j >= k; }

/// All realizations of `labels` in canonical order. Throws
/// EnumerationCapExceeded when the count exceeds `cap`.
std::vector<Realization> enumerate_realizations(const Scenario& s, const InfoSet& labels,
                                                std::uint64_t cap = 10'000'000);

}  // namespace womc
