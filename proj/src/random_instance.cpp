#include "womc/random_instance.hpp"

#include <algorithm>
#include <numeric>

namespace womc {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

bool coin(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

std::vector<double> random_dist(std::mt19937_64& rng, int n) {
  std::vector<int> w(static_cast<std::size_t>(n));
  for (int& x : w) x = uniform(rng, 1, 4);
  const double total = std::accumulate(w.begin(), w.end(), 0);
  std::vector<double> p;
  for (int x : w) p.push_back(x / total);
  return p;
}

FiniteSpace space(const std::string& name, const std::string& prefix, int n) {
  FiniteSpace s{name, {}};
  for (int i = 0; i < n; ++i) s.values.push_back(prefix + std::to_string(i));
  return s;
}

}  // namespace

Topology random_topology(std::mt19937_64& rng, int agents, int max_delay, double extra) {
  std::vector<int> order(static_cast<std::size_t>(agents));
  std::iota(order.begin(), order.end(), 0);
  for (int i = agents - 1; i > 0; --i) std::swap(order[i], order[uniform(rng, 0, i)]);
  std::vector<Link> links;
  std::vector<std::vector<bool>> used(static_cast<std::size_t>(agents), std::vector<bool>(agents, false));
  if (agents > 1)
    for (int i = 0; i < agents; ++i) {
      const int a = order[i], b = order[(i + 1) % agents];
      if (used[a][b]) continue;
      used[a][b] = true;
      links.push_back({a, b, uniform(rng, 1, max_delay)});
    }
  for (int a = 0; a < agents; ++a)
    for (int b = 0; b < agents; ++b)
      if (a != b && !used[a][b] && coin(rng, extra)) {
        used[a][b] = true;
        links.push_back({a, b, uniform(rng, 1, max_delay)});
      }
  return Topology(agents, std::move(links));
}

Topology random_digraph(std::mt19937_64& rng, int agents, int max_delay, double density) {
  std::vector<Link> links;
  for (int a = 0; a < agents; ++a)
    for (int b = 0; b < agents; ++b)
      if (a != b && coin(rng, density)) links.push_back({a, b, uniform(rng, 1, max_delay)});
  return Topology(agents, std::move(links));
}

Scenario random_scenario(std::mt19937_64& rng, int agents, int horizon, const RandomShape& shape) {
  Scenario s;
  s.agent_count = agents;
  s.horizon = horizon;
  s.state_space = space("state", "x", shape.states);
  s.w_space = space("wnoise", "w", shape.w_values);
  for (int k = 0; k < agents; ++k) {
    const std::string a = std::to_string(k + 1);
    s.action_spaces.push_back(space("action " + a, "u", shape.actions));
    s.obs_spaces.push_back(space("obs " + a, "y", shape.observations));
    s.v_spaces.push_back(space("vnoise " + a, "v", shape.v_values));
  }
  s.allocate_tables();
  s.default_feasible();
  for (int& x : s.transition) x = uniform(rng, 0, shape.states - 1);
  for (int& y : s.observation) y = uniform(rng, 0, shape.observations - 1);
  for (double& c : s.cost) c = uniform(rng, 0, 40) / 8.0;
  s.init_dist = random_dist(rng, shape.states);
  for (int t = 0; t <= horizon; ++t) {
    s.w_dists[t] = random_dist(rng, shape.w_values);
    for (int k = 0; k < agents; ++k) s.v_dists[t][k] = random_dist(rng, shape.v_values);
  }
  return s;
}

Topology shift_delays(const Topology& topology, int amount) {
  std::vector<Link> links = topology.links();
  for (auto& l : links) l.delay += amount;
  return Topology(topology.agent_count(), std::move(links));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed * 0x9e3779b97f4a7c15ull + index + 1;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace womc
