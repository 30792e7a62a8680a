#include "womc/kernels.hpp"

#include <omp.h>

#include <exception>
#include <string>

#include "womc/error.hpp"

namespace womc {

std::vector<World> enumerate_worlds(const Scenario& s, std::uint64_t cap) {
  const std::uint64_t total = primitive_count(s);
  if (total > cap)
    fail(Errc::EnumerationCapExceeded,
         std::to_string(total) + " primitive assignments exceed cap " + std::to_string(cap));
  const int K = s.agent_count;
  const int T = s.horizon;
  // Radices from least significant: v_T^{K-1} ... v_0^0, w_T ... w_0, x0.
  std::vector<World> out;
  out.reserve(total);
  World w;
  w.w.assign(static_cast<std::size_t>(T + 1), 0);
  w.v.assign(static_cast<std::size_t>((T + 1) * K), 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    std::uint64_t r = i;
    for (int t = T; t >= 0; --t)
      for (int k = K - 1; k >= 0; --k) {
        const auto n = static_cast<std::uint64_t>(s.v_spaces[k].size());
        w.v[t * K + k] = static_cast<int>(r % n);
        r /= n;
      }
    for (int t = T; t >= 0; --t) {
      const auto n = static_cast<std::uint64_t>(s.w_space.size());
      w.w[t] = static_cast<int>(r % n);
      r /= n;
    }
    w.x0 = static_cast<int>(r);
    double p = s.init_dist[w.x0];
    for (int t = 0; t <= T && p > 0.0; ++t) {
      p *= s.w_dists[t][w.w[t]];
      for (int k = 0; k < K; ++k) p *= s.v_dists[t][k][w.v[t * K + k]];
    }
    if (p <= 0.0) continue;
    w.prob = p;
    out.push_back(w);
  }
  return out;
}

Trajectory start_trajectory(const Scenario& s, const World& world) {
  const int K = s.agent_count;
  const int T = s.horizon;
  Trajectory tr;
  tr.horizon = T;
  tr.agent_count = K;
  tr.states.assign(static_cast<std::size_t>(T + 2), -1);
  tr.obs.assign(static_cast<std::size_t>((T + 1) * K), -1);
  tr.act.assign(static_cast<std::size_t>((T + 1) * K), -1);
  tr.stage_costs.assign(static_cast<std::size_t>(T + 1), 0.0);
  tr.w = world.w;
  tr.v = world.v;
  tr.states[0] = world.x0;
  for (int k = 0; k < K; ++k) tr.obs[k] = s.observe(k, 0, world.x0, world.v[k]);
  return tr;
}

void advance_trajectory(const Scenario& s, Trajectory& tr, int t, std::span<const int> u) {
  const int K = s.agent_count;
  const int x = tr.states[t];
  const int joint = s.pack_actions(u);
  for (int k = 0; k < K; ++k) tr.act[t * K + k] = u[k];
  tr.stage_costs[t] = s.stage_cost(t, x, joint);
  const int xn = s.next_state(t, x, joint, tr.w[t]);
  tr.states[t + 1] = xn;
  if (t < s.horizon)
    for (int k = 0; k < K; ++k) tr.obs[(t + 1) * K + k] = s.observe(k, t + 1, xn, tr.v[(t + 1) * K + k]);
}

namespace {

WeightedTrajectory run_world(const Scenario& s, const World& w, const Policy& g) {
  return {rollout(s, w, s.horizon + 1, [&](int k, int t, const Trajectory& tr) { return g.act(k, t, tr); }), w.prob};
}

// Runs body(i) for i in [0, n) and rethrows the first captured exception.
template <class Body>
void parallel_for(std::uint64_t n, int jobs, Body&& body) {
  std::exception_ptr error;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 64) num_threads(jobs > 0 ? jobs : 1)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::uint64_t>(i));
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<WeightedTrajectory> propagate_all(const Scenario& s, const std::vector<World>& worlds, const Policy& g,
                                              int jobs) {
  std::vector<WeightedTrajectory> out(worlds.size());
  parallel_for(worlds.size(), jobs, [&](std::uint64_t i) { out[i] = run_world(s, worlds[i], g); });
  return out;
}

std::vector<WeightedTrajectory> propagate_all_serial(const Scenario& s, const std::vector<World>& worlds,
                                                     const Policy& g) {
  std::vector<WeightedTrajectory> out;
  out.reserve(worlds.size());
  for (const auto& w : worlds) out.push_back(run_world(s, w, g));
  return out;
}

double expected_total_cost(const Scenario& s, const std::vector<World>& worlds, const Policy& g, int jobs) {
  std::vector<double> contrib(worlds.size());
  parallel_for(worlds.size(), jobs,
               [&](std::uint64_t i) { contrib[i] = worlds[i].prob * run_world(s, worlds[i], g).trajectory.total_cost(); });
  double sum = 0.0;
  for (double c : contrib) sum += c;
  return sum;
}

double expected_total_cost_serial(const Scenario& s, const std::vector<World>& worlds, const Policy& g) {
  double sum = 0.0;
  for (const auto& w : worlds) sum += w.prob * run_world(s, w, g).trajectory.total_cost();
  return sum;
}

std::vector<double> parallel_map(std::uint64_t n, int jobs, const std::function<double(std::uint64_t)>& fn) {
  std::vector<double> out(n);
  parallel_for(n, jobs, [&](std::uint64_t i) { out[i] = fn(i); });
  return out;
}

std::uint64_t first_argmin(const std::vector<double>& values) {
  std::uint64_t best = 0;
  for (std::uint64_t i = 1; i < values.size(); ++i)
    if (values[i] < values[best]) best = i;
  return best;
}

}  // namespace womc
