// Topology, scenario and information-structure suites.

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "womc/error.hpp"
#include "womc/infostruct.hpp"
#include "womc/kernels.hpp"
#include "womc/prescription.hpp"
#include "womc/random_instance.hpp"
#include "verify_internal.hpp"

namespace womc::detail {

namespace {

std::string pair_text(int i, int j) { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; }

std::string set_text(const InfoSet& s) {
  std::string out = "{";
  for (const auto& l : s) out += (out.size() > 1 ? "," : "") + to_string(l);
  return out + "}";
}

// Minimum over all simple paths by depth-first enumeration.
int simple_path_min(const Topology& topo, int from, int to) {
  const int n = topo.agent_count();
  std::vector<bool> on(static_cast<std::size_t>(n), false);
  int best = -1;
  std::function<void(int, int)> dfs = [&](int at, int acc) {
    if (at == to) {
      if (best < 0 || acc < best) best = acc;
      return;
    }
    on[at] = true;
    for (const auto& l : topo.links())
      if (l.from == at && !on[l.to]) dfs(l.to, acc + l.delay);
    on[at] = false;
  };
  dfs(from, 0);
  return best;
}

Scenario unit_scenario(int agents, int horizon) {
  std::mt19937_64 rng(0);
  RandomShape shape{1, 1, 1, 1, 1};
  return random_scenario(rng, agents, horizon, shape);
}

}  // namespace

void topology_checks(Suite& suite, const Instance& inst) {
  const int K = inst.topology.agent_count();
  const DelayMatrix& d = inst.d;
  {
    Sink sink = suite.at("delay_diagonal_zero", inst);
    sink.run();
    for (int k = 0; k < K; ++k)
      if (d(k, k) != 0) sink.violation([&] { return "d(" + std::to_string(k + 1) + ") = " + std::to_string(d(k, k)); });
  }
  {
    Sink sink = suite.at("delay_triangle_inequality", inst);
    sink.run();
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j)
        for (int m = 0; m < K; ++m)
          if (d(i, j) > d(i, m) + d(m, j))
            sink.violation([&] { return "d" + pair_text(i, j) + " > d" + pair_text(i, m) + " + d" + pair_text(m, j); });
  }
  if (K <= 6) {
    Sink sink = suite.at("delay_path_oracle", inst);
    sink.run();
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j) {
        const int oracle = i == j ? 0 : simple_path_min(inst.topology, i, j);
        if (oracle != d(i, j))
          sink.violation([&] {
            return "d" + pair_text(i, j) + " = " + std::to_string(d(i, j)) + ", simple paths give " +
                   std::to_string(oracle);
          });
      }
  } else {
    suite.at("delay_path_oracle", inst).skip();
  }
  {
    Sink sink = suite.at("information_path_delay", inst);
    sink.run();
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j) {
        if (i == j) continue;
        const Path p = information_path(inst.topology, i, j);
        int sum = 0;
        bool valid = p.nodes.size() >= 2 && p.nodes.front() == i && p.nodes.back() == j;
        for (std::size_t h = 0; valid && h + 1 < p.nodes.size(); ++h) {
          const auto delay = inst.topology.link_delay(p.nodes[h], p.nodes[h + 1]);
          valid = delay.has_value();
          if (valid) sum += *delay;
        }
        if (!valid || sum != p.total_delay || p.total_delay != d(i, j))
          sink.violation([&] {
            return "path " + pair_text(i, j) + " has delay " + std::to_string(p.total_delay) + " (links sum " +
                   std::to_string(sum) + "), d = " + std::to_string(d(i, j));
          });
      }
  }
  {
    Sink sink = suite.at("strong_connectivity_finite", inst);
    sink.run();
    int bound = 0;
    for (const auto& l : inst.topology.links()) bound += l.delay;
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j)
        if (d(i, j) < 0 || d(i, j) > bound)
          sink.violation([&] { return "d" + pair_text(i, j) + " = " + std::to_string(d(i, j)) + " is not finite"; });
  }
}

void scenario_checks(Suite& suite, const Instance& inst) {
  const Scenario& s = *inst.s;
  const int K = s.agent_count;
  const int T = s.horizon;
  std::vector<World> worlds;
  try {
    worlds = enumerate_worlds(s, inst.limits.primitive_cap);
  } catch (const Error&) {
    for (const char* n : {"primitive_independence", "simulate_matches_enumeration", "stage_cost_table"})
      suite.at(n, inst).skip();
    return;
  }
  std::vector<Policy> policies;
  for (int r = 0; r < 3; ++r) policies.push_back(random_policy(s, inst.d, derive_seed(inst.seed, 100 + r)));
  {
    Sink sink = suite.at("primitive_independence", inst);
    sink.run();
    const auto joint = joint_distribution(s, policies[0], inst.limits);
    double total = 0.0;
    for (const auto& wt : joint) {
      const Trajectory& tr = wt.trajectory;
      double p = s.init_dist[tr.states[0]];
      for (int t = 0; t <= T; ++t) {
        p *= s.w_dists[t][tr.w[t]];
        for (int k = 0; k < K; ++k) p *= s.v_dists[t][k][tr.v[t * K + k]];
      }
      total += wt.prob;
      sink.deviation(std::abs(p - wt.prob), 1e-15, [&] { return "assignment probability differs from product"; });
    }
    sink.deviation(std::abs(total - 1.0), 1e-12, [&] { return "joint distribution sums to " + std::to_string(total); });
  }
  {
    Sink sink = suite.at("simulate_matches_enumeration", inst);
    sink.run();
    for (const auto& g : policies)
      for (const auto& w : worlds) {
        const Trajectory a = simulate_world(s, inst.topology, g, w);
        const Trajectory b = propagate(s, w, g);
        if (a.states != b.states || a.obs != b.obs || a.act != b.act || a.stage_costs != b.stage_costs) {
          sink.violation([&] { return "relay trajectory differs for x0=" + s.state_space.values[w.x0]; });
          break;
        }
      }
  }
  {
    Sink sink = suite.at("stage_cost_table", inst);
    sink.run();
    for (const auto& g : policies)
      for (const auto& wt : propagate_all_serial(s, worlds, g)) {
        const Trajectory& tr = wt.trajectory;
        for (int t = 0; t <= T; ++t) {
          std::vector<int> u;
          for (int k = 0; k < K; ++k) u.push_back(tr.u(t, k));
          const double c = s.cost[s.cost_index(t, tr.states[t], s.pack_actions(u))];
          if (c != tr.stage_costs[t])
            sink.violation([&] { return "stage cost at t=" + std::to_string(t) + " differs from table"; });
        }
      }
  }
}

void infostruct_checks(Suite& suite, const Instance& inst) {
  const DelayMatrix& d = inst.d;
  const int K = d.agent_count();
  const int T = inst.horizon;
  Sink mono = suite.at("accessible_monotone", inst);
  Sink nest = suite.at("accessible_nesting", inst);
  Sink part = suite.at("inaccessible_partition", inst);
  Sink dom = suite.at("domain_subset", inst);
  Sink mem = suite.at("memory_monotone", inst);
  for (Sink* s : {&mono, &nest, &part, &dom, &mem}) s->run();
  auto where = [](int k, int t) { return "agent " + std::to_string(k + 1) + " t=" + std::to_string(t); };
  for (int t = 0; t <= T; ++t)
    for (int k = 0; k < K; ++k) {
      const InfoSet m = memory_labels(d, k, t);
      const InfoSet a = accessible_labels(d, k, t);
      if (t >= 1) {
        if (!is_subset(accessible_labels(d, k, t - 1), a)) mono.violation([&] { return where(k, t); });
        if (!is_subset(memory_labels(d, k, t - 1), m)) mem.violation([&] { return where(k, t); });
      }
      for (int j = k; j < K; ++j) {
        const InfoSet aj = accessible_labels(d, j, t);
        if (!is_subset(aj, a))
          nest.violation([&] { return where(k, t) + ": A^" + std::to_string(j + 1) + " " + set_text(aj); });
        const InfoSet l = inaccessible_labels(d, k, j, t);
        if (set_union(l, aj) != m || !set_intersection(l, aj).empty())
          part.violation([&] { return where(k, t) + " j=" + std::to_string(j + 1) + ": L = " + set_text(l); });
      }
      if (!is_subset(inaccessible_labels(d, k, k, t), inaccessible_labels(d, k, K - 1, t)))
        dom.violation([&] { return where(k, t); });
    }

  Sink relay = suite.at("memory_relay", inst);
  relay.run();
  const Scenario unit = inst.s ? Scenario{} : unit_scenario(K, T);
  const Scenario& s = inst.s ? *inst.s : unit;
  const Policy g = random_policy(s, d, derive_seed(inst.seed, 7));
  const Trajectory tr = simulate_world(s, inst.topology, g, sample_world(s, inst.seed));
  for (int t = 0; t <= T; ++t)
    for (int k = 0; k < K; ++k) {
      std::set<VarLabel> got;
      for (int tau = 0; tau <= t; ++tau) got.insert({k, tau, Kind::Obs});
      for (int tau = 0; tau < t; ++tau) got.insert({k, tau, Kind::Act});
      for (const auto& dl : tr.deliveries)
        if (dl.to == k && dl.arrived <= t) {
          got.insert({dl.from, dl.sent, Kind::Obs});
          if (dl.sent >= 1) got.insert({dl.from, dl.sent - 1, Kind::Act});
        }
      const InfoSet replay(std::vector<VarLabel>(got.begin(), got.end()));
      const InfoSet expect = memory_labels(d, k, t);
      if (replay != expect)
        relay.violation([&] { return where(k, t) + ": relay " + set_text(replay) + " vs " + set_text(expect); });
    }
}

}  // namespace womc::detail
