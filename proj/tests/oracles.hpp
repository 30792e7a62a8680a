#pragma once
// Reference computations written directly from the definitions, sharing no
// code with the library beyond the Scenario tables themselves.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "womc/prescription.hpp"
#include "womc/scenario.hpp"
#include "womc/topology.hpp"

namespace oracle {

using womc::Kind;
using womc::Scenario;
using womc::Topology;
using womc::VarLabel;
using LabelSet = std::set<VarLabel>;

inline std::string fixture(const std::string& name) { return std::string(WOMC_FIXTURES) + "/" + name; }

/// Minimum summed delay over every simple path, -1 when unreachable.
inline int simple_path_delay(const Topology& topo, int from, int to) {
  if (from == to) return 0;
  std::vector<bool> on(static_cast<std::size_t>(topo.agent_count()), false);
  int best = -1;
  std::function<void(int, int)> walk = [&](int at, int acc) {
    if (at == to) {
      if (best < 0 || acc < best) best = acc;
      return;
    }
    on[at] = true;
    for (const auto& l : topo.links())
      if (l.from == at && !on[l.to]) walk(l.to, acc + l.delay);
    on[at] = false;
  };
  walk(from, 0);
  return best;
}

/// Every simple path from `from` to `to` with its delay.
inline std::vector<std::pair<std::vector<int>, int>> simple_paths(const Topology& topo, int from, int to) {
  std::vector<std::pair<std::vector<int>, int>> out;
  std::vector<int> path{from};
  std::function<void(int, int)> walk = [&](int at, int acc) {
    if (at == to) {
      out.emplace_back(path, acc);
      return;
    }
    for (const auto& l : topo.links())
      if (l.from == at && std::find(path.begin(), path.end(), l.to) == path.end()) {
        path.push_back(l.to);
        walk(l.to, acc + l.delay);
        path.pop_back();
      }
  };
  walk(from, 0);
  return out;
}

/// Labels agent k holds at t: Y^j_tau arrives at tau + delay, U^j_tau is
/// sent with Y^j_{tau+1}.
inline LabelSet memory(const Topology& topo, int k, int t) {
  LabelSet m;
  for (int j = 0; j < topo.agent_count(); ++j) {
    const int delay = simple_path_delay(topo, j, k);
    for (int tau = 0; tau <= t; ++tau) {
      if (tau + delay <= t) m.insert({j, tau, Kind::Obs});
      if (tau + 1 + delay <= t) m.insert({j, tau, Kind::Act});
    }
  }
  return m;
}

inline LabelSet intersect(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
  return out;
}

inline LabelSet minus(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
  return out;
}

/// Literal intersection of the memories of agents 0..k.
inline LabelSet accessible(const Topology& topo, int k, int t) {
  LabelSet a = memory(topo, 0, t);
  for (int i = 1; i <= k; ++i) a = intersect(a, memory(topo, i, t));
  return a;
}

inline LabelSet to_set(const womc::InfoSet& s) { return LabelSet(s.begin(), s.end()); }

/// One primitive assignment propagated forward.
struct Run {
  double prob = 1.0;
  int K = 1;
  std::vector<int> x, w, v, y, u;  // y, u, v indexed [t * K + k]
  std::vector<double> c;
  int value(const VarLabel& l) const { return l.kind == Kind::Obs ? y[l.time * K + l.agent] : u[l.time * K + l.agent]; }
  double total() const {
    double s = 0;
    for (double x : c) s += x;
    return s;
  }
};

using Choice = std::function<int(int k, int t, const Run& r)>;

/// All positive-probability primitive assignments, propagated with `act`.
inline std::vector<Run> enumerate(const Scenario& s, const Choice& act) {
  const int K = s.agent_count, T = s.horizon;
  std::vector<Run> out;
  std::vector<int> vars;  // radices: x0, w_0..w_T, v_t^k
  vars.push_back(s.state_space.size());
  for (int t = 0; t <= T; ++t) vars.push_back(s.w_space.size());
  for (int t = 0; t <= T; ++t)
    for (int k = 0; k < K; ++k) vars.push_back(s.v_spaces[k].size());
  std::vector<int> dig(vars.size(), 0);
  while (true) {
    Run r;
    r.K = K;
    r.x.assign(T + 2, -1);
    r.w.assign(dig.begin() + 1, dig.begin() + 2 + T);
    r.v.assign(dig.begin() + 2 + T, dig.end());
    r.prob = s.init_dist[dig[0]];
    for (int t = 0; t <= T; ++t) {
      r.prob *= s.w_dists[t][r.w[t]];
      for (int k = 0; k < K; ++k) r.prob *= s.v_dists[t][k][r.v[t * K + k]];
    }
    if (r.prob > 0) {
      r.x[0] = dig[0];
      r.y.assign((T + 1) * K, -1);
      r.u.assign((T + 1) * K, -1);
      r.c.assign(T + 1, 0.0);
      for (int t = 0; t <= T; ++t) {
        for (int k = 0; k < K; ++k) r.y[t * K + k] = s.observation[s.observation_index(k, t, r.x[t], r.v[t * K + k])];
        std::vector<int> u(K);
        for (int k = 0; k < K; ++k) u[k] = r.u[t * K + k] = act(k, t, r);
        int joint = 0;
        for (int k = 0; k < K; ++k) joint = joint * s.action_spaces[k].size() + u[k];
        r.c[t] = s.cost[s.cost_index(t, r.x[t], joint)];
        r.x[t + 1] = s.transition[s.transition_index(t, r.x[t], joint, r.w[t])];
      }
      out.push_back(std::move(r));
    }
    std::size_t i = dig.size();
    while (i > 0 && ++dig[i - 1] == vars[i - 1]) dig[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

inline int radix(const Scenario& s, const VarLabel& l) {
  return l.kind == Kind::Obs ? s.obs_spaces[l.agent].size() : s.action_spaces[l.agent].size();
}

/// Mixed-radix position of the run's values on `labels`, first most significant.
inline std::uint64_t position(const Scenario& s, const std::vector<VarLabel>& labels, const Run& r) {
  std::uint64_t p = 0;
  for (const auto& l : labels) p = p * static_cast<std::uint64_t>(radix(s, l)) + static_cast<std::uint64_t>(r.value(l));
  return p;
}

/// Minimum expected cost over every deterministic policy, enumerating each
/// memory table entry independently (the full set G).
inline double naive_optimum(const Scenario& s, const Topology& topo) {
  const int K = s.agent_count, T = s.horizon;
  struct Table {
    int k, t;
    std::vector<VarLabel> labels;
    std::uint64_t size = 1;
  };
  std::vector<Table> tables;
  for (int k = 0; k < K; ++k)
    for (int t = 0; t <= T; ++t) {
      const LabelSet m = memory(topo, k, t);
      Table tb{k, t, {m.begin(), m.end()}, 1};
      for (const auto& l : tb.labels) tb.size *= static_cast<std::uint64_t>(radix(s, l));
      tables.push_back(tb);
    }
  std::vector<std::pair<int, std::uint64_t>> slots;  // (table, entry)
  for (std::size_t i = 0; i < tables.size(); ++i)
    for (std::uint64_t e = 0; e < tables[i].size; ++e) slots.emplace_back(static_cast<int>(i), e);
  std::vector<std::vector<int>> action(tables.size());
  for (std::size_t i = 0; i < tables.size(); ++i) action[i].assign(tables[i].size, 0);
  std::vector<std::size_t> dig(slots.size(), 0);
  double best = INFINITY;
  while (true) {
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const auto& [tb, e] = slots[i];
      action[tb][e] = s.feasible[tables[tb].k][tables[tb].t][dig[i]];
    }
    double v = 0;
    for (const Run& r : enumerate(s, [&](int k, int t, const Run& run) {
           const int tb = k * (T + 1) + t;
           return action[tb][position(s, tables[tb].labels, run)];
         }))
      v += r.prob * r.total();
    best = std::min(best, v);
    std::size_t i = dig.size();
    while (i > 0 && ++dig[i - 1] == s.feasible[tables[slots[i - 1].first].k][tables[slots[i - 1].first].t].size())
      dig[--i] = 0;
    if (i == 0) break;
  }
  return best;
}

/// Sufficient-state labels from the definitions.
inline LabelSet sufficient(const Topology& topo, int k, int t) {
  LabelSet out;
  const LabelSet ak = accessible(topo, k, t);
  for (int i = 0; i < topo.agent_count(); ++i) {
    const LabelSet part =
        i < k ? minus(memory(topo, i, t), ak) : minus(memory(topo, i, t), accessible(topo, i, t));
    out.insert(part.begin(), part.end());
  }
  return out;
}

using BeliefMap = std::map<std::pair<int, std::vector<int>>, double>;  // (x, values on sufficient labels)

/// Generate-and-filter posterior of (X_t, sufficient labels) given the
/// accessible values and the prescriptions used before t.
inline BeliefMap scratch_belief(const Scenario& s, const Topology& topo, int k, int t,
                                const std::map<VarLabel, int>& a,
                                const std::vector<womc::CompletePrescription>& thetas) {
  const LabelSet suff = sufficient(topo, k, t);
  BeliefMap out;
  double total = 0;
  const auto runs = enumerate(s, [&](int j, int tau, const Run& r) {
    if (tau >= t) return s.feasible[j][tau][0];
    const auto& part = thetas[tau].parts[j];
    const auto& labels = part.domain.labels().labels();
    return part.table[position(s, labels, r)];
  });
  for (const Run& r : runs) {
    bool match = true;
    for (const auto& [l, v] : a) match = match && r.value(l) == v;
    if (!match) continue;
    std::vector<int> vals;
    for (const auto& l : suff) vals.push_back(r.value(l));
    out[{r.x[t], vals}] += r.prob;
    total += r.prob;
  }
  for (auto& [key, p] : out) p /= total;
  return out;
}

/// Scenario with per-agent space sizes and random tables.
inline Scenario make_scenario(std::uint64_t seed, int K, int T, int states, std::vector<int> actions,
                              std::vector<int> obs, int w, std::vector<int> v) {
  std::mt19937_64 rng(seed);
  Scenario s;
  s.agent_count = K;
  s.horizon = T;
  auto space = [](const std::string& name, const std::string& p, int n) {
    womc::FiniteSpace f{name, {}};
    for (int i = 0; i < n; ++i) f.values.push_back(p + std::to_string(i));
    return f;
  };
  s.state_space = space("state", "x", states);
  s.w_space = space("wnoise", "w", w);
  for (int k = 0; k < K; ++k) {
    s.action_spaces.push_back(space("action", "u", actions[k]));
    s.obs_spaces.push_back(space("obs", "y", obs[k]));
    s.v_spaces.push_back(space("vnoise", "v", v[k]));
  }
  s.allocate_tables();
  s.default_feasible();
  auto dist = [&](int n) {
    std::vector<double> p(n);
    double tot = 0;
    for (auto& x : p) tot += x = 1 + static_cast<double>(rng() % 4);
    for (auto& x : p) x /= tot;
    return p;
  };
  for (auto& x : s.transition) x = static_cast<int>(rng() % static_cast<unsigned>(states));
  for (int k = 0; k < K; ++k)
    for (int t = 0; t <= T; ++t)
      for (int x = 0; x < states; ++x)
        for (int vv = 0; vv < v[k]; ++vv)
          s.observation[s.observation_index(k, t, x, vv)] = static_cast<int>(rng() % static_cast<unsigned>(obs[k]));
  for (auto& c : s.cost) c = static_cast<double>(rng() % 33) / 8.0;
  s.init_dist = dist(states);
  for (int t = 0; t <= T; ++t) {
    s.w_dists[t] = dist(w);
    for (int k = 0; k < K; ++k) s.v_dists[t][k] = dist(v[k]);
  }
  return s;
}

}  // namespace oracle
