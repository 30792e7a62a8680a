// Belief suites. For every agent k and a family of strategies owned by k,
// primitive assignments are propagated and grouped by the accessible
// realization; each group is one reachable conditioning history.

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "womc/belief.hpp"
#include "womc/error.hpp"
#include "womc/infostruct.hpp"
#include "womc/kernels.hpp"
#include "womc/random_instance.hpp"
#include "verify_internal.hpp"

namespace womc::detail {

namespace {

constexpr double kTol = 1e-9;

struct Node {
  Realization a;
  double prob = 0.0;
  std::vector<int> members;  // world indices
  std::vector<CompletePrescription> thetas;  // Theta_0..Theta_t
  BeliefState grouped;   // from the enumerated group
  BeliefState chained;   // filter output
  double cost = 0.0;     // E[c_t | a]
};

bool same_theta(const CompletePrescription& a, const CompletePrescription& b) {
  if (a.parts.size() != b.parts.size()) return false;
  for (std::size_t j = 0; j < a.parts.size(); ++j)
    if (a.parts[j].table != b.parts[j].table) return false;
  return true;
}

std::vector<std::int64_t> theta_key(const CompletePrescription& theta) {
  std::vector<std::int64_t> out;
  for (const auto& p : theta.parts) {
    out.push_back(-1);
    out.insert(out.end(), p.table.begin(), p.table.end());
  }
  return out;
}

using Distribution = std::vector<std::pair<double, BeliefState>>;

Distribution merged(const Distribution& in) {
  Distribution out;
  for (const auto& [p, b] : in) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return linf_distance(e.second, b) <= kTol; });
    if (it == out.end())
      out.emplace_back(p, b);
    else
      it->first += p;
  }
  return out;
}

double distribution_gap(const Distribution& a, const Distribution& b) {
  double gap = 0.0;
  auto one_way = [&](const Distribution& x, const Distribution& y) {
    for (const auto& [p, bx] : x) {
      double q = 0.0;
      for (const auto& [py, by] : y)
        if (linf_distance(bx, by) <= kTol) q += py;
      gap = std::max(gap, std::abs(p - q));
    }
  };
  one_way(a, b);
  one_way(b, a);
  return gap;
}

struct MarkovRep {
  BeliefState pi;
  CompletePrescription theta;
  Distribution next;
  std::string origin;
};

struct FilterRep {
  BeliefState pi;
  CompletePrescription theta;
  Realization z;
  BeliefState next;
  std::string origin;
};

std::vector<FullStrategy> strategy_family(const Scenario& s, const DelayMatrix& d, int k, const Instance& inst) {
  std::vector<FullStrategy> out;
  const int K = s.agent_count;
  // Constant profiles first: they share prescriptions and so exercise the grouping.
  std::vector<int> digit(static_cast<std::size_t>(K), 0);
  for (int n = 0; n < 8; ++n) {
    std::vector<int> actions;
    for (int j = 0; j < K; ++j) actions.push_back(s.feasible[j][0][digit[j] % s.feasible[j][0].size()]);
    out.push_back(policy_to_strategy(s, d, Policy::constant(s, d, actions), k));
    int j = K - 1;
    while (j >= 0 && ++digit[j] == static_cast<int>(s.action_spaces[j].values.size())) digit[j--] = 0;
    if (j < 0) break;
  }
  for (int r = 0; r < inst.strategies; ++r) {
    const std::uint64_t seed = derive_seed(inst.seed, 3000 + r * K + k);
    if (r % 2 == 0)
      out.push_back(policy_to_strategy(s, d, random_policy(s, d, seed), k));
    else
      out.push_back(random_strategy(s, d, k, seed));
  }
  return out;
}

std::string state_text(const Scenario& s, const StepPlan& plan, int x, std::uint64_t l) {
  return "x=" + s.state_space.values[x] + " l=(" + realization_key(s, plan.current().decode(l)) + ")";
}

}  // namespace

void belief_checks(Suite& suite, const Instance& inst) {
  const Scenario& s = *inst.s;
  const DelayMatrix& d = inst.d;
  const int K = s.agent_count;
  const int T = s.horizon;
  Sink filter = suite.at("filter_correctness", inst);
  Sink indep = suite.at("policy_independence", inst);
  Sink markov = suite.at("markov_property", inst);
  Sink cost = suite.at("cost_property", inst);
  Sink norm = suite.at("belief_normalization", inst);
  Sink wits = suite.at("witsenhausen_determinism", inst);
  Sink* all[] = {&filter, &indep, &markov, &cost, &norm, &wits};

  std::vector<World> worlds;
  try {
    worlds = enumerate_worlds(s, inst.limits.primitive_cap);
    for (int k = 0; k < K; ++k)
      for (int t = 0; t <= T; ++t) StepPlan(s, d, k, t);
  } catch (const Error&) {
    for (Sink* x : all) x->skip();
    return;
  }
  for (Sink* x : all) x->run();

  // Predictor model for the determinism check.
  Scenario predictor = s;
  bool corrupted = false;

  for (int k = 0; k < K; ++k) {
    std::vector<StepPlan> plans;
    std::vector<Indexer> acc;
    for (int t = 0; t <= T; ++t) {
      plans.emplace_back(s, d, k, t);
      acc.emplace_back(s, accessible_labels(d, k, t));
    }
    const auto initial = initial_outcomes(s, d, k, inst.limits.primitive_cap);
    const auto family = strategy_family(s, d, k, inst);
    std::vector<std::vector<MarkovRep>> markov_reps(static_cast<std::size_t>(T + 1));
    std::vector<std::vector<FilterRep>> filter_reps(static_cast<std::size_t>(T + 1));
    std::vector<std::map<std::vector<std::int64_t>, std::vector<std::int64_t>>> step_seen(T + 1);
    std::vector<std::map<std::vector<std::int64_t>, double>> cost_seen(T + 1);

    for (std::size_t r = 0; r < family.size(); ++r) {
      const FullStrategy& psi = family[r];
      const std::string origin = "agent " + std::to_string(k + 1) + " strategy " + std::to_string(r);
      std::vector<Trajectory> trs;
      for (const auto& w : worlds)
        trs.push_back(rollout(s, w, T + 1, [&](int j, int t, const Trajectory& p) { return strategy_action(psi, j, t, p); }));
      if (inst.corrupt && !corrupted && s.state_space.size() > 1) {
        const Trajectory& tr = trs[0];
        std::vector<int> u;
        for (int j = 0; j < K; ++j) u.push_back(tr.u(0, j));
        int& entry = predictor.transition[s.transition_index(0, tr.states[0], s.pack_actions(u), tr.w[0])];
        entry = (entry + 1) % s.state_space.size();
        corrupted = true;
      }

      // Reachable histories, level by level.
      std::vector<std::map<std::uint64_t, Node>> nodes(static_cast<std::size_t>(T + 1));
      for (int t = 0; t <= T; ++t) {
        const Indexer& sl = plans[t].current();
        for (std::size_t w = 0; w < trs.size(); ++w) {
          Node& n = nodes[t][acc[t].index(trs[w])];
          n.prob += worlds[w].prob;
          n.members.push_back(static_cast<int>(w));
        }
        for (auto& [ai, n] : nodes[t]) {
          n.a = acc[t].decode(ai);
          std::map<std::uint64_t, double> mass;
          for (int w : n.members) {
            mass[static_cast<std::uint64_t>(trs[w].states[t]) * sl.size() + sl.index(trs[w])] += worlds[w].prob;
            n.cost += worlds[w].prob * trs[w].stage_costs[t];
          }
          n.cost /= n.prob;
          n.grouped = BeliefState{k, t, sl, n.a, {}};
          for (const auto& [key, p] : mass) n.grouped.probs.emplace_back(key, p / n.prob);
          if (t == 0) {
            for (const auto& o : initial)
              if (o.z == n.a) n.chained = o.next;
          } else {
            const Node& parent = nodes[t - 1].at(acc[t - 1].index(n.a));
            n.thetas = parent.thetas;
            const Realization z = n.a.project(new_info_labels(d, k, t));
            n.chained = belief_update(s, d, parent.chained, parent.thetas.back(), z);
          }
          n.thetas.push_back(complete_prescription(psi, t, n.a));

          const auto where = [&, t = t] { return origin + " t=" + std::to_string(t) + " a=(" + realization_key(s, n.a) + ")"; };
          std::vector<CompletePrescription> before(n.thetas.begin(), n.thetas.end() - 1);
          const BeliefState scratch = belief_from_scratch(s, d, k, n.a, before, inst.limits.primitive_cap);
          filter.deviation(std::max(linf_distance(n.chained, n.grouped), linf_distance(scratch, n.grouped)), kTol, where);
          for (const BeliefState* b : {&std::as_const(n.chained), &std::as_const(n.grouped), &scratch})
            norm.deviation(std::abs(b->total() - 1.0), kTol, where);
          cost.deviation(std::abs(expected_cost(s, plans[t], n.chained, n.thetas.back()) - n.cost), kTol, where);
        }
      }

      // Transitions between consecutive levels.
      for (int t = 0; t < T; ++t)
        for (const auto& [ai, n] : nodes[t]) {
          Distribution next;
          for (const auto& [ci, child] : nodes[t + 1]) {
            if (acc[t].index(child.a) != ai) continue;
            next.emplace_back(child.prob / n.prob, child.grouped);
            const Realization z = child.a.project(new_info_labels(d, k, t + 1));
            const std::string here = origin + " t=" + std::to_string(t) + " z=(" + realization_key(s, z) + ")";
            bool found = false;
            for (const auto& rep : filter_reps[t])
              if (linf_distance(rep.pi, n.grouped) <= kTol && same_theta(rep.theta, n.thetas.back()) && rep.z == z) {
                found = true;
                indep.deviation(linf_distance(rep.next, child.grouped), kTol,
                                [&] { return here + " vs " + rep.origin; });
                break;
              }
            if (!found) filter_reps[t].push_back({n.grouped, n.thetas.back(), z, child.grouped, here});
          }
          next = merged(next);
          const std::string here = origin + " t=" + std::to_string(t) + " a=(" + realization_key(s, n.a) + ")";
          bool found = false;
          for (const auto& rep : markov_reps[t])
            if (linf_distance(rep.pi, n.grouped) <= kTol && same_theta(rep.theta, n.thetas.back())) {
              found = true;
              markov.deviation(distribution_gap(rep.next, next), kTol, [&] { return here + " vs " + rep.origin; });
              break;
            }
          if (!found) markov_reps[t].push_back({n.grouped, n.thetas.back(), std::move(next), here});
        }

      // Determinism of the sufficient-state step on every trajectory.
      for (std::size_t w = 0; w < trs.size(); ++w) {
        const Trajectory& tr = trs[w];
        for (int t = 0; t <= T; ++t) {
          const StepPlan& plan = plans[t];
          const Node& n = nodes[t].at(acc[t].index(tr));
          const CompletePrescription& theta = n.thetas.back();
          const std::uint64_t l = plan.current().index(tr);
          const int x = tr.states[t];
          std::vector<std::int64_t> key{x, static_cast<std::int64_t>(l)};
          const auto tk = theta_key(theta);
          key.insert(key.end(), tk.begin(), tk.end());
          const auto where = [&] {
            return origin + " t=" + std::to_string(t) + " " + state_text(s, plan, x, l) + " w=" +
                   s.w_space.values[tr.w[t]] + " primitive assignment " + std::to_string(w);
          };
          const auto [cit, cnew] = cost_seen[t].emplace(key, tr.stage_costs[t]);
          if (!cnew && cit->second != tr.stage_costs[t]) wits.violation([&] { return where() + ": stage cost not determined"; });
          const SufficientState st{k, t, x, plan.current().decode(l)};
          if (stage_cost_hat(predictor, st, theta) != tr.stage_costs[t])
            wits.violation([&] { return where() + ": predicted stage cost differs"; });
          if (t == T) continue;

          std::vector<int> current(plan.current().labels().size()), access(plan.accessible().labels().size());
          for (std::size_t p = 0; p < current.size(); ++p) current[p] = tr.value(plan.current().labels().labels()[p]);
          for (std::size_t p = 0; p < access.size(); ++p) access[p] = tr.value(plan.accessible().labels().labels()[p]);
          std::vector<int> u, v_next;
          plan.actions(theta, current, u);
          for (int j = 0; j < K; ++j) v_next.push_back(tr.v[(t + 1) * K + j]);
          const std::int64_t out_x = tr.states[t + 1];
          const auto out_l = static_cast<std::int64_t>(plan.next().index(tr));
          const auto out_z = static_cast<std::int64_t>(plan.new_info().index(tr));

          auto step_key = key;
          step_key.push_back(tr.w[t]);
          step_key.insert(step_key.end(), v_next.begin(), v_next.end());
          const std::vector<std::int64_t> out{out_x, out_l, out_z};
          const auto [it, fresh] = step_seen[t].emplace(step_key, out);
          if (!fresh && it->second != out)
            wits.violation([&] { return where() + ": (S_{t+1}, Z_{t+1}) not determined by (S_t, W_t, V_{t+1}, Theta_t)"; });

          int px = 0;
          std::uint64_t pl = 0, pz = 0;
          bool ok = true;
          for (int j = 0; j < K; ++j) ok = ok && u[j] == tr.u(t, j);
          ok = ok && plan.advance(predictor, x, current, &access, u, tr.w[t], v_next, px, pl, pz);
          if (!ok || px != out_x || static_cast<std::int64_t>(pl) != out_l || static_cast<std::int64_t>(pz) != out_z)
            wits.violation([&] {
              const StepPlan& nx = plans[t + 1];
              return where() + ": predicted next " + state_text(s, nx, px, pl) + ", enumerated " +
                     state_text(s, nx, static_cast<int>(out_x), static_cast<std::uint64_t>(out_l));
            });
        }
      }
    }
  }
}

}  // namespace womc::detail
