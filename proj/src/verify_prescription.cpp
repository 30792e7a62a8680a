// Prescription and positional-transfer suites.

#include <algorithm>

#include "womc/error.hpp"
#include "womc/kernels.hpp"
#include "womc/prescription.hpp"
#include "womc/random_instance.hpp"
#include "womc/solver.hpp"
#include "verify_internal.hpp"

namespace womc::detail {

namespace {

std::vector<Trajectory> trajectories_under(const Scenario& s, const std::vector<World>& worlds,
                                           const FullStrategy& psi) {
  std::vector<Trajectory> out;
  out.reserve(worlds.size());
  for (const auto& w : worlds)
    out.push_back(rollout(s, w, s.horizon + 1,
                          [&](int j, int t, const Trajectory& tr) { return strategy_action(psi, j, t, tr); }));
  return out;
}

// First (target, t, world) where the two strategies act differently.
std::string first_difference(const Scenario& s, const std::vector<Trajectory>& trs, const FullStrategy& a,
                             const FullStrategy& b) {
  for (std::size_t w = 0; w < trs.size(); ++w)
    for (int t = 0; t <= s.horizon; ++t)
      for (int i = 0; i < s.agent_count; ++i)
        if (strategy_action(a, i, t, trs[w]) != strategy_action(b, i, t, trs[w]))
          return "U" + std::to_string(i + 1) + "@" + std::to_string(t) + " differs on primitive assignment " +
                 std::to_string(w);
  return {};
}

bool domains_ok(const DelayMatrix& d, const FullStrategy& psi, std::string& where) {
  for (int j = 0; j < psi.agent_count(); ++j)
    for (std::size_t t = 0; t < psi.parts[j].size(); ++t) {
      const StrategyPart& p = psi.parts[j][t];
      const int tt = static_cast<int>(t);
      if (p.domain.labels() != prescription_domain(d, psi.owner, j, tt) ||
          p.cond.labels() != prescription_conditioning(d, psi.owner, j, tt) ||
          p.at(std::uint64_t{0}).domain.labels() != p.domain.labels()) {
        where = "owner " + std::to_string(psi.owner + 1) + " target " + std::to_string(j + 1) + " t=" +
                std::to_string(t);
        return false;
      }
    }
  return true;
}

}  // namespace

void prescription_checks(Suite& suite, const Instance& inst) {
  const Scenario& s = *inst.s;
  const DelayMatrix& d = inst.d;
  const int K = s.agent_count;
  Sink cons = suite.at("prescription_consistency", inst);
  Sink trip = suite.at("round_trip_identity", inst);
  Sink dom = suite.at("domain_correctness", inst);
  Sink comp = suite.at("transfer_composition", inst);
  std::vector<World> worlds;
  try {
    worlds = enumerate_worlds(s, inst.limits.primitive_cap);
  } catch (const Error&) {
    for (Sink* x : {&cons, &trip, &dom, &comp}) x->skip();
    return;
  }
  for (Sink* x : {&cons, &trip, &dom, &comp}) x->run();

  const int count = std::min(inst.strategies, 8);
  for (int r = 0; r < count; ++r)
    for (int k = 0; k < K; ++k) {
      const FullStrategy psi = random_strategy(s, d, k, derive_seed(inst.seed, 1000 + r * K + k));
      const auto trs = trajectories_under(s, worlds, psi);
      std::string where;
      if (!domains_ok(d, psi, where)) dom.violation([&] { return "random strategy, " + where; });
      if (!domains_ok(d, blank_strategy(s, d, k), where)) dom.violation([&] { return "blank strategy, " + where; });
      std::vector<FullStrategy> moved;
      for (int j = 0; j < K; ++j) {
        moved.push_back(positional_transfer(psi, j, s, d));
        if (!domains_ok(d, moved.back(), where)) dom.violation([&] { return "transferred strategy, " + where; });
        const std::string diff = first_difference(s, trs, psi, moved.back());
        if (!diff.empty())
          cons.violation([&] {
            return "strategy seed " + std::to_string(r) + " owner " + std::to_string(k + 1) + " -> " +
                   std::to_string(j + 1) + ": " + diff;
          });
      }
      if (r >= 3) continue;  // composition is quadratic in K; a few strategies suffice
      for (int j = 0; j < K; ++j)
        for (int i = 0; i < K; ++i) {
          const FullStrategy twice = positional_transfer(moved[j], i, s, d);
          const std::string diff = first_difference(s, trs, twice, moved[i]);
          if (!diff.empty())
            comp.violation([&] {
              return "owner " + std::to_string(k + 1) + " via " + std::to_string(j + 1) + " to " +
                     std::to_string(i + 1) + ": " + diff;
            });
        }
    }

  std::vector<std::vector<std::vector<std::uint64_t>>> reach;
  try {
    reach = reachable_memories(s, d, inst.limits);
  } catch (const Error&) {
    trip.skip();
    return;
  }
  for (int r = 0; r < inst.policies; ++r) {
    const Policy g = random_policy(s, d, derive_seed(inst.seed, 2000 + r));
    for (int k = 0; k < K; ++k) {
      const FullStrategy psi = policy_to_strategy(s, d, g, k);
      std::string where;
      if (!domains_ok(d, psi, where)) dom.violation([&] { return "policy strategy, " + where; });
      const Policy back = strategy_to_policy(s, d, psi);
      for (int j = 0; j < K; ++j)
        for (int t = 0; t <= s.horizon; ++t)
          for (auto m : reach[j][t])
            if (back.table(j, t).action[m] != g.table(j, t).action[m])
              trip.violation([&] {
                return "owner " + std::to_string(k + 1) + ": g^" + std::to_string(j + 1) + "_" + std::to_string(t) +
                       " changes at memory " + realization_key(s, g.table(j, t).memory.decode(m));
              });
    }
  }
}

}  // namespace womc::detail
