#include "womc/prescription.hpp"

#include <random>
#include <string>

#include "womc/error.hpp"
#include "womc/infostruct.hpp"

namespace womc {

InfoSet prescription_domain(const DelayMatrix& d, int k, int j, int t) {
  return j < k ? inaccessible_labels(d, j, k, t) : inaccessible_labels(d, j, j, t);
}

InfoSet prescription_conditioning(const DelayMatrix& d, int k, int j, int t) {
  return j < k ? accessible_labels(d, k, t) : accessible_labels(d, j, t);
}

int act(const PrescriptionFunction& gamma, const Realization& l) {
  if (l.labels != gamma.domain.labels()) {
    std::string missing, extra;
    for (const auto& x : set_difference(gamma.domain.labels(), l.labels)) missing += " " + to_string(x);
    for (const auto& x : set_difference(l.labels, gamma.domain.labels())) extra += " " + to_string(x);
    fail(Errc::DomainMismatch, "prescription of agent " + std::to_string(gamma.owner + 1) + " for agent " +
                                   std::to_string(gamma.target + 1) + " at t=" + std::to_string(gamma.time) +
                                   ": missing [" + missing + " ] extra [" + extra + " ]");
  }
  return gamma.table[gamma.domain.index(l)];
}

PrescriptionFunction StrategyPart::at(std::uint64_t cond_index) const {
  PrescriptionFunction g{owner, target, time, domain, {}};
  const auto D = domain.size();
  g.table.assign(table.begin() + static_cast<long>(cond_index * D), table.begin() + static_cast<long>((cond_index + 1) * D));
  return g;
}

FullStrategy blank_strategy(const Scenario& s, const DelayMatrix& d, int k) {
  FullStrategy psi;
  psi.owner = k;
  psi.parts.resize(static_cast<std::size_t>(s.agent_count));
  for (int j = 0; j < s.agent_count; ++j)
    for (int t = 0; t <= s.horizon; ++t) {
      StrategyPart p{k, j, t, Indexer(s, prescription_conditioning(d, k, j, t)),
                     Indexer(s, prescription_domain(d, k, j, t)), {}};
      const auto n = p.cond.size() * p.domain.size();
      if (p.cond.size() > kMaxTableEntries || n > kMaxTableEntries)
        fail(Errc::EnumerationCapExceeded, "strategy table for agent " + std::to_string(j + 1) + " at t=" +
                                               std::to_string(t) + " is too large");
      p.table.assign(n, -1);
      psi.parts[j].push_back(std::move(p));
    }
  return psi;
}

FullStrategy policy_to_strategy(const Scenario& s, const DelayMatrix& d, const Policy& g, int k) {
  FullStrategy psi = blank_strategy(s, d, k);
  for (int j = 0; j < s.agent_count; ++j)
    for (int t = 0; t <= s.horizon; ++t) {
      StrategyPart& p = psi.parts[j][t];
      const PolicyTable& tab = g.table(j, t);
      const auto D = p.domain.size();
      for (std::uint64_t c = 0; c < p.cond.size(); ++c) {
        const Realization a = p.cond.decode(c);
        for (std::uint64_t l = 0; l < D; ++l) {
          const Realization m = merge(a, p.domain.decode(l));
          const int u = tab.action[tab.memory.index(m)];
          if (u < 0)
            fail(Errc::UndefinedPolicyEntry, "policy of agent " + std::to_string(j + 1) + " at t=" +
                                                 std::to_string(t) + " is undefined on a memory realization");
          p.table[c * D + l] = u;
        }
      }
    }
  return psi;
}

Policy strategy_to_policy(const Scenario& s, const DelayMatrix& d, const FullStrategy& psi) {
  Policy g = Policy::blank(s, d);
  for (int j = 0; j < s.agent_count; ++j)
    for (int t = 0; t <= s.horizon; ++t) {
      const StrategyPart& p = psi.parts[j][t];
      PolicyTable& tab = g.table(j, t);
      for (std::uint64_t m = 0; m < tab.memory.size(); ++m) {
        const Realization r = tab.memory.decode(m);
        tab.action[m] = p.lookup(p.cond.index(r), p.domain.index(r));
      }
    }
  return g;
}

FullStrategy positional_transfer(const FullStrategy& psi, int j, const Scenario& s, const DelayMatrix& d) {
  return policy_to_strategy(s, d, strategy_to_policy(s, d, psi), j);
}

CompletePrescription complete_prescription(const FullStrategy& psi, int t, const Realization& a) {
  CompletePrescription theta{psi.owner, t, {}};
  for (int j = 0; j < psi.agent_count(); ++j) theta.parts.push_back(psi.parts[j][t].at(a));
  return theta;
}

int strategy_action(const FullStrategy& psi, int target, int t, const Trajectory& tr) {
  const StrategyPart& p = psi.parts[target][t];
  const int u = p.lookup(p.cond.index(tr), p.domain.index(tr));
  if (u < 0)
    fail(Errc::UndefinedPolicyEntry, "strategy of agent " + std::to_string(psi.owner + 1) + " has no entry for agent " +
                                         std::to_string(target + 1) + " at t=" + std::to_string(t));
  return u;
}

FullStrategy random_strategy(const Scenario& s, const DelayMatrix& d, int k, std::uint64_t seed) {
  FullStrategy psi = blank_strategy(s, d, k);
  std::mt19937_64 rng(seed);
  for (int j = 0; j < s.agent_count; ++j)
    for (int t = 0; t <= s.horizon; ++t) {
      const auto& f = s.feasible[j][t];
      for (int& u : psi.parts[j][t].table) u = f[rng() % f.size()];
    }
  return psi;
}

Policy random_policy(const Scenario& s, const DelayMatrix& d, std::uint64_t seed) {
  Policy g = Policy::blank(s, d);
  std::mt19937_64 rng(seed);
  for (int j = 0; j < s.agent_count; ++j)
    for (int t = 0; t <= s.horizon; ++t) {
      const auto& f = s.feasible[j][t];
      for (int& u : g.table(j, t).action) u = f[rng() % f.size()];
    }
  return g;
}

std::string realization_key(const Scenario& s, const Realization& r) {
  std::string out;
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    const VarLabel& l = r.labels.labels()[i];
    const auto& sp = l.kind == Kind::Obs ? s.obs_spaces[l.agent] : s.action_spaces[l.agent];
    if (i) out += ",";
    out += to_string(l) + "=" + sp.values[r.values[i]];
  }
  return out;
}

}  // namespace womc
