#include "womc/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "womc/belief.hpp"
#include "womc/error.hpp"
#include "womc/infostruct.hpp"
#include "womc/kernels.hpp"
#include "odometer.hpp"

namespace womc {

std::string method_name(Method m) {
  switch (m) {
    case Method::Brute: return "brute";
    case Method::CommonInfo: return "common-info";
    case Method::Structural: return "structural";
  }
  return "?";
}

double evaluate_policy(const Scenario& s, const DelayMatrix&, const Policy& g, const Limits& limits) {
  return expected_total_cost(s, enumerate_worlds(s, limits.primitive_cap), g, limits.jobs);
}

double evaluate_policy_serial(const Scenario& s, const DelayMatrix&, const Policy& g, const Limits& limits) {
  return expected_total_cost_serial(s, enumerate_worlds(s, limits.primitive_cap), g);
}

double evaluate_strategy(const Scenario& s, const DelayMatrix&, const FullStrategy& psi, const Limits& limits) {
  const auto worlds = enumerate_worlds(s, limits.primitive_cap);
  const auto contrib = parallel_map(worlds.size(), limits.jobs, [&](std::uint64_t i) {
    const Trajectory tr = rollout(s, worlds[i], s.horizon + 1, [&](int j, int t, const Trajectory& p) {
      return strategy_action(psi, j, t, p);
    });
    return worlds[i].prob * tr.total_cost();
  });
  double sum = 0.0;
  for (double c : contrib) sum += c;
  return sum;
}

std::vector<std::vector<std::vector<std::uint64_t>>> reachable_memories(const Scenario& s, const DelayMatrix& d,
                                                                        const Limits& limits) {
  const int K = s.agent_count;
  const int T = s.horizon;
  std::vector<std::vector<Indexer>> mem(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
    for (int t = 0; t <= T; ++t) mem[k].emplace_back(s, memory_labels(d, k, t));
  std::vector<std::vector<std::set<std::uint64_t>>> seen(static_cast<std::size_t>(K),
                                                         std::vector<std::set<std::uint64_t>>(T + 1));
  std::vector<Trajectory> prefixes;
  for (const World& w : enumerate_worlds(s, limits.primitive_cap)) prefixes.push_back(start_trajectory(s, w));
  for (int t = 0; t <= T; ++t) {
    for (const auto& tr : prefixes)
      for (int k = 0; k < K; ++k) seen[k][t].insert(mem[k][t].index(tr));
    if (t == T) break;
    // Every feasible joint action.
    std::vector<std::vector<int>> joints{{}};
    for (int k = 0; k < K; ++k) {
      std::vector<std::vector<int>> grown;
      for (const auto& p : joints)
        for (int a : s.feasible[k][t]) {
          auto q = p;
          q.push_back(a);
          grown.push_back(std::move(q));
        }
      joints = std::move(grown);
    }
    if (prefixes.size() * joints.size() > limits.primitive_cap)
      fail(Errc::EnumerationCapExceeded, "open-loop prefixes at t=" + std::to_string(t + 1) + " exceed cap " +
                                             std::to_string(limits.primitive_cap));
    // Prefixes agreeing on every variable observed so far are merged.
    std::map<std::tuple<std::vector<int>, std::vector<int>, std::vector<int>, std::vector<int>, std::vector<int>>, int>
        unique;
    std::vector<Trajectory> next;
    for (const auto& tr : prefixes)
      for (const auto& u : joints) {
        Trajectory n = tr;
        advance_trajectory(s, n, t, u);
        auto key = std::make_tuple(n.states, n.obs, n.act, n.w, n.v);
        if (unique.emplace(std::move(key), 0).second) next.push_back(std::move(n));
      }
    prefixes = std::move(next);
  }
  std::vector<std::vector<std::vector<std::uint64_t>>> out(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
    for (int t = 0; t <= T; ++t) out[k].emplace_back(seen[k][t].begin(), seen[k][t].end());
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Coordinator dynamic program for the last agent.
class CommonInfoDp {
 public:
  CommonInfoDp(const Scenario& s, const DelayMatrix& d, const Limits& limits) : s_(s), d_(d), limits_(limits) {
    k_ = s.agent_count - 1;
    for (int t = 0; t <= s.horizon; ++t) plans_.emplace_back(s, d, k_, t);
    memo_.resize(static_cast<std::size_t>(s.horizon + 1));
    buckets_.resize(static_cast<std::size_t>(s.horizon + 1));
  }

  double value(const BeliefState& pi) { return solve(pi).value; }

  const CompletePrescription& best(const BeliefState& pi) { return solve(pi).best; }
  std::uint64_t candidates() const { return candidates_; }

 private:
  struct Node {
    BeliefState pi;
    double value = 0.0;
    CompletePrescription best;
  };

  static std::size_t support_hash(const BeliefState& pi) {
    std::size_t h = pi.probs.size();
    for (const auto& e : pi.probs) h = h * 1000003u ^ std::hash<std::uint64_t>{}(e.first);
    return h;
  }

  Node& solve(const BeliefState& pi) {
    const int t = pi.time;
    const std::size_t h = support_hash(pi);
    for (int id : buckets_[t][h]) {
      Node& n = memo_[t][id];
      if (n.pi.probs.size() == pi.probs.size() && linf_distance(n.pi, pi) <= 1e-9) {
        bool same_support = true;
        for (std::size_t i = 0; i < pi.probs.size() && same_support; ++i)
          same_support = n.pi.probs[i].first == pi.probs[i].first;
        if (same_support) return n;
      }
    }
    Node computed = compute(pi);
    memo_[t].push_back(std::move(computed));
    const int id = static_cast<int>(memo_[t].size()) - 1;
    buckets_[t][h].push_back(id);
    return memo_[t][id];
  }

  Node compute(const BeliefState& pi) {
    const int t = pi.time;
    const int K = s_.agent_count;
    const StepPlan& plan = plans_[t];
    // Prescription entries that matter: domain realizations in the support.
    std::vector<std::vector<std::uint64_t>> slots(static_cast<std::size_t>(K));
    {
      std::vector<std::set<std::uint64_t>> sets(static_cast<std::size_t>(K));
      std::vector<int> current;
      for (const auto& e : pi.probs) {
        plan.decode(e.first, current);
        for (int j = 0; j < K; ++j) sets[j].insert(plan.domain_index(j, current));
      }
      for (int j = 0; j < K; ++j) slots[j].assign(sets[j].begin(), sets[j].end());
    }
    CompletePrescription theta{k_, t, {}};
    for (int j = 0; j < K; ++j) {
      const Indexer& dom = plan.domain(j);
      if (dom.size() > kMaxTableEntries) fail(Errc::EnumerationCapExceeded, "prescription domain too large");
      theta.parts.push_back({k_, j, t, dom, std::vector<int>(dom.size(), s_.feasible[j][t][0])});
    }
    // Mixed-radix enumeration over (target, slot) choices.
    std::vector<std::pair<int, std::uint64_t>> vars;
    double log_count = 0.0;
    for (int j = 0; j < K; ++j)
      for (auto l : slots[j]) {
        vars.emplace_back(j, l);
        log_count += std::log(static_cast<double>(s_.feasible[j][t].size()));
      }
    if (log_count > std::log(static_cast<double>(limits_.policy_cap)) + 1e-9)
      fail(Errc::EnumerationCapExceeded, "prescriptions at t=" + std::to_string(t) + " exceed cap " +
                                             std::to_string(limits_.policy_cap));
    std::vector<std::size_t> digit(vars.size(), 0), radix;
    for (const auto& v : vars) radix.push_back(s_.feasible[v.first][t].size());
    Node best{pi, std::numeric_limits<double>::infinity(), theta};
    do {
      for (std::size_t i = 0; i < vars.size(); ++i)
        theta.parts[vars[i].first].table[vars[i].second] = s_.feasible[vars[i].first][t][digit[i]];
      ++candidates_;
      double v = expected_cost(s_, plan, pi, theta);
      if (t < s_.horizon)
        for (const auto& o : belief_outcomes(s_, plan, pi, theta)) v += o.prob * value(o.next);
      if (v < best.value) {
        best.value = v;
        best.best = theta;
      }
    } while (detail::next_combination(digit, radix));
    return best;
  }

  const Scenario& s_;
  const DelayMatrix& d_;
  const Limits& limits_;
  int k_ = 0;
  std::vector<StepPlan> plans_;
  std::vector<std::vector<Node>> memo_;
  std::vector<std::unordered_map<std::size_t, std::vector<int>>> buckets_;
  std::uint64_t candidates_ = 0;
};

void fill_unset(const Scenario& s, FullStrategy& psi) {
  for (int j = 0; j < psi.agent_count(); ++j)
    for (int t = 0; t <= s.horizon; ++t)
      for (int& u : psi.parts[j][t].table)
        if (u < 0) u = s.feasible[j][t][0];
}

}  // namespace

SolveResult common_info_dp(const Scenario& s, const DelayMatrix& d, const Limits& limits) {
  const auto start = Clock::now();
  const int k = s.agent_count - 1;
  CommonInfoDp dp(s, d, limits);
  FullStrategy psi = blank_strategy(s, d, k);
  double v0 = 0.0;
  // Forward pass over reachable accessible realizations, recording the greedy prescriptions.
  std::vector<std::pair<BeliefState, double>> frontier;
  for (auto& o : initial_outcomes(s, d, k, limits.primitive_cap)) {
    v0 += o.prob * dp.value(o.next);
    frontier.emplace_back(std::move(o.next), o.prob);
  }
  for (int t = 0; t <= s.horizon; ++t) {
    std::vector<std::pair<BeliefState, double>> next;
    StepPlan plan(s, d, k, t);
    for (const auto& [pi, p] : frontier) {
      const CompletePrescription theta = dp.best(pi);
      for (int j = 0; j < s.agent_count; ++j) {
        StrategyPart& part = psi.parts[j][t];
        const auto c = part.cond.index(pi.accessible);
        const auto D = part.domain.size();
        for (std::uint64_t l = 0; l < D; ++l) part.table[c * D + l] = theta.parts[j].table[l];
      }
      if (t < s.horizon)
        for (auto& o : belief_outcomes(s, plan, pi, theta)) next.emplace_back(std::move(o.next), p * o.prob);
    }
    frontier = std::move(next);
  }
  fill_unset(s, psi);
  SolveResult r;
  r.method = Method::CommonInfo;
  r.agent = k;
  r.value = v0;
  r.strategy = std::move(psi);
  r.candidates = dp.candidates();
  r.seconds = seconds_since(start);
  return r;
}

bool DomainReport::all_subset() const {
  for (const auto& c : cells)
    if (!c.subset) return false;
  return true;
}

DomainReport domain_comparison(const Scenario& s, const DelayMatrix& d) {
  DomainReport rep;
  const int K = s.agent_count;
  for (int k = 0; k < K; ++k)
    for (int t = 0; t <= s.horizon; ++t) {
      const InfoSet own = inaccessible_labels(d, k, k, t);
      const InfoSet last = inaccessible_labels(d, k, K - 1, t);
      DomainCell c;
      c.agent = k;
      c.time = t;
      c.own_labels = own.size();
      c.last_labels = last.size();
      c.own_realizations = Indexer(s, own).size();
      c.last_realizations = Indexer(s, last).size();
      c.subset = is_subset(own, last);
      rep.cells.push_back(c);
    }
  return rep;
}

}  // namespace womc
