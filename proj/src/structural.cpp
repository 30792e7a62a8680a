// Search over strategies of agent k whose prescriptions depend on accessible
// information only through belief tuples (Pi^k..Pi^K for targets below k,
// Pi^i..Pi^K for targets i at or beyond k). Stages are explored forward;
// beliefs of the beyond agents are computed under the partial policy fixed
// so far, which is action-equivalent to their transferred strategies.

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "odometer.hpp"
#include "womc/belief.hpp"
#include "womc/error.hpp"
#include "womc/infostruct.hpp"
#include "womc/kernels.hpp"
#include "womc/solver.hpp"

namespace womc {

namespace {

using Dense = std::vector<std::vector<int>>;  // [t][memory index]

struct Best {
  double value = std::numeric_limits<double>::infinity();
  std::vector<Dense> policy;
};

class Structural {
 public:
  Structural(const Scenario& s, const DelayMatrix& d, int k, const Limits& limits)
      : s_(s), k_(k), limits_(limits) {
    const int K = s.agent_count;
    for (int j = 0; j < K; ++j) {
      mem_.emplace_back();
      dom_.emplace_back();
      acc_.emplace_back();
      suff_.emplace_back();
      for (int t = 0; t <= s.horizon; ++t) {
        mem_[j].emplace_back(s, memory_labels(d, j, t));
        dom_[j].emplace_back(s, prescription_domain(d, k, j, t));
        acc_[j].emplace_back(s, accessible_labels(d, j, t));
        suff_[j].emplace_back(s, sufficient_labels(d, j, t));
        if (mem_[j][t].size() > kMaxTableEntries)
          fail(Errc::EnumerationCapExceeded, "memory of agent " + std::to_string(j + 1) + " is too large");
      }
    }
    worlds_ = enumerate_worlds(s, limits.primitive_cap);
  }

  Best run() {
    std::vector<Trajectory> trs;
    for (const auto& w : worlds_) trs.push_back(start_trajectory(s_, w));
    std::vector<Dense> g;
    for (int j = 0; j < s_.agent_count; ++j) {
      g.emplace_back();
      for (int t = 0; t <= s_.horizon; ++t) g[j].emplace_back(mem_[j][t].size(), -1);
    }
    Best best;
    stage(0, trs, g, best);
    return best;
  }

  std::uint64_t leaves() const { return leaves_.load(); }

 private:
  struct Slots {
    std::vector<std::vector<int>> of_world;  // [part][world] -> slot
    std::vector<int> count;                  // [part]
  };

  // Belief ids per beyond agent j, indexed by A^j_t realization.
  std::vector<std::map<std::uint64_t, int>> belief_ids(int t, const std::vector<Trajectory>& trs) const {
    const int K = s_.agent_count;
    std::vector<std::map<std::uint64_t, int>> ids(static_cast<std::size_t>(K));
    for (int j = k_; j < K; ++j) {
      std::map<std::uint64_t, std::map<std::uint64_t, double>> mass;
      for (std::size_t w = 0; w < trs.size(); ++w)
        mass[acc_[j][t].index(trs[w])]
            [static_cast<std::uint64_t>(trs[w].states[t]) * suff_[j][t].size() + suff_[j][t].index(trs[w])] +=
            worlds_[w].prob;
      std::vector<std::vector<std::pair<std::uint64_t, double>>> distinct;
      for (const auto& [a, m] : mass) {
        double total = 0.0;
        for (const auto& e : m) total += e.second;
        std::vector<std::pair<std::uint64_t, double>> b;
        for (const auto& e : m) b.emplace_back(e.first, e.second / total);
        int id = -1;
        for (std::size_t q = 0; q < distinct.size() && id < 0; ++q) {
          const auto& o = distinct[q];
          if (o.size() != b.size()) continue;
          bool same = true;
          for (std::size_t x = 0; x < b.size() && same; ++x)
            same = o[x].first == b[x].first && std::abs(o[x].second - b[x].second) <= 1e-9;
          if (same) id = static_cast<int>(q);
        }
        if (id < 0) {
          id = static_cast<int>(distinct.size());
          distinct.push_back(std::move(b));
        }
        ids[j][a] = id;
      }
    }
    return ids;
  }

  Slots make_slots(int t, const std::vector<Trajectory>& trs) const {
    const int K = s_.agent_count;
    const auto ids = belief_ids(t, trs);
    Slots sl;
    for (int i = 0; i < K; ++i) {
      std::map<std::vector<int>, int> groups;
      std::map<std::pair<int, std::uint64_t>, int> slots;
      std::vector<std::pair<int, std::uint64_t>> keys(trs.size());
      for (std::size_t w = 0; w < trs.size(); ++w) {
        std::vector<int> tuple;
        for (int j = std::max(i, k_); j < K; ++j) tuple.push_back(ids[j].at(acc_[j][t].index(trs[w])));
        const int g = groups.emplace(tuple, static_cast<int>(groups.size())).first->second;
        keys[w] = {g, dom_[i][t].index(trs[w])};
        slots.emplace(keys[w], 0);
      }
      int n = 0;
      for (auto& e : slots) e.second = n++;  // canonical (group, domain) order
      std::vector<int> of(trs.size());
      for (std::size_t w = 0; w < trs.size(); ++w) of[w] = slots.at(keys[w]);
      sl.of_world.push_back(std::move(of));
      sl.count.push_back(n);
    }
    return sl;
  }

  double prefix_cost(int t, const std::vector<Trajectory>& trs) const {
    double v = 0.0;
    for (std::size_t w = 0; w < trs.size(); ++w) {
      double c = 0.0;
      for (int tau = 0; tau < t; ++tau) c += trs[w].stage_costs[tau];
      v += worlds_[w].prob * c;
    }
    return v;
  }

  void count_leaf() {
    if (++leaves_ > limits_.policy_cap)
      fail(Errc::EnumerationCapExceeded, "structural candidates exceed cap " + std::to_string(limits_.policy_cap));
  }

  void check_combinations(int t, const Slots& sl, int skip) const {
    double log_count = 0.0;
    for (int i = 0; i < s_.agent_count; ++i)
      if (i != skip) log_count += sl.count[i] * std::log(static_cast<double>(s_.feasible[i][t].size()));
    if (log_count > std::log(static_cast<double>(limits_.policy_cap)) + 1e-9)
      fail(Errc::EnumerationCapExceeded, "structural prescriptions at t=" + std::to_string(t) + " exceed cap " +
                                             std::to_string(limits_.policy_cap));
  }

  void stage(int t, const std::vector<Trajectory>& trs, const std::vector<Dense>& g, Best& best) {
    const int K = s_.agent_count;
    const Slots sl = make_slots(t, trs);
    if (t == s_.horizon) {
      final_stage(t, trs, g, sl, best);
      return;
    }
    check_combinations(t, sl, -1);
    std::vector<std::pair<int, int>> vars;  // (part, slot)
    std::vector<std::size_t> radix;
    for (int i = 0; i < K; ++i)
      for (int q = 0; q < sl.count[i]; ++q) {
        vars.emplace_back(i, q);
        radix.push_back(s_.feasible[i][t].size());
      }
    std::vector<std::vector<std::size_t>> combos;
    std::vector<std::size_t> digit(vars.size(), 0);
    do combos.push_back(digit);
    while (detail::next_combination(digit, radix));

    std::vector<int> offset(static_cast<std::size_t>(K), 0);
    for (int i = 1; i < K; ++i) offset[i] = offset[i - 1] + sl.count[i - 1];
    auto branch = [&](const std::vector<std::size_t>& choice, Best& out) {
      std::vector<Trajectory> next = trs;
      std::vector<Dense> gn = g;
      std::vector<int> u(static_cast<std::size_t>(K));
      for (std::size_t w = 0; w < next.size(); ++w) {
        for (int i = 0; i < K; ++i) {
          u[i] = s_.feasible[i][t][choice[offset[i] + sl.of_world[i][w]]];
          gn[i][t][mem_[i][t].index(next[w])] = u[i];
        }
        advance_trajectory(s_, next[w], t, u);
      }
      stage(t + 1, next, gn, out);
    };

    if (t == 0 && limits_.jobs > 1) {
      std::vector<Best> results(combos.size());
      parallel_map(combos.size(), limits_.jobs, [&](std::uint64_t c) {
        branch(combos[c], results[c]);
        return 0.0;
      });
      for (auto& r : results)
        if (r.value < best.value) best = std::move(r);
    } else {
      for (const auto& c : combos) branch(c, best);
    }
  }

  void final_stage(int t, const std::vector<Trajectory>& trs, const std::vector<Dense>& g, const Slots& sl, Best& best) {
    const int K = s_.agent_count;
    int responder = 0;
    for (int i = 1; i < K; ++i)
      if (sl.count[i] > sl.count[responder]) responder = i;
    check_combinations(t, sl, responder);
    std::vector<std::pair<int, int>> vars;
    std::vector<std::size_t> radix;
    for (int i = 0; i < K; ++i) {
      if (i == responder) continue;
      for (int q = 0; q < sl.count[i]; ++q) {
        vars.emplace_back(i, q);
        radix.push_back(s_.feasible[i][t].size());
      }
    }
    std::vector<int> offset(static_cast<std::size_t>(K), 0);
    for (int i = 0, o = 0; i < K; ++i) {
      offset[i] = o;
      if (i != responder) o += sl.count[i];
    }
    const double base = prefix_cost(t, trs);
    const auto& fr = s_.feasible[responder][t];
    std::vector<std::size_t> digit(vars.size(), 0);
    std::vector<int> u(static_cast<std::size_t>(K));
    do {
      count_leaf();
      std::vector<std::vector<double>> slot_cost(static_cast<std::size_t>(sl.count[responder]),
                                                 std::vector<double>(fr.size(), 0.0));
      for (std::size_t w = 0; w < trs.size(); ++w) {
        for (int i = 0; i < K; ++i)
          if (i != responder) u[i] = s_.feasible[i][t][digit[offset[i] + sl.of_world[i][w]]];
        for (std::size_t a = 0; a < fr.size(); ++a) {
          u[responder] = fr[a];
          slot_cost[sl.of_world[responder][w]][a] +=
              worlds_[w].prob * s_.stage_cost(t, trs[w].states[t], s_.pack_actions(u));
        }
      }
      double v = base;
      std::vector<std::size_t> pick(slot_cost.size(), 0);
      for (std::size_t q = 0; q < slot_cost.size(); ++q) {
        for (std::size_t a = 1; a < fr.size(); ++a)
          if (slot_cost[q][a] < slot_cost[q][pick[q]]) pick[q] = a;
        v += slot_cost[q][pick[q]];
      }
      if (v < best.value) {
        best.value = v;
        best.policy = g;
        for (std::size_t w = 0; w < trs.size(); ++w)
          for (int i = 0; i < K; ++i) {
            const int a = i == responder ? fr[pick[sl.of_world[i][w]]]
                                         : s_.feasible[i][t][digit[offset[i] + sl.of_world[i][w]]];
            best.policy[i][t][mem_[i][t].index(trs[w])] = a;
          }
      }
    } while (detail::next_combination(digit, radix));
  }

  const Scenario& s_;
  int k_;
  const Limits& limits_;
  std::vector<std::vector<Indexer>> mem_, dom_, acc_, suff_;
  std::vector<World> worlds_;
  std::atomic<std::uint64_t> leaves_{0};
};

}  // namespace

SolveResult structural_search(const Scenario& s, const DelayMatrix& d, int k, const Limits& limits) {
  if (k < 0 || k >= s.agent_count) fail(Errc::InvalidAgent, "agent " + std::to_string(k + 1) + " does not exist");
  const auto start = std::chrono::steady_clock::now();
  Structural search(s, d, k, limits);
  Best best = search.run();
  Policy g = Policy::blank(s, d);
  for (int j = 0; j < s.agent_count; ++j)
    for (int t = 0; t <= s.horizon; ++t) {
      auto& tab = g.table(j, t).action;
      for (std::size_t m = 0; m < tab.size(); ++m)
        tab[m] = best.policy[j][t][m] >= 0 ? best.policy[j][t][m] : s.feasible[j][t][0];
    }
  SolveResult r;
  r.method = Method::Structural;
  r.agent = k;
  r.value = best.value;
  r.strategy = policy_to_strategy(s, d, g, k);
  r.policy = std::move(g);
  r.candidates = search.leaves();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace womc
