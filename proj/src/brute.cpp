// Exhaustive policy search. Every agent but one (the responder) enumerates
// its self-consistent policy trees over open-loop reachable memories; the
// responder's exact best response is computed for each combination.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "womc/error.hpp"
#include "womc/infostruct.hpp"
#include "womc/kernels.hpp"
#include "womc/solver.hpp"

namespace womc {

namespace {

using Dense = std::vector<std::vector<int>>;  // [t][memory index] -> action, -1 unset

struct Context {
  const Scenario& s;
  const DelayMatrix& d;
  std::vector<std::vector<Indexer>> mem;  // [k][t]
  std::vector<std::vector<std::vector<std::uint64_t>>> reach;
};

// Own-action consistency: every U^j_tau in m equals the decision recorded for
// the projection of m onto M^j_tau.
bool consistent(const Context& c, int j, int t, std::uint64_t m, const Dense& partial) {
  const Realization r = c.mem[j][t].decode(m);
  for (std::size_t p = 0; p < r.labels.size(); ++p) {
    const VarLabel& l = r.labels.labels()[p];
    if (l.agent != j || l.kind != Kind::Act) continue;
    const int decided = partial[l.time][c.mem[j][l.time].index(r)];
    if (decided < 0 || decided != r.values[p]) return false;
  }
  return true;
}

void enumerate_trees(const Context& c, int j, int t, Dense& partial, std::vector<Dense>& out, std::uint64_t cap) {
  const int T = c.s.horizon;
  if (t > T) {
    if (out.size() >= cap)
      fail(Errc::EnumerationCapExceeded, "policy trees of agent " + std::to_string(j + 1) + " exceed cap " +
                                             std::to_string(cap));
    out.push_back(partial);
    return;
  }
  std::vector<std::uint64_t> entries;
  for (auto m : c.reach[j][t])
    if (consistent(c, j, t, m, partial)) entries.push_back(m);
  const auto& f = c.s.feasible[j][t];
  std::vector<std::size_t> digit(entries.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < entries.size(); ++i) partial[t][entries[i]] = f[digit[i]];
    enumerate_trees(c, j, t + 1, partial, out, cap);
    std::size_t i = entries.size();
    while (i > 0 && ++digit[i - 1] == f.size()) digit[--i] = 0;
    if (i == 0) break;
  }
  for (auto m : entries) partial[t][m] = -1;
}

class Evaluator {
 public:
  // `trs` holds the start trajectories on entry and is advanced in place.
  Evaluator(const Context& c, int responder, std::vector<Trajectory>& trs, const std::vector<double>& probs,
            const std::vector<const Dense*>& fixed)
      : c_(c), r_(responder), fixed_(fixed), trs_(trs), probs_(probs) {
    u_.resize(static_cast<std::size_t>(c.s.agent_count));
  }

  double run(Dense* record) {
    std::vector<int> all(trs_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    double v = 0.0;
    for (auto& [m, group] : split(0, all)) v += best(0, group, record);
    return v;
  }

 private:
  std::map<std::uint64_t, std::vector<int>> split(int t, const std::vector<int>& items) const {
    std::map<std::uint64_t, std::vector<int>> groups;
    for (int i : items) groups[c_.mem[r_][t].index(trs_[i])].push_back(i);
    return groups;
  }

  // Applies action a of the responder at t to every item; returns the weighted stage cost.
  double step(int t, const std::vector<int>& items, int a) {
    const int K = c_.s.agent_count;
    double cost = 0.0;
    for (int i : items) {
      Trajectory& tr = trs_[i];
      for (int j = 0; j < K; ++j) {
        if (j == r_) {
          u_[j] = a;
          continue;
        }
        const int v = (*fixed_[j])[t][c_.mem[j][t].index(tr)];
        if (v < 0) fail(Errc::UndefinedPolicyEntry, "policy tree misses a reachable memory");
        u_[j] = v;
      }
      advance_trajectory(c_.s, tr, t, u_);
      cost += probs_[i] * tr.stage_costs[t];
    }
    return cost;
  }

  double best(int t, const std::vector<int>& items, Dense* record) {
    const auto& f = c_.s.feasible[r_][t];
    double best_v = std::numeric_limits<double>::infinity();
    int best_a = f[0];
    for (int a : f) {
      double v = step(t, items, a);
      if (t < c_.s.horizon)
        for (auto& [m, group] : split(t + 1, items)) v += best(t + 1, group, nullptr);
      if (v < best_v) {
        best_v = v;
        best_a = a;
      }
    }
    if (record) {
      (*record)[t][c_.mem[r_][t].index(trs_[items[0]])] = best_a;
      step(t, items, best_a);
      if (t < c_.s.horizon)
        for (auto& [m, group] : split(t + 1, items)) best(t + 1, group, record);
    }
    return best_v;
  }

  const Context& c_;
  int r_;
  const std::vector<const Dense*>& fixed_;
  std::vector<Trajectory>& trs_;
  const std::vector<double>& probs_;
  std::vector<int> u_;
};

Dense blank_dense(const Context& c, int j) {
  Dense out;
  for (const auto& idx : c.mem[j]) out.emplace_back(idx.size(), -1);
  return out;
}

}  // namespace

SolveResult brute_force_optimal(const Scenario& s, const DelayMatrix& d, const Limits& limits) {
  const auto start = std::chrono::steady_clock::now();
  const int K = s.agent_count;
  const int T = s.horizon;
  Context c{s, d, {}, reachable_memories(s, d, limits)};
  c.mem.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
    for (int t = 0; t <= T; ++t) {
      c.mem[k].emplace_back(s, memory_labels(d, k, t));
      if (c.mem[k][t].size() > kMaxTableEntries)
        fail(Errc::EnumerationCapExceeded, "memory of agent " + std::to_string(k + 1) + " is too large to tabulate");
    }

  // The agent with the most reachable entries responds; ties go to the lowest index.
  int responder = 0;
  std::uint64_t most = 0;
  double log10_g = 0.0;
  for (int k = 0; k < K; ++k) {
    std::uint64_t n = 0;
    for (int t = 0; t <= T; ++t) {
      n += c.reach[k][t].size();
      log10_g += static_cast<double>(c.reach[k][t].size()) * std::log10(static_cast<double>(s.feasible[k][t].size()));
    }
    if (n > most) {
      most = n;
      responder = k;
    }
  }
  auto cap_error = [&](const std::string& what) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", log10_g);
    fail(Errc::EnumerationCapExceeded, what + " (|G| = 10^" + buf + ", cap " + std::to_string(limits.policy_cap) + ")");
  };

  std::vector<std::vector<Dense>> trees(static_cast<std::size_t>(K));
  std::uint64_t candidates = 1;
  for (int k = 0; k < K; ++k) {
    if (k == responder) continue;
    Dense partial = blank_dense(c, k);
    try {
      enumerate_trees(c, k, 0, partial, trees[k], limits.policy_cap);
    } catch (const Error&) {
      cap_error("policy trees of agent " + std::to_string(k + 1) + " exceed the cap");
    }
    if (candidates > limits.policy_cap / trees[k].size()) cap_error("policy candidates exceed the cap");
    candidates *= trees[k].size();
  }

  const auto worlds = enumerate_worlds(s, limits.primitive_cap);
  std::vector<Trajectory> starts;
  std::vector<double> probs;
  for (const auto& w : worlds) {
    starts.push_back(start_trajectory(s, w));
    probs.push_back(w.prob);
  }
  auto fixed_for = [&](std::uint64_t idx) {
    std::vector<const Dense*> fixed(static_cast<std::size_t>(K), nullptr);
    for (int k = K - 1; k >= 0; --k) {
      if (k == responder) continue;
      fixed[k] = &trees[k][idx % trees[k].size()];
      idx /= trees[k].size();
    }
    return fixed;
  };
  const auto values = parallel_map(candidates, limits.jobs, [&](std::uint64_t idx) {
    const auto fixed = fixed_for(idx);
    thread_local std::vector<Trajectory> buffer;
    buffer = starts;  // reuses capacity
    return Evaluator(c, responder, buffer, probs, fixed).run(nullptr);
  });
  const std::uint64_t arg = first_argmin(values);

  const auto fixed = fixed_for(arg);
  Dense response = blank_dense(c, responder);
  std::vector<Trajectory> trs = starts;
  Evaluator(c, responder, trs, probs, fixed).run(&response);
  Policy g = Policy::blank(s, d);
  for (int k = 0; k < K; ++k) {
    const Dense& src = k == responder ? response : *fixed[k];
    for (int t = 0; t <= T; ++t) {
      auto& tab = g.table(k, t).action;
      for (std::size_t m = 0; m < tab.size(); ++m) tab[m] = src[t][m] >= 0 ? src[t][m] : s.feasible[k][t][0];
    }
  }
  SolveResult r;
  r.method = Method::Brute;
  r.value = evaluate_policy(s, d, g, limits);
  if (std::abs(r.value - values[arg]) > 1e-9)
    fail(Errc::InvalidArgument, "best-response value disagrees with policy evaluation");
  r.policy = std::move(g);
  r.candidates = candidates;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace womc
