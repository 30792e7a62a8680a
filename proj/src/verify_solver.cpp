// Solver suites: equivalence, optimality of the coordinator program,
// structural coverage and monotonicity in the delays.

#include <algorithm>
#include <cmath>
#include <optional>

#include "womc/error.hpp"
#include "womc/random_instance.hpp"
#include "womc/report.hpp"
#include "womc/solver.hpp"
#include "verify_internal.hpp"

namespace womc::detail {

namespace {

template <class F>
std::optional<SolveResult> attempt(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() != Errc::EnumerationCapExceeded) throw;
    return std::nullopt;
  }
}

}  // namespace

void solver_checks(Suite& suite, const Instance& inst) {
  const Scenario& s = *inst.s;
  const DelayMatrix& d = inst.d;
  const int K = s.agent_count;
  {
    Sink sink = suite.at("strategy_equivalence", inst);
    sink.run();
    for (int r = 0; r < inst.policies; ++r) {
      const Policy g = random_policy(s, d, derive_seed(inst.seed, 4000 + r));
      const double direct = evaluate_policy(s, d, g, inst.limits);
      for (int k = 0; k < K; ++k) {
        const double via = evaluate_strategy(s, d, policy_to_strategy(s, d, g, k), inst.limits);
        sink.deviation(std::abs(via - direct), 1e-12, [&] {
          return "policy " + std::to_string(r) + " agent " + std::to_string(k + 1) + ": " + format12(via) +
                 " vs " + format12(direct);
        });
      }
    }
  }

  Sink opt = suite.at("common_info_optimality", inst);
  Sink dp = suite.at("dp_consistency", inst);
  Sink cover = suite.at("structural_coverage", inst);
  Sink mono = suite.at("monotone_information", inst);

  const auto ci = attempt([&] { return common_info_dp(s, d, inst.limits); });
  if (ci) {
    dp.run();
    const double v = evaluate_strategy(s, d, *ci->strategy, inst.limits);
    dp.deviation(std::abs(v - ci->value), 1e-9,
                 [&] { return "greedy strategy " + format12(v) + " vs V_0 " + format12(ci->value); });
  } else {
    dp.skip();
  }

  const auto brute = attempt([&] { return brute_force_optimal(s, d, inst.limits); });
  if (!brute) {
    for (Sink* x : {&opt, &cover, &mono}) x->skip();
    return;
  }
  if (ci) {
    opt.run();
    opt.deviation(std::abs(ci->value - brute->value), 1e-9,
                  [&] { return "common-info " + format12(ci->value) + " vs brute " + format12(brute->value); });
  } else {
    opt.skip();
  }

  bool covered = false;
  for (int k = 0; k < K; ++k) {
    const auto st = attempt([&] { return structural_search(s, d, k, inst.limits); });
    if (!st) continue;
    covered = true;
    cover.deviation(std::abs(st->value - brute->value), 1e-9, [&] {
      return "structural agent " + std::to_string(k + 1) + " " + format12(st->value) + " vs brute " +
             format12(brute->value);
    });
  }
  if (covered)
    cover.run();
  else
    cover.skip();

  const DelayMatrix slower = min_delay_matrix(shift_delays(inst.topology, 1));
  const auto worse = attempt([&] { return brute_force_optimal(s, slower, inst.limits); });
  if (worse) {
    mono.run();
    mono.deviation(std::max(0.0, brute->value - worse->value), 1e-9, [&] {
      return "delays + 1 give " + format12(worse->value) + " < " + format12(brute->value);
    });
  } else {
    mono.skip();
  }
}

}  // namespace womc::detail
