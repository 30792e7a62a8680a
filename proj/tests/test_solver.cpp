#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "womc/error.hpp"
#include "womc/infostruct.hpp"
#include "womc/random_instance.hpp"
#include "womc/solver.hpp"

using namespace womc;

namespace {

struct Tiny {
  std::string name;
  Topology topo;
  Scenario s;
};

std::vector<Tiny> tiny_instances() {
  std::vector<Tiny> out;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    out.push_back({"two agents, delay 2", Topology(2, {{0, 1, 2}, {1, 0, 2}}),
                   oracle::make_scenario(seed, 2, 1, 2, {2, 2}, {2, 1}, 2, {1, 1})});
    out.push_back({"two agents, delay 1", Topology(2, {{0, 1, 1}, {1, 0, 1}}),
                   oracle::make_scenario(seed + 10, 2, 1, 2, {2, 2}, {2, 1}, 2, {2, 1})});
    out.push_back({"one agent", Topology(1, {}), oracle::make_scenario(seed + 20, 1, 1, 3, {2}, {2}, 2, {2})});
  }
  return out;
}

void expect_code(Errc code, const std::function<void()>& fn) {
  try {
    fn();
    FAIL("expected ", errc_name(code));
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

}  // namespace

TEST_CASE("every method attains the minimum over all memory-feedback policies") {
  for (const Tiny& inst : tiny_instances()) {
    CAPTURE(inst.name);
    const DelayMatrix d = min_delay_matrix(inst.topo);
    const double naive = oracle::naive_optimum(inst.s, inst.topo);
    const SolveResult b = brute_force_optimal(inst.s, d);
    CHECK(std::abs(b.value - naive) < 1e-9);
    CHECK(std::abs(evaluate_policy(inst.s, d, *b.policy) - naive) < 1e-9);
    const SolveResult c = common_info_dp(inst.s, d);
    CHECK(std::abs(c.value - naive) < 1e-9);
    CHECK(c.agent == inst.s.agent_count - 1);
    for (int k = 0; k < inst.s.agent_count; ++k) {
      const SolveResult st = structural_search(inst.s, d, k);
      CHECK(std::abs(st.value - naive) < 1e-9);
      CHECK(st.agent == k);
    }
  }
}

TEST_CASE("golden optima of the committed instances") {
  auto load = [](const char* n) { return load_scenario_file(oracle::fixture(n)); };
  const LoadedScenario a = load("instance_a.wom");
  const LoadedScenario b = load("instance_b.wom");
  const DelayMatrix da = min_delay_matrix(a.topology), db = min_delay_matrix(b.topology);
  CHECK(brute_force_optimal(a.scenario, da).value == doctest::Approx(0.3065).epsilon(1e-12));
  CHECK(common_info_dp(a.scenario, da).value == doctest::Approx(0.3065).epsilon(1e-12));
  CHECK(structural_search(a.scenario, da, 0).value == doctest::Approx(0.3065).epsilon(1e-12));
  CHECK(common_info_dp(b.scenario, db).value == doctest::Approx(2.567).epsilon(1e-12));
  for (int k = 0; k < b.scenario.agent_count; ++k)
    CHECK(structural_search(b.scenario, db, k).value == doctest::Approx(2.567).epsilon(1e-12));
}

TEST_CASE("returned strategies realize the reported values") {
  for (const char* n : {"instance_a.wom", "instance_b.wom"}) {
    const LoadedScenario l = load_scenario_file(oracle::fixture(n));
    const DelayMatrix d = min_delay_matrix(l.topology);
    const SolveResult c = common_info_dp(l.scenario, d);
    CHECK(std::abs(evaluate_strategy(l.scenario, d, *c.strategy) - c.value) < 1e-9);
    CHECK(std::abs(evaluate_policy(l.scenario, d, strategy_to_policy(l.scenario, d, *c.strategy)) - c.value) < 1e-9);
    const SolveResult st = structural_search(l.scenario, d, 0);
    CHECK(std::abs(evaluate_strategy(l.scenario, d, *st.strategy) - st.value) < 1e-9);
    CHECK(std::abs(evaluate_policy(l.scenario, d, *st.policy) - st.value) < 1e-9);
  }
}

TEST_CASE("policies and their strategies have equal cost") {
  for (const char* n : {"instance_a.wom", "instance_a_prime.wom", "instance_b.wom"}) {
    const LoadedScenario l = load_scenario_file(oracle::fixture(n));
    const DelayMatrix d = min_delay_matrix(l.topology);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Policy g = random_policy(l.scenario, d, seed);
      const double v = evaluate_policy(l.scenario, d, g);
      for (int k = 0; k < l.scenario.agent_count; ++k) {
        const FullStrategy psi = policy_to_strategy(l.scenario, d, g, k);
        CHECK(std::abs(evaluate_strategy(l.scenario, d, psi) - v) < 1e-9);
        CHECK(std::abs(evaluate_policy(l.scenario, d, strategy_to_policy(l.scenario, d, psi)) - v) < 1e-9);
      }
    }
  }
}

TEST_CASE("zero cost gives zero value for every method") {
  for (Tiny inst : tiny_instances()) {
    for (double& c : inst.s.cost) c = 0.0;
    const DelayMatrix d = min_delay_matrix(inst.topo);
    CHECK(brute_force_optimal(inst.s, d).value == 0.0);
    CHECK(common_info_dp(inst.s, d).value == 0.0);
    CHECK(structural_search(inst.s, d, 0).value == 0.0);
  }
}

TEST_CASE("delaying every link never lowers the optimum") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 6; ++i) {
    const Topology topo = random_topology(rng, 2, 2);
    const Scenario s = random_scenario(rng, 2, 1, RandomShape{});
    const double fast = brute_force_optimal(s, min_delay_matrix(topo)).value;
    const double slow = brute_force_optimal(s, min_delay_matrix(shift_delays(topo, 1))).value;
    CHECK(slow >= fast - 1e-9);
  }
}

TEST_CASE("brute force is independent of the worker count") {
  const LoadedScenario l = load_scenario_file(oracle::fixture("instance_a.wom"));
  const DelayMatrix d = min_delay_matrix(l.topology);
  Limits one, four;
  one.jobs = 1;
  four.jobs = 4;
  const SolveResult a = brute_force_optimal(l.scenario, d, one);
  const SolveResult b = brute_force_optimal(l.scenario, d, four);
  CHECK(a.value == b.value);
  for (int k = 0; k < 2; ++k)
    for (int t = 0; t <= l.scenario.horizon; ++t) CHECK(a.policy->table(k, t).action == b.policy->table(k, t).action);
}

TEST_CASE("enumeration caps are reported") {
  const LoadedScenario ap = load_scenario_file(oracle::fixture("instance_a_prime.wom"));
  const DelayMatrix d = min_delay_matrix(ap.topology);
  expect_code(Errc::EnumerationCapExceeded, [&] { brute_force_optimal(ap.scenario, d); });
  Limits tight;
  tight.policy_cap = 1;
  const LoadedScenario a = load_scenario_file(oracle::fixture("instance_a.wom"));
  const DelayMatrix da = min_delay_matrix(a.topology);
  expect_code(Errc::EnumerationCapExceeded, [&] { common_info_dp(a.scenario, da, tight); });
  expect_code(Errc::EnumerationCapExceeded, [&] { structural_search(a.scenario, da, 0, tight); });
  Limits few;
  few.primitive_cap = 2;
  expect_code(Errc::EnumerationCapExceeded, [&] { evaluate_policy(a.scenario, da, random_policy(a.scenario, da, 1), few); });
}

TEST_CASE("own private sets are contained in the last agent's sets") {
  for (const char* n : {"instance_a.wom", "instance_b.wom", "counterexample_k3.wom"}) {
    const LoadedScenario l = load_scenario_file(oracle::fixture(n));
    const DelayMatrix d = min_delay_matrix(l.topology);
    const int K = l.scenario.agent_count;
    const DomainReport rep = domain_comparison(l.scenario, d);
    CHECK(rep.all_subset());
    CHECK(rep.cells.size() == static_cast<std::size_t>(K * (l.scenario.horizon + 1)));
    for (const DomainCell& c : rep.cells) {
      const auto m = oracle::memory(l.topology, c.agent, c.time);
      CHECK(c.own_labels == oracle::minus(m, oracle::accessible(l.topology, c.agent, c.time)).size());
      CHECK(c.last_labels == oracle::minus(m, oracle::accessible(l.topology, K - 1, c.time)).size());
      CHECK(c.own_realizations <= c.last_realizations);
    }
  }
}
