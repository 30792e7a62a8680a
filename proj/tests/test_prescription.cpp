#include <doctest.h>

#include "oracles.hpp"
#include "womc/error.hpp"
#include "womc/infostruct.hpp"
#include "womc/kernels.hpp"
#include "womc/prescription.hpp"

using namespace womc;

namespace {

struct Fixture {
  LoadedScenario l;
  DelayMatrix d;
  explicit Fixture(const char* name) : l(load_scenario_file(oracle::fixture(name))), d(min_delay_matrix(l.topology)) {}
  const Scenario& s() const { return l.scenario; }
};

std::vector<Trajectory> runs_under(const Scenario& s, const FullStrategy& psi) {
  std::vector<Trajectory> out;
  for (const World& w : enumerate_worlds(s, 1'000'000))
    out.push_back(rollout(s, w, s.horizon + 1,
                          [&](int j, int t, const Trajectory& tr) { return strategy_action(psi, j, t, tr); }));
  return out;
}

bool same_actions(const Scenario& s, const std::vector<Trajectory>& trs, const FullStrategy& a, const FullStrategy& b) {
  for (const auto& tr : trs)
    for (int t = 0; t <= s.horizon; ++t)
      for (int j = 0; j < s.agent_count; ++j)
        if (strategy_action(a, j, t, tr) != strategy_action(b, j, t, tr)) return false;
  return true;
}

}  // namespace

TEST_CASE("prescription domains") {
  const Fixture f("instance_b.wom");
  const int K = 3;
  for (int t = 0; t <= 2; ++t)
    for (int j = 0; j < K; ++j) {
      const InfoSet expect = j == K - 1 ? inaccessible_labels(f.d, j, j, t) : inaccessible_labels(f.d, j, K - 1, t);
      CHECK(prescription_domain(f.d, K - 1, j, t) == expect);
      CHECK(prescription_domain(f.d, j, j, t) == inaccessible_labels(f.d, j, j, t));
    }
  const Fixture a("instance_a.wom");
  CHECK(prescription_domain(a.d, 1, 0, 2) == InfoSet({{0, 2, Kind::Obs}, {0, 1, Kind::Act}}));
  CHECK(prescription_conditioning(a.d, 1, 0, 2) == accessible_labels(a.d, 1, 2));
  CHECK(prescription_conditioning(a.d, 0, 1, 2) == accessible_labels(a.d, 1, 2));
}

TEST_CASE("act looks up tables and checks the domain") {
  const Fixture f("instance_a.wom");
  const Scenario& s = f.s();
  PrescriptionFunction empty{1, 1, 0, Indexer(s, InfoSet{}), {1}};
  CHECK(act(empty, Realization{}) == 1);
  const InfoSet dom({{0, 0, Kind::Obs}});
  PrescriptionFunction constant{0, 0, 0, Indexer(s, dom), {0, 0}};
  CHECK(act(constant, Realization{dom, {0}}) == 0);
  CHECK(act(constant, Realization{dom, {1}}) == 0);
  try {
    act(constant, Realization{});
    FAIL("expected DomainMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DomainMismatch);
  }
}

TEST_CASE("constant policies give constant strategies") {
  const Fixture f("instance_b.wom");
  const Policy g = Policy::constant(f.s(), f.d, {1, 0, 1});
  for (int k = 0; k < 3; ++k) {
    const FullStrategy psi = policy_to_strategy(f.s(), f.d, g, k);
    for (int j = 0; j < 3; ++j)
      for (const auto& part : psi.parts[j])
        for (int u : part.table) CHECK(u == (j == 1 ? 0 : 1));
    CHECK(strategy_to_policy(f.s(), f.d, psi) == g);
    const FullStrategy moved = positional_transfer(psi, (k + 1) % 3, f.s(), f.d);
    for (int j = 0; j < 3; ++j)
      for (const auto& part : moved.parts[j])
        for (int u : part.table) CHECK(u == (j == 1 ? 0 : 1));
  }
}

TEST_CASE("single agent: the strategy is the policy reindexed") {
  const Scenario s = oracle::make_scenario(4, 1, 2, 2, {2}, {2}, 1, {2});
  const DelayMatrix d = min_delay_matrix(Topology(1, {}));
  const Policy g = random_policy(s, d, 5);
  const FullStrategy psi = policy_to_strategy(s, d, g, 0);
  for (int t = 0; t <= 2; ++t) {
    CHECK(psi.parts[0][t].domain.labels().empty());
    CHECK(psi.parts[0][t].cond.labels() == memory_labels(d, 0, t));
    CHECK(psi.parts[0][t].table == g.table(0, t).action);
  }
  CHECK(strategy_to_policy(s, d, psi) == g);
}

TEST_CASE("strategies from policies reproduce the policy's actions") {
  const Fixture f("instance_a_prime.wom");
  const Scenario& s = f.s();
  for (int r = 0; r < 10; ++r) {
    const Policy g = random_policy(s, f.d, static_cast<std::uint64_t>(r));
    for (int k = 0; k < 2; ++k) {
      const FullStrategy psi = policy_to_strategy(s, f.d, g, k);
      for (const auto& wt : joint_distribution(s, g))
        for (int t = 0; t <= s.horizon; ++t)
          for (int j = 0; j < 2; ++j) CHECK(strategy_action(psi, j, t, wt.trajectory) == wt.trajectory.u(t, j));
    }
  }
}

TEST_CASE("round trip on 100 random policies") {
  const Fixture f("instance_a.wom");
  for (int r = 0; r < 100; ++r) {
    const Policy g = random_policy(f.s(), f.d, 500 + static_cast<std::uint64_t>(r));
    for (int k = 0; k < 2; ++k) CHECK(strategy_to_policy(f.s(), f.d, policy_to_strategy(f.s(), f.d, g, k)) == g);
  }
}

TEST_CASE("incomplete policies are rejected") {
  const Fixture f("instance_a.wom");
  try {
    policy_to_strategy(f.s(), f.d, Policy::blank(f.s(), f.d), 0);
    FAIL("expected UndefinedPolicyEntry");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UndefinedPolicyEntry);
  }
}

TEST_CASE("positional transfer preserves the action profile") {
  for (const char* name : {"instance_a.wom", "instance_a_prime.wom", "instance_b.wom"}) {
    const Fixture f(name);
    const Scenario& s = f.s();
    const int K = s.agent_count;
    for (int r = 0; r < 5; ++r)
      for (int k = 0; k < K; ++k) {
        const FullStrategy psi = random_strategy(s, f.d, k, 77 + static_cast<std::uint64_t>(r * K + k));
        const auto trs = runs_under(s, psi);
        CHECK(same_actions(s, trs, psi, positional_transfer(psi, k, s, f.d)));
        for (int j = 0; j < K; ++j) {
          const FullStrategy moved = positional_transfer(psi, j, s, f.d);
          CHECK(moved.owner == j);
          CHECK(same_actions(s, trs, psi, moved));
          for (int i = 0; i < K; ++i)
            CHECK(same_actions(s, trs, positional_transfer(moved, i, s, f.d), positional_transfer(psi, i, s, f.d)));
        }
      }
  }
}

TEST_CASE("canonical realization keys") {
  const Fixture f("instance_a.wom");
  const Realization r{InfoSet({{0, 0, Kind::Obs}, {1, 1, Kind::Act}}), {1, 0}};
  CHECK(realization_key(f.s(), r) == "Y1@0=y1,U2@1=u0");
  CHECK(realization_key(f.s(), Realization{}).empty());
}
