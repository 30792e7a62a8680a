#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "womc/error.hpp"
#include "womc/infostruct.hpp"
#include "womc/prescription.hpp"
#include "womc/random_instance.hpp"
#include "womc/solver.hpp"

using namespace womc;

namespace {

InfoSet labels(std::vector<VarLabel> v) { return InfoSet(std::move(v)); }
VarLabel Y(int agent, int t) { return {agent - 1, t, Kind::Obs}; }
VarLabel U(int agent, int t) { return {agent - 1, t, Kind::Act}; }

const Topology kTwo(2, {{0, 1, 1}, {1, 0, 1}});

}  // namespace

TEST_CASE("memory of the symmetric two-agent network") {
  const DelayMatrix d = min_delay_matrix(kTwo);
  CHECK(memory_labels(d, 0, 2) == labels({Y(1, 0), Y(1, 1), Y(1, 2), U(1, 0), U(1, 1), Y(2, 0), Y(2, 1), U(2, 0)}));
  CHECK(memory_labels(d, 0, 0) == labels({Y(1, 0)}));
}

TEST_CASE("accessible, new and inaccessible sets of the two-agent network") {
  const DelayMatrix d = min_delay_matrix(kTwo);
  for (int t = 0; t <= 4; ++t) CHECK(accessible_labels(d, 0, t) == memory_labels(d, 0, t));
  CHECK(accessible_labels(d, 1, 2) == labels({Y(1, 0), Y(1, 1), U(1, 0), Y(2, 0), Y(2, 1), U(2, 0)}));
  CHECK(inaccessible_labels(d, 0, 0, 2).empty());
  CHECK(inaccessible_labels(d, 0, 1, 2) == labels({Y(1, 2), U(1, 1)}));
  CHECK(inaccessible_labels(d, 1, 1, 2) == labels({Y(2, 2), U(2, 1)}));
  CHECK(new_info_labels(d, 1, 2) == labels({Y(1, 1), U(1, 0), Y(2, 1), U(2, 0)}));
  CHECK(new_info_labels(d, 1, 0) == accessible_labels(d, 1, 0));
  CHECK_THROWS_AS(inaccessible_labels(d, 1, 0, 2), Error);
}

TEST_CASE("single agent") {
  const DelayMatrix d = min_delay_matrix(Topology(1, {}));
  for (int t = 1; t <= 3; ++t) CHECK(new_info_labels(d, 0, t) == labels({Y(1, t), U(1, t - 1)}));
  CHECK(inaccessible_labels(d, 0, 0, 3).empty());
}

TEST_CASE("beyond sets") {
  const BeyondSet last = beyond(2, 3);
  CHECK(last.members == std::vector<int>{2});
  CHECK(beyond(0, 3).members == std::vector<int>{0, 1, 2});
  for (int k = 0; k < 5; ++k) CHECK(beyond(k, 5).members.size() == static_cast<std::size_t>(5 - k));
}

TEST_CASE("realization enumeration") {
  const Scenario s = oracle::make_scenario(1, 2, 1, 2, {2, 2}, {2, 2}, 1, {1, 1});
  const auto none = enumerate_realizations(s, InfoSet{});
  REQUIRE(none.size() == 1);
  CHECK(none[0].values.empty());
  CHECK(enumerate_realizations(s, labels({Y(1, 0)})).size() == 2);
  const auto eight = enumerate_realizations(s, labels({Y(1, 0), Y(1, 1), U(2, 0)}));
  REQUIRE(eight.size() == 8);
  for (std::size_t i = 1; i < eight.size(); ++i) CHECK(eight[i - 1] < eight[i]);
  CHECK(eight.back().values == std::vector<int>{1, 1, 1});
  CHECK_THROWS_AS(enumerate_realizations(s, labels({Y(1, 0), Y(1, 1), U(2, 0)}), 4), Error);
}

TEST_CASE("three-agent ring: memory equals transmission replay at t=3") {
  const Topology ring(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
  const DelayMatrix d = min_delay_matrix(ring);
  const Scenario s = oracle::make_scenario(2, 3, 3, 2, {2, 2, 2}, {2, 2, 2}, 1, {1, 1, 1});
  const Trajectory tr = simulate(s, ring, random_policy(s, d, 1), 0);
  for (int k = 0; k < 3; ++k) {
    std::set<VarLabel> replay;
    for (int tau = 0; tau <= 3; ++tau) replay.insert({k, tau, Kind::Obs});
    for (int tau = 0; tau < 3; ++tau) replay.insert({k, tau, Kind::Act});
    for (const auto& dl : tr.deliveries)
      if (dl.to == k && dl.arrived <= 3) {
        replay.insert({dl.from, dl.sent, Kind::Obs});
        if (dl.sent > 0) replay.insert({dl.from, dl.sent - 1, Kind::Act});
      }
    CHECK(oracle::to_set(memory_labels(d, k, 3)) == replay);
  }
}

TEST_CASE("property: set algebra on 100 random strongly connected topologies") {
  std::mt19937_64 rng(99);
  for (int n = 0; n < 100; ++n) {
    const int K = 1 + static_cast<int>(rng() % 5);
    const int T = static_cast<int>(rng() % 7);
    const Topology topo = random_topology(rng, K, 3);
    const DelayMatrix d = min_delay_matrix(topo);
    for (int t = 0; t <= T; ++t) {
      for (int k = 0; k < K; ++k) {
        const InfoSet m = memory_labels(d, k, t);
        const InfoSet a = accessible_labels(d, k, t);
        CHECK(oracle::to_set(m) == oracle::memory(topo, k, t));
        CHECK(oracle::to_set(a) == oracle::accessible(topo, k, t));
        if (t > 0) {
          CHECK(is_subset(accessible_labels(d, k, t - 1), a));
          CHECK(is_subset(memory_labels(d, k, t - 1), m));
          CHECK(set_intersection(new_info_labels(d, k, t), accessible_labels(d, k, t - 1)).empty());
        }
        InfoSet acc_union;
        for (int tau = 0; tau <= t; ++tau) acc_union = set_union(acc_union, new_info_labels(d, k, tau));
        CHECK(acc_union == a);
        for (int j = k; j < K; ++j) {
          const InfoSet aj = accessible_labels(d, j, t);
          CHECK(is_subset(aj, a));
          const InfoSet l = inaccessible_labels(d, k, j, t);
          CHECK(set_union(l, aj) == m);
          CHECK(set_intersection(l, aj).empty());
        }
        CHECK(is_subset(inaccessible_labels(d, k, k, t), inaccessible_labels(d, k, K - 1, t)));
      }
    }
  }
}

TEST_CASE("domain comparison") {
  const LoadedScenario l = load_scenario_file(oracle::fixture("instance_a.wom"));
  const DelayMatrix d = min_delay_matrix(l.topology);
  const DomainReport rep = domain_comparison(l.scenario, d);
  CHECK(rep.all_subset());
  for (const auto& c : rep.cells) {
    if (c.agent == 1) {
      CHECK(c.own_labels == c.last_labels);
    }
    if (c.agent == 0 && c.time == 2) {
      CHECK(c.own_labels == 0);
      CHECK(c.last_labels == 2);  // {Y1@2, U1@1}
    }
  }
  std::mt19937_64 rng(8);
  for (int n = 0; n < 100; ++n) {
    const int K = 1 + static_cast<int>(rng() % 5);
    const Topology topo = random_topology(rng, K, 3);
    const Scenario s = random_scenario(rng, K, 3, RandomShape{});
    CHECK(domain_comparison(s, min_delay_matrix(topo)).all_subset());
  }
}
