#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "womc/error.hpp"
#include "womc/random_instance.hpp"
#include "womc/topology.hpp"

using namespace womc;

namespace {

Errc code_of(const Topology& t) {
  try {
    validate_topology(t);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvalidArgument;  // sentinel: no error
}

}  // namespace

TEST_CASE("validation accepts cycles and rejects malformed networks") {
  CHECK_NOTHROW(validate_topology(Topology(2, {{0, 1, 1}, {1, 0, 1}})));
  CHECK_NOTHROW(validate_topology(Topology(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}})));
  CHECK_NOTHROW(validate_topology(Topology(1, {})));
  CHECK(code_of(Topology(2, {{0, 1, 1}})) == Errc::NotStronglyConnected);
  CHECK(code_of(Topology(2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}})) == Errc::SelfLink);
  CHECK(code_of(Topology(2, {{0, 1, 1}, {0, 1, 2}, {1, 0, 1}})) == Errc::DuplicateLink);
  CHECK(code_of(Topology(2, {{0, 1, 0}, {1, 0, 1}})) == Errc::NonPositiveDelay);
  CHECK(code_of(Topology(2, {{0, 2, 1}, {1, 0, 1}})) == Errc::InvalidAgent);
}

TEST_CASE("not-strongly-connected message names the missing direction") {
  try {
    validate_topology(Topology(2, {{0, 1, 1}}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("delay matrices of the worked networks") {
  const DelayMatrix d2 = min_delay_matrix(Topology(2, {{0, 1, 1}, {1, 0, 1}}));
  CHECK(d2(0, 0) == 0);
  CHECK(d2(0, 1) == 1);
  CHECK(d2(1, 0) == 1);

  const DelayMatrix ring = min_delay_matrix(Topology(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}));
  CHECK(ring(0, 2) == 2);
  CHECK(ring(2, 0) == 1);

  // Ring of Instance B: 1->2 (1), 2->3 (1), 3->1 (2).
  const DelayMatrix b = min_delay_matrix(Topology(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 2}}));
  CHECK(b(0, 1) == 1);
  CHECK(b(1, 2) == 1);
  CHECK(b(2, 0) == 2);
  CHECK(b(0, 2) == 2);
  CHECK(b(1, 0) == 3);
  CHECK(b(2, 1) == 3);
}

TEST_CASE("information paths") {
  const Topology two(2, {{0, 1, 1}, {1, 0, 1}});
  const Path p = information_path(two, 0, 1);
  CHECK(p.nodes == std::vector<int>{0, 1});
  CHECK(p.total_delay == 1);

  // Equal delays: [1,2] and [1,3,2]. The lexicographically smallest sequence wins.
  const Topology tie(3, {{0, 1, 2}, {0, 2, 1}, {2, 1, 1}, {1, 0, 1}, {2, 0, 1}});
  const Path q = information_path(tie, 0, 1);
  CHECK(q.total_delay == 2);
  CHECK(q.nodes == std::vector<int>{0, 1});

  CHECK_THROWS_AS(information_path(two, 0, 0), Error);
}

TEST_CASE("tie-break picks the smallest sequence among all minimal simple paths") {
  std::mt19937_64 rng(17);
  for (int n = 0; n < 40; ++n) {
    const Topology topo = random_topology(rng, 2 + static_cast<int>(rng() % 4), 2, 0.6);
    for (int i = 0; i < topo.agent_count(); ++i)
      for (int j = 0; j < topo.agent_count(); ++j) {
        if (i == j) continue;
        auto paths = oracle::simple_paths(topo, i, j);
        int best = paths.front().second;
        for (const auto& p : paths) best = std::min(best, p.second);
        std::vector<int> smallest;
        for (const auto& p : paths)
          if (p.second == best && (smallest.empty() || p.first < smallest)) smallest = p.first;
        CHECK(information_path(topo, i, j).nodes == smallest);
      }
  }
}

TEST_CASE("property: delay matrix equals the simple-path oracle on random graphs") {
  std::mt19937_64 rng(2024);
  for (int n = 0; n < 100; ++n) {
    const int K = 1 + static_cast<int>(rng() % 6);
    const Topology topo = random_topology(rng, K, 3, static_cast<double>(rng() % 8) / 10.0);
    const DelayMatrix d = min_delay_matrix(topo);
    for (int i = 0; i < K; ++i) {
      CHECK(d(i, i) == 0);
      for (int j = 0; j < K; ++j) {
        CHECK(d(i, j) == oracle::simple_path_delay(topo, i, j));
        if (i != j) CHECK(information_path(topo, i, j).total_delay == d(i, j));
        for (int m = 0; m < K; ++m) CHECK(d(i, j) <= d(i, m) + d(m, j));
      }
    }
  }
}

TEST_CASE("random digraphs that are not strongly connected are rejected") {
  std::mt19937_64 rng(5);
  int rejected = 0;
  for (int n = 0; n < 50; ++n) {
    const Topology topo = random_digraph(rng, 4, 3, 0.25);
    bool connected = true;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) connected = connected && oracle::simple_path_delay(topo, i, j) >= 0;
    if (connected) {
      CHECK_NOTHROW(min_delay_matrix(topo));
    } else {
      ++rejected;
      CHECK(code_of(topo) == Errc::NotStronglyConnected);
    }
  }
  CHECK(rejected > 0);
}
