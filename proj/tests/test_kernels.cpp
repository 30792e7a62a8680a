#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "womc/error.hpp"
#include "womc/kernels.hpp"
#include "womc/prescription.hpp"

using namespace womc;

TEST_CASE("world enumeration covers the primitive distribution") {
  const LoadedScenario l = load_scenario_file(oracle::fixture("instance_b.wom"));
  const auto worlds = enumerate_worlds(l.scenario, 10'000'000);
  double total = 0;
  for (const World& w : worlds) {
    CHECK(w.prob > 0);
    total += w.prob;
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
  CHECK(worlds.size() <= primitive_count(l.scenario));
  try {
    enumerate_worlds(l.scenario, 3);
    FAIL("expected a cap error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EnumerationCapExceeded);
  }
}

TEST_CASE("parallel kernels are bit-identical to their serial references") {
  for (const char* n : {"instance_a_prime.wom", "instance_b.wom"}) {
    const LoadedScenario l = load_scenario_file(oracle::fixture(n));
    const DelayMatrix d = min_delay_matrix(l.topology);
    const auto worlds = enumerate_worlds(l.scenario, 10'000'000);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Policy g = random_policy(l.scenario, d, seed);
      const auto ref = propagate_all_serial(l.scenario, worlds, g);
      const double cost = expected_total_cost_serial(l.scenario, worlds, g);
      for (int jobs : {1, 2, 4}) {
        const auto par = propagate_all(l.scenario, worlds, g, jobs);
        REQUIRE(par.size() == ref.size());
        for (std::size_t i = 0; i < par.size(); ++i) {
          CHECK(par[i].prob == ref[i].prob);
          CHECK(par[i].trajectory.states == ref[i].trajectory.states);
          CHECK(par[i].trajectory.obs == ref[i].trajectory.obs);
          CHECK(par[i].trajectory.act == ref[i].trajectory.act);
          CHECK(par[i].trajectory.stage_costs == ref[i].trajectory.stage_costs);
        }
        CHECK(expected_total_cost(l.scenario, worlds, g, jobs) == cost);
      }
    }
  }
}

TEST_CASE("parallel_map fills every slot in index order") {
  for (int jobs : {1, 3, 8}) {
    const auto v = parallel_map(1000, jobs, [](std::uint64_t i) { return std::sin(static_cast<double>(i)); });
    REQUIRE(v.size() == 1000);
    for (std::uint64_t i = 0; i < 1000; ++i) CHECK(v[i] == std::sin(static_cast<double>(i)));
  }
  CHECK(parallel_map(0, 4, [](std::uint64_t) { return 1.0; }).empty());
}

TEST_CASE("first_argmin returns the first minimum") {
  CHECK(first_argmin({3.0, 1.0, 2.0, 1.0}) == 1);
  CHECK(first_argmin({0.5}) == 0);
  CHECK(first_argmin({2.0, 2.0, 2.0}) == 0);
}
