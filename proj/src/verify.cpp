#include "womc/verify.hpp"

#include <random>

#include "womc/error.hpp"
#include "womc/random_instance.hpp"
#include "verify_internal.hpp"

namespace womc {

namespace {

struct CatalogEntry {
  const char* name;
  const char* anchor;
};

constexpr CatalogEntry kCatalog[] = {
    {"delay_diagonal_zero", "d(k,k) = 0"},
    {"delay_triangle_inequality", "d(i,j) <= d(i,m) + d(m,j)"},
    {"delay_path_oracle", "d(i,j) = min over simple paths i->j of summed link delays"},
    {"information_path_delay", "delay of information_path(i,j) = d(i,j)"},
    {"strong_connectivity_finite", "strongly connected => every d(i,j) finite"},
    {"primitive_independence", "P(x0, w, v) = P(x0) prod_t P(w_t) prod_{t,k} P(v^k_t)"},
    {"simulate_matches_enumeration", "relay simulation of a primitive assignment = its propagated trajectory"},
    {"stage_cost_table", "trajectory stage cost = c_t(x_t, u^{1:K}_t)"},
    {"accessible_monotone", "A^k_{t-1} subset of A^k_t"},
    {"accessible_nesting", "A^j_t subset of A^k_t for j beyond k"},
    {"inaccessible_partition", "L^{[k,j]}_t union A^j_t = M^k_t, disjoint"},
    {"domain_subset", "L^{[k,k]}_t subset of L^{[k,K]}_t"},
    {"memory_monotone", "M^k_{t-1} subset of M^k_t"},
    {"memory_relay", "M^k_t = own labels + labels delivered by hop-by-hop relay"},
    {"prescription_consistency", "psi^{[j,j]}_t(A^j_t)(L^{[j,j]}) = psi^{[k,j]}_t(.)(.) on consistent realizations"},
    {"round_trip_identity", "strategy_to_policy(policy_to_strategy(g,k)) = g on reachable memories"},
    {"domain_correctness", "domain of psi^{[k,j]}_t = L^{[j,k]}_t (j < k) or L^{[j,j]}_t (j >= k)"},
    {"transfer_composition", "transfer(transfer(psi,j),i) action-equivalent to transfer(psi,i)"},
    {"filter_correctness", "Pi_{t+1} = F(Pi_t, Theta_t, Z_{t+1}) = P(S_{t+1} | A_{t+1}, Theta_{0:t})"},
    {"policy_independence", "F depends on (Pi_t, Theta_t, Z_{t+1}) only"},
    {"markov_property", "P(Pi_{t+1} | history) = P(Pi_{t+1} | Pi_t, Theta_t)"},
    {"cost_property", "E[c_t | history] = c_hat(Pi_t, Theta_t)"},
    {"belief_normalization", "sum_s Pi_t(s) = 1"},
    {"witsenhausen_determinism", "(S_t, W_t, V_{t+1}, Theta_t) -> (S_{t+1}, Z_{t+1}); (S_t, Theta_t) -> c_t"},
    {"strategy_equivalence", "J(policy_to_strategy(g,k)) = J(g)"},
    {"common_info_optimality", "V_0 = min_g J(g)"},
    {"dp_consistency", "J(greedy strategy extracted from V) = V_0"},
    {"structural_coverage", "min over belief-tuple strategies of agent k = min_g J(g)"},
    {"monotone_information", "J*(delays) <= J*(delays + c)"},
};

}  // namespace

namespace detail {

void Sink::deviation(double dev, double tol, const std::function<std::string()>& describe) {
  if (dev > r_.worst_deviation) r_.worst_deviation = dev;
  if (dev <= tol || !r_.pass) return;
  r_.pass = false;
  r_.seed = inst_.seed;
  r_.counterexample = inst_.name + ": " + describe();
}

Suite::Suite() {
  for (const auto& e : kCatalog) {
    index_[e.name] = checks_.size();
    CheckResult c;
    c.name = e.name;
    c.anchor = e.anchor;
    checks_.push_back(std::move(c));
  }
}

Sink Suite::at(const std::string& name, const Instance& inst) {
  const auto it = index_.find(name);
  if (it == index_.end()) fail(Errc::InvalidArgument, "unknown check " + name);
  return Sink(checks_[it->second], inst);
}

}  // namespace detail

std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& e : kCatalog) out.emplace_back(e.name);
  return out;
}

bool VerifyReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

VerifyReport run_verify(const LoadedScenario* scenario, const std::string& scenario_name,
                        const VerifyOptions& options) {
  using detail::Instance;
  detail::Suite suite;
  VerifyReport report;
  report.scenario = scenario_name;
  report.random = options.random;
  report.seed = options.seed;

  auto run_all = [&](const Instance& inst) {
    detail::topology_checks(suite, inst);
    detail::infostruct_checks(suite, inst);
    if (!inst.s) return;
    detail::scenario_checks(suite, inst);
    detail::prescription_checks(suite, inst);
    detail::belief_checks(suite, inst);
    if (inst.solve) detail::solver_checks(suite, inst);
  };

  if (scenario) {
    Instance inst;
    inst.name = scenario_name.empty() ? "scenario" : scenario_name;
    inst.seed = options.seed;
    inst.topology = scenario->topology;
    inst.d = min_delay_matrix(scenario->topology);
    inst.horizon = scenario->scenario.horizon;
    inst.s = &scenario->scenario;
    inst.strategies = 24;
    inst.policies = 10;
    inst.solve = true;
    inst.corrupt = options.corrupt_transition;
    inst.limits = options.limits;
    run_all(inst);
  }

  for (int i = 0; i < options.random; ++i) {
    const std::uint64_t seed = derive_seed(options.seed, static_cast<std::uint64_t>(i));
    std::mt19937_64 rng(seed);
    const std::string tag = "random #" + std::to_string(i);

    // Topology and information structure at desk scale.
    Instance net;
    net.name = tag + " network";
    net.seed = seed;
    const int K = 1 + static_cast<int>(rng() % 5);
    net.horizon = static_cast<int>(rng() % 7);
    net.topology = random_topology(rng, K, 3);
    net.d = min_delay_matrix(net.topology);
    net.limits = options.limits;
    run_all(net);

    // Delay oracle on up to six agents with varying density.
    Instance graph;
    graph.name = tag + " graph";
    graph.seed = seed;
    const int K6 = 1 + static_cast<int>(rng() % 6);
    graph.topology = random_topology(rng, K6, 3, static_cast<double>(rng() % 7) / 10.0);
    graph.d = min_delay_matrix(graph.topology);
    detail::topology_checks(suite, graph);

    // Small full model for the probabilistic suites.
    const int K2 = 1 + static_cast<int>(rng() % 2);
    const int T2 = static_cast<int>(rng() % 3);
    RandomShape shape;
    shape.v_values = 1 + static_cast<int>(rng() % 2);
    Instance model;
    model.name = tag + " model";
    model.seed = seed;
    model.topology = random_topology(rng, K2, 2);
    model.d = min_delay_matrix(model.topology);
    model.horizon = T2;
    const Scenario s = random_scenario(rng, K2, T2, shape);
    model.s = &s;
    model.strategies = 6;
    model.policies = 4;
    model.solve = true;
    model.limits = options.limits;
    model.limits.policy_cap = std::min<std::uint64_t>(model.limits.policy_cap, 2'000);
    run_all(model);
  }
  report.checks = suite.take();
  return report;
}

Json verify_json(const VerifyReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks)
    checks.push_back(Json{{"name", c.name},
                          {"anchor", c.anchor},
                          {"instances", c.instances},
                          {"skipped", c.skipped},
                          {"pass", c.pass},
                          {"worst_deviation", round12(c.worst_deviation)},
                          {"counterexample", c.pass ? Json(nullptr) : Json(c.counterexample)},
                          {"seed", c.seed ? Json(*c.seed) : Json(nullptr)}});
  return Json{{"scenario", report.scenario.empty() ? Json(nullptr) : Json(report.scenario)},
              {"random", report.random},
              {"seed", report.seed},
              {"pass", report.pass()},
              {"checks", checks}};
}

}  // namespace womc
