// womctl: validation, invariant verification, solving and report export.
// Exit codes: 0 success, 1 verification failure, 2 usage or input error,
// 3 enumeration cap exceeded.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "womc/belief.hpp"
#include "womc/error.hpp"
#include "womc/infostruct.hpp"
#include "womc/report.hpp"
#include "womc/scenario.hpp"
#include "womc/solver.hpp"
#include "womc/verify.hpp"

namespace {

using namespace womc;

struct Options {
  std::string scenario;
  std::string out;
  std::string history;
  std::string method = "brute";
  int t = 0;
  int agent = 0;  // 1-based; 0 = command default
  int random = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::uint64_t cap = 0;            // policy-candidate cap; 0 = default
  std::uint64_t primitive_cap = 0;  // 0 = default
  bool timing = false;
  bool corrupt = false;
};

struct Loaded {
  LoadedScenario model;
  DelayMatrix d;
};

Loaded load(const Options& o) {
  if (o.scenario.empty()) fail(Errc::InvalidArgument, "--scenario is required");
  Loaded l{load_scenario_file(o.scenario), {}};
  l.d = min_delay_matrix(l.model.topology);
  validate_scenario(l.model.scenario);
  return l;
}

Limits limits_of(const Options& o) {
  Limits lim;
  if (const char* env = std::getenv("WOMCTL_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (!end || *end != '\0' || v == 0) fail(Errc::InvalidArgument, "WOMCTL_CAP must be a positive integer");
    lim.policy_cap = v;
  }
  if (o.cap) lim.policy_cap = o.cap;
  if (o.primitive_cap) lim.primitive_cap = o.primitive_cap;
  if (o.jobs < 1) fail(Errc::InvalidArgument, "--jobs must be >= 1");
  lim.jobs = o.jobs;
  return lim;
}

int agent_index(const Options& o, const Scenario& s, int fallback) {
  const int a = o.agent ? o.agent : fallback;
  if (a < 1 || a > s.agent_count) fail(Errc::InvalidAgent, "agent " + std::to_string(a) + " does not exist");
  return a - 1;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) fail(Errc::Io, "cannot write " + o.out);
  f << text;
}

Method parse_method(const std::string& m) {
  if (m == "brute") return Method::Brute;
  if (m == "common-info") return Method::CommonInfo;
  if (m == "structural") return Method::Structural;
  fail(Errc::InvalidArgument, "unknown method '" + m + "'");
}

SolveResult run_method(Method m, const Loaded& l, int agent, const Limits& lim) {
  const Scenario& s = l.model.scenario;
  switch (m) {
    case Method::Brute: return brute_force_optimal(s, l.d, lim);
    case Method::CommonInfo: return common_info_dp(s, l.d, lim);
    case Method::Structural: return structural_search(s, l.d, agent, lim);
  }
  fail(Errc::InvalidArgument, "unknown method");
}

int cmd_validate(const Options& o) {
  const Loaded l = load(o);
  std::cout << "ok: " << l.model.scenario.agent_count << " agents, horizon " << l.model.scenario.horizon << ", "
            << primitive_count(l.model.scenario) << " primitive assignments\n";
  return 0;
}

int cmd_verify(const Options& o) {
  std::optional<Loaded> l;
  if (!o.scenario.empty()) l = load(o);
  VerifyOptions vo;
  vo.random = o.random;
  vo.seed = o.seed;
  vo.corrupt_transition = o.corrupt;
  vo.limits = limits_of(o);
  if (!l && o.random == 0) fail(Errc::InvalidArgument, "verify needs --scenario and/or --random N");
  const VerifyReport rep = run_verify(l ? &l->model : nullptr, o.scenario, vo);
  emit(o, dump_json(verify_json(rep)));
  return rep.pass() ? 0 : 1;
}

int cmd_infostruct(const Options& o) {
  const Loaded l = load(o);
  if (o.t < 0) fail(Errc::InvalidArgument, "--t must be >= 0");
  emit(o, dump_json(infostruct_json(l.d, o.t)));
  return 0;
}

int cmd_belief(const Options& o) {
  const Loaded l = load(o);
  const Scenario& s = l.model.scenario;
  const int k = agent_index(o, s, 1);
  if (o.history.empty()) fail(Errc::InvalidArgument, "--history is required");
  std::ifstream f(o.history);
  if (!f) fail(Errc::Io, "cannot open " + o.history);
  Json doc;
  try {
    doc = Json::parse(f);
  } catch (const Json::exception& e) {
    fail(Errc::ParseError, o.history + ": " + e.what());
  }
  const BeliefHistory h = parse_history(s, l.d, k, doc);
  const BeliefState pi = belief_from_scratch(s, l.d, k, h.accessible, h.thetas, limits_of(o).primitive_cap);
  emit(o, dump_json(belief_json(s, pi)));
  return 0;
}

int cmd_solve(const Options& o) {
  const Loaded l = load(o);
  const Method m = parse_method(o.method);
  const int k = agent_index(o, l.model.scenario, 1);
  emit(o, dump_json(solve_json(run_method(m, l, k, limits_of(o)), o.timing)));
  return 0;
}

int cmd_compare(const Options& o) {
  const Loaded l = load(o);
  const Limits lim = limits_of(o);
  const int k = agent_index(o, l.model.scenario, 1);
  std::vector<CompareRow> rows;
  std::optional<double> brute;
  for (Method m : {Method::Brute, Method::CommonInfo, Method::Structural}) {
    CompareRow row;
    row.method = method_name(m);
    try {
      const SolveResult r = run_method(m, l, k, lim);
      row.value = r.value;
      row.candidates = r.candidates;
      row.seconds = r.seconds;
    } catch (const Error& e) {
      if (e.code() != Errc::EnumerationCapExceeded) throw;
      std::cerr << method_name(m) << ": " << e.what() << "\n";
    }
    if (m == Method::Brute) brute = row.value;
    if (!row.value || !brute)
      row.match_brute = "NA";
    else
      row.match_brute = std::abs(*row.value - *brute) <= 1e-9 ? "yes" : "no";
    rows.push_back(std::move(row));
  }
  emit(o, compare_csv(rows, o.timing));
  return 0;
}

int cmd_export(const Options& o) {
  const Loaded l = load(o);
  const Scenario& s = l.model.scenario;
  const Method m = parse_method(o.method);
  const int fallback = m == Method::CommonInfo ? s.agent_count : 1;
  const int k = agent_index(o, s, fallback);
  const SolveResult r = run_method(m, l, k, limits_of(o));
  FullStrategy psi = r.strategy ? *r.strategy : policy_to_strategy(s, l.d, *r.policy, k);
  if (psi.owner != k) psi = positional_transfer(psi, k, s, l.d);
  emit(o, dump_json(strategy_json(s, psi)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"womctl: finite multi-agent control with delayed information sharing"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool scenario_required) {
    auto* opt = sub->add_option("--scenario", o.scenario, "scenario file");
    if (scenario_required) opt->required();
    sub->add_option("--out", o.out, "write output to this file instead of stdout");
    sub->add_option("--jobs", o.jobs, "worker threads (output does not depend on it)");
    sub->add_option("--cap", o.cap, "policy-candidate cap (default 1000000, or WOMCTL_CAP)");
    sub->add_option("--primitive-cap", o.primitive_cap, "primitive-assignment cap (default 10000000)");
  };

  auto* validate = app.add_subcommand("validate", "check a scenario file");
  add_common(validate, true);
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  add_common(verify, false);
  verify->add_option("--random", o.random, "number of seeded random instances");
  verify->add_option("--seed", o.seed, "batch seed (default 0)");
  verify->add_flag("--corrupt-transition", o.corrupt, "fault injection: perturb the predictor's transition model");
  auto* info = app.add_subcommand("infostruct", "label sets per agent at a time step");
  add_common(info, true);
  info->add_option("--t", o.t, "time step")->required();
  auto* belief = app.add_subcommand("belief", "belief table for a conditioning history");
  add_common(belief, true);
  belief->add_option("--agent", o.agent, "agent (1-based)")->required();
  belief->add_option("--history", o.history, "history JSON file")->required();
  auto* solve = app.add_subcommand("solve", "solve with one method");
  add_common(solve, true);
  solve->add_option("--method", o.method, "brute | common-info | structural")->required();
  solve->add_option("--agent", o.agent, "strategy owner for structural (default 1)");
  solve->add_flag("--timing", o.timing, "include wall-clock seconds");
  auto* compare = app.add_subcommand("compare", "run all methods, CSV output");
  add_common(compare, true);
  compare->add_option("--agent", o.agent, "strategy owner for structural (default 1)");
  compare->add_flag("--timing", o.timing, "fill the seconds column");
  auto* exp = app.add_subcommand("export-strategy", "solve and export the prescription strategy");
  add_common(exp, true);
  exp->add_option("--method", o.method, "brute | common-info | structural")->required();
  exp->add_option("--agent", o.agent, "owner of the exported strategy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*verify) return cmd_verify(o);
    if (*info) return cmd_infostruct(o);
    if (*belief) return cmd_belief(o);
    if (*solve) return cmd_solve(o);
    if (*compare) return cmd_compare(o);
    if (*exp) return cmd_export(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::EnumerationCapExceeded ? 3 : 2;
  } catch (const Json::exception& e) {
    std::cerr << "error: ParseError: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
