#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "womc/scenario.hpp"
#include "womc/topology.hpp"
#include "womc/verify.hpp"

namespace womc::detail {

struct Instance {
  std::string name;
  std::uint64_t seed = 0;
  Topology topology;
  DelayMatrix d;
  int horizon = 0;
  const Scenario* s = nullptr;  // null for topology-only instances
  int strategies = 6;           // random strategies per agent for the belief and transfer suites
  int policies = 10;            // random policies for the equivalence suites
  bool solve = false;           // run the solver suites
  bool corrupt = false;
  Limits limits;
};

/// Records one check's outcome over many instances.
class Sink {
 public:
  Sink(CheckResult& r, const Instance& inst) : r_(r), inst_(inst) {}
  void run() { ++r_.instances; }
  void skip() { ++r_.skipped; }
  /// Tracks the worst deviation; above `tol` it is a failure.
  void deviation(double dev, double tol, const std::function<std::string()>& describe);
  void violation(const std::function<std::string()>& describe) { deviation(1.0, 0.0, describe); }
  bool failed() const { return !r_.pass; }

 private:
  CheckResult& r_;
  const Instance& inst_;
};

class Suite {
 public:
  Suite();
  Sink at(const std::string& name, const Instance& inst);
  std::vector<CheckResult> take() { return std::move(checks_); }

 private:
  std::vector<CheckResult> checks_;
  std::map<std::string, std::size_t> index_;
};

void topology_checks(Suite& suite, const Instance& inst);
void scenario_checks(Suite& suite, const Instance& inst);   // needs inst.s
void infostruct_checks(Suite& suite, const Instance& inst); // relay part uses inst.s or a unit scenario
void prescription_checks(Suite& suite, const Instance& inst);
void belief_checks(Suite& suite, const Instance& inst);
void solver_checks(Suite& suite, const Instance& inst);

}  // namespace womc::detail
