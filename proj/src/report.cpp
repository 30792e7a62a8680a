#include "womc/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <map>

#include "womc/error.hpp"
#include "womc/infostruct.hpp"

namespace womc {

std::string format12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double round12(double v) {
  const double r = std::strtod(format12(v).c_str(), nullptr);
  return r == 0.0 ? 0.0 : r;  // no "-0"
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json label_json(const VarLabel& l) {
  return Json{{"agent", l.agent + 1}, {"time", l.time}, {"kind", l.kind == Kind::Obs ? "Y" : "U"}};
}

Json labels_json(const InfoSet& set) {
  Json out = Json::array();
  for (const auto& l : set) out.push_back(label_json(l));
  return out;
}

Json infostruct_json(const DelayMatrix& d, int t) {
  Json agents = Json::array();
  const int K = d.agent_count();
  for (int k = 0; k < K; ++k) {
    Json inacc = Json::object();
    for (int j = k; j < K; ++j) inacc[std::to_string(j + 1)] = labels_json(inaccessible_labels(d, k, j, t));
    agents.push_back(Json{{"agent", k + 1},
                          {"memory", labels_json(memory_labels(d, k, t))},
                          {"accessible", labels_json(accessible_labels(d, k, t))},
                          {"new", labels_json(new_info_labels(d, k, t))},
                          {"inaccessible", inacc}});
  }
  return Json{{"time", t}, {"agents", agents}};
}

Json solve_json(const SolveResult& r, bool timing) {
  Json j{{"method", method_name(r.method)},
         {"agent", r.agent >= 0 ? Json(r.agent + 1) : Json(nullptr)},
         {"value", round12(r.value)},
         {"candidates", r.candidates}};
  if (timing) j["seconds"] = round12(r.seconds);
  return j;
}

namespace {

std::string key_or_dash(const Scenario& s, const Realization& r) {
  return r.labels.empty() ? "-" : realization_key(s, r);
}

const FiniteSpace& space_of(const Scenario& s, const VarLabel& l) {
  return l.kind == Kind::Obs ? s.obs_spaces[l.agent] : s.action_spaces[l.agent];
}

int value_index(const FiniteSpace& sp, const std::string& name, const std::string& what) {
  const int v = sp.index_of(name);
  if (v < 0) fail(Errc::ParseError, "unknown value '" + name + "' for " + what);
  return v;
}

// Parses "Y1@0=a,U2@1=b" (or "-") into a realization over `labels`.
Realization parse_key(const Scenario& s, const InfoSet& labels, const std::string& key) {
  std::map<VarLabel, std::string> given;
  if (key != "-" && !key.empty()) {
    std::size_t pos = 0;
    while (pos <= key.size()) {
      const std::size_t comma = std::min(key.find(',', pos), key.size());
      const std::string item = key.substr(pos, comma - pos);
      const std::size_t eq = item.find('=');
      if (eq == std::string::npos) fail(Errc::ParseError, "bad realization item '" + item + "'");
      given[parse_label(item.substr(0, eq))] = item.substr(eq + 1);
      pos = comma + 1;
    }
  }
  Json obj = Json::object();
  for (const auto& [l, v] : given) obj[to_string(l)] = v;
  return realization_from_json(s, labels, obj);
}

}  // namespace

Realization realization_from_json(const Scenario& s, const InfoSet& labels, const Json& j) {
  if (!j.is_object()) fail(Errc::ParseError, "realization must be an object");
  Realization r{labels, {}};
  for (const auto& l : labels) {
    const std::string name = to_string(l);
    if (!j.contains(name)) fail(Errc::ParseError, "realization misses " + name);
    r.values.push_back(value_index(space_of(s, l), j.at(name).get<std::string>(), name));
  }
  for (const auto& [name, v] : j.items())
    if (!labels.contains(parse_label(name))) fail(Errc::ParseError, "realization has extra label " + name);
  return r;
}

Json strategy_json(const Scenario& s, const FullStrategy& psi) {
  Json parts = Json::object();
  for (int j = 0; j < psi.agent_count(); ++j) {
    Json per_t = Json::object();
    for (std::size_t t = 0; t < psi.parts[j].size(); ++t) {
      const StrategyPart& p = psi.parts[j][t];
      Json conds = Json::object();
      for (std::uint64_t c = 0; c < p.cond.size(); ++c) {
        Json table = Json::object();
        for (std::uint64_t l = 0; l < p.domain.size(); ++l) {
          const int u = p.lookup(c, l);
          table[key_or_dash(s, p.domain.decode(l))] = u < 0 ? Json(nullptr) : Json(s.action_spaces[j].values[u]);
        }
        conds[key_or_dash(s, p.cond.decode(c))] = table;
      }
      per_t[std::to_string(t)] = conds;
    }
    parts[std::to_string(j + 1)] = per_t;
  }
  return Json{{"owner", psi.owner + 1}, {"parts", parts}};
}

Json belief_json(const Scenario& s, const BeliefState& pi) {
  Json states = Json::array();
  for (const auto& [key, p] : pi.probs) {
    const SufficientState st = pi.state(key);
    Json l = Json::object();
    for (std::size_t i = 0; i < st.l.labels.size(); ++i)
      l[to_string(st.l.labels.labels()[i])] = space_of(s, st.l.labels.labels()[i]).values[st.l.values[i]];
    states.push_back(Json{{"x", s.state_space.values[st.x]}, {"l", l}, {"prob", round12(p)}});
  }
  Json acc = Json::object();
  for (std::size_t i = 0; i < pi.accessible.labels.size(); ++i) {
    const VarLabel& lab = pi.accessible.labels.labels()[i];
    acc[to_string(lab)] = space_of(s, lab).values[pi.accessible.values[i]];
  }
  return Json{{"agent", pi.owner + 1},
              {"time", pi.time},
              {"accessible", acc},
              {"labels", labels_json(pi.labels.labels())},
              {"states", states}};
}

BeliefHistory parse_history(const Scenario& s, const DelayMatrix& d, int k, const Json& j) {
  if (!j.is_object() || !j.contains("time") || !j.contains("accessible"))
    fail(Errc::ParseError, "history needs \"time\" and \"accessible\"");
  const int t = j.at("time").get<int>();
  if (t < 0 || t > s.horizon) fail(Errc::ParseError, "history time out of range");
  BeliefHistory h;
  h.accessible = realization_from_json(s, accessible_labels(d, k, t), j.at("accessible"));
  const Json presc = j.value("prescriptions", Json::array());
  if (!presc.is_array() || static_cast<int>(presc.size()) != t)
    fail(Errc::ParseError, "history needs one prescription per time before " + std::to_string(t));
  for (int tau = 0; tau < t; ++tau) {
    CompletePrescription theta{k, tau, {}};
    const Json& at = presc[tau];
    for (int target = 0; target < s.agent_count; ++target) {
      Indexer dom(s, prescription_domain(d, k, target, tau));
      PrescriptionFunction f{k, target, tau, dom, std::vector<int>(dom.size(), s.feasible[target][tau][0])};
      const std::string name = std::to_string(target + 1);
      if (at.contains(name))
        for (const auto& [key, action] : at.at(name).items())
          f.table[dom.index(parse_key(s, dom.labels(), key))] =
              value_index(s.action_spaces[target], action.get<std::string>(), "action " + name);
      theta.parts.push_back(std::move(f));
    }
    h.thetas.push_back(std::move(theta));
  }
  return h;
}

std::string compare_csv(const std::vector<CompareRow>& rows, bool timing) {
  std::string out = "method,value,candidates,seconds,match_brute\n";
  for (const auto& r : rows) {
    out += r.method + "," + (r.value ? format12(*r.value) : "NA") + "," + std::to_string(r.candidates) + "," +
           (timing ? format12(r.seconds) : "NA") + "," + r.match_brute + "\n";
  }
  return out;
}

}  // namespace womc
