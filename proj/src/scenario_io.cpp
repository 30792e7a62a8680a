#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "womc/error.hpp"
#include "womc/scenario.hpp"

namespace womc {

namespace {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

using Sections = std::map<std::string, std::vector<Line>>;

const std::set<std::string>& known_sections() {
  static const std::set<std::string> names{"agents", "links",  "spaces",      "horizon", "init",
                                           "noise",  "transition", "observation", "cost"};
  return names;
}

[[noreturn]] void parse_fail(const Line& l, const std::string& msg) {
  fail(Errc::ParseError, "line " + std::to_string(l.number) + ": " + msg);
}

Sections split_sections(const std::string& doc) {
  Sections out;
  std::istringstream in(doc);
  std::string raw;
  std::string current;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    for (std::string tok; ls >> tok;) line.tokens.push_back(tok);
    if (line.tokens.empty()) continue;
    const std::string& head = line.tokens[0];
    if (head.front() == '[') {
      if (line.tokens.size() != 1 || head.back() != ']') parse_fail(line, "malformed section header");
      current = head.substr(1, head.size() - 2);
      if (!known_sections().count(current)) parse_fail(line, "unknown section [" + current + "]");
      if (out.count(current)) parse_fail(line, "section [" + current + "] repeated");
      out[current];
      continue;
    }
    if (current.empty()) parse_fail(line, "content before the first section");
    out[current].push_back(std::move(line));
  }
  return out;
}

int parse_int(const Line& l, const std::string& tok, const std::string& what) {
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (tok.empty() || *end != '\0') parse_fail(l, "expected integer " + what + ", got '" + tok + "'");
  return static_cast<int>(v);
}

double parse_real(const Line& l, const std::string& tok, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || *end != '\0') parse_fail(l, "expected number " + what + ", got '" + tok + "'");
  return v;
}

// "t=*" -> nullopt, "t=N" -> N.
std::optional<int> parse_time(const Line& l, const std::string& tok, int horizon) {
  if (tok.rfind("t=", 0) != 0) parse_fail(l, "expected t=* or t=N, got '" + tok + "'");
  const std::string rest = tok.substr(2);
  if (rest == "*") return std::nullopt;
  const int t = parse_int(l, rest, "time");
  if (t < 0 || t > horizon) parse_fail(l, "time " + rest + " outside 0.." + std::to_string(horizon));
  return t;
}

int parse_agent(const Line& l, const std::string& tok, int K) {
  const int a = parse_int(l, tok, "agent");
  if (a < 1 || a > K) parse_fail(l, "agent " + tok + " outside 1.." + std::to_string(K));
  return a - 1;
}

int lookup(const Line& l, const FiniteSpace& sp, const std::string& tok) {
  const int i = sp.index_of(tok);
  if (i < 0) parse_fail(l, "'" + tok + "' is not a value of " + sp.name);
  return i;
}

const std::vector<Line>& section(const Sections& secs, const std::string& name) {
  static const std::vector<Line> empty;
  auto it = secs.find(name);
  return it == secs.end() ? empty : it->second;
}

const std::vector<Line>& required(const Sections& secs, const std::string& name) {
  auto it = secs.find(name);
  if (it == secs.end()) fail(Errc::ParseError, "missing section [" + name + "]");
  return it->second;
}

// Rows keyed by a domain tuple, with wildcard and per-time entries kept apart
// so that an explicit time overrides a wildcard.
template <class V>
struct TimedTable {
  std::map<std::vector<int>, V> wild;
  std::map<std::pair<int, std::vector<int>>, V> timed;

  void put(const Line& l, std::optional<int> t, std::vector<int> key, V v) {
    const bool fresh = t ? timed.emplace(std::make_pair(*t, key), v).second : wild.emplace(key, v).second;
    if (!fresh) parse_fail(l, "duplicate row");
  }
  const V* get(int t, const std::vector<int>& key) const {
    if (auto it = timed.find({t, key}); it != timed.end()) return &it->second;
    if (auto it = wild.find(key); it != wild.end()) return &it->second;
    return nullptr;
  }
};

std::vector<double> read_dist(const std::vector<std::pair<const Line*, std::vector<std::string>>>& rows,
                              const FiniteSpace& sp) {
  std::vector<double> p(sp.values.size(), 0.0);
  std::vector<bool> seen(sp.values.size(), false);
  for (const auto& [line, toks] : rows) {
    if (toks.size() != 2) parse_fail(*line, "expected '<value> <probability>'");
    const int i = lookup(*line, sp, toks[0]);
    if (seen[i]) parse_fail(*line, "duplicate probability for '" + toks[0] + "'");
    seen[i] = true;
    p[i] = parse_real(*line, toks[1], "probability");
  }
  return p;
}

std::string join_tuple(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
  return out;
}

}  // namespace

LoadedScenario load_scenario(const std::string& document) {
  const Sections secs = split_sections(document);
  Scenario s;

  int K = 0;
  for (const auto& l : required(secs, "agents")) {
    if (l.tokens[0] != "count" || l.tokens.size() != 2) parse_fail(l, "expected 'count <K>'");
    if (K) parse_fail(l, "agent count repeated");
    K = parse_int(l, l.tokens[1], "agent count");
    if (K < 1) parse_fail(l, "agent count must be at least 1");
  }
  if (!K) fail(Errc::ParseError, "[agents] must give 'count <K>'");
  s.agent_count = K;

  std::vector<Link> links;
  for (const auto& l : section(secs, "links")) {
    if (l.tokens[0] != "link" || l.tokens.size() != 4) parse_fail(l, "expected 'link <from> <to> <delay>'");
    links.push_back({parse_agent(l, l.tokens[1], K), parse_agent(l, l.tokens[2], K),
                     parse_int(l, l.tokens[3], "delay")});
  }
  Topology topo(K, std::move(links));
  validate_topology(topo);

  bool have_T = false;
  for (const auto& l : required(secs, "horizon")) {
    if (l.tokens[0] != "T" || l.tokens.size() != 2) parse_fail(l, "expected 'T <horizon>'");
    if (have_T) parse_fail(l, "horizon repeated");
    s.horizon = parse_int(l, l.tokens[1], "horizon");
    if (s.horizon < 0) parse_fail(l, "horizon must be nonnegative");
    have_T = true;
  }
  if (!have_T) fail(Errc::ParseError, "[horizon] must give 'T <horizon>'");
  const int T = s.horizon;

  s.action_spaces.resize(K);
  s.obs_spaces.resize(K);
  s.v_spaces.resize(K);
  std::vector<const Line*> feasible_lines;
  auto set_space = [](const Line& l, FiniteSpace& sp, const std::string& name, std::size_t first) {
    if (!sp.values.empty()) parse_fail(l, name + " space declared twice");
    if (l.tokens.size() <= first) parse_fail(l, name + " space has no values");
    sp.name = name;
    sp.values.assign(l.tokens.begin() + static_cast<long>(first), l.tokens.end());
    for (std::size_t i = 0; i < sp.values.size(); ++i)
      for (std::size_t j = i + 1; j < sp.values.size(); ++j)
        if (sp.values[i] == sp.values[j]) parse_fail(l, name + " space repeats '" + sp.values[i] + "'");
  };
  for (const auto& l : required(secs, "spaces")) {
    const std::string& key = l.tokens[0];
    if (key == "state") {
      set_space(l, s.state_space, "state", 1);
    } else if (key == "wnoise") {
      set_space(l, s.w_space, "wnoise", 1);
    } else if (key == "action" || key == "obs" || key == "vnoise") {
      if (l.tokens.size() < 2) parse_fail(l, "expected '" + key + " <agent> <values...>'");
      const int k = parse_agent(l, l.tokens[1], K);
      const std::string name = key + " " + std::to_string(k + 1);
      if (key == "action" && l.tokens.size() > 2 && l.tokens[2].rfind("t=", 0) == 0) {
        feasible_lines.push_back(&l);
        continue;
      }
      auto& sp = key == "action" ? s.action_spaces[k] : key == "obs" ? s.obs_spaces[k] : s.v_spaces[k];
      set_space(l, sp, name, 2);
    } else {
      parse_fail(l, "unknown key '" + key + "' in [spaces]");
    }
  }
  if (s.state_space.values.empty()) fail(Errc::ParseError, "missing state space");
  if (s.w_space.values.empty()) s.w_space = {"wnoise", {"-"}};
  for (int k = 0; k < K; ++k) {
    const std::string a = std::to_string(k + 1);
    if (s.action_spaces[k].values.empty()) fail(Errc::ParseError, "missing action space for agent " + a);
    if (s.obs_spaces[k].values.empty()) fail(Errc::ParseError, "missing obs space for agent " + a);
    if (s.v_spaces[k].values.empty()) s.v_spaces[k] = {"vnoise " + a, {"-"}};
  }

  s.allocate_tables();
  s.default_feasible();
  {
    // Wildcard overrides first, then per-time ones on top.
    std::set<std::pair<int, int>> seen_wild, seen_timed;
    for (int pass = 0; pass < 2; ++pass)
      for (const Line* l : feasible_lines) {
        const int k = parse_agent(*l, l->tokens[1], K);
        const auto t = parse_time(*l, l->tokens[2], T);
        if (t.has_value() != (pass == 1)) continue;
        std::vector<int> subset;
        for (std::size_t i = 3; i < l->tokens.size(); ++i)
          subset.push_back(lookup(*l, s.action_spaces[k], l->tokens[i]));
        if (subset.empty()) parse_fail(*l, "feasible action set is empty");
        std::sort(subset.begin(), subset.end());
        if (std::adjacent_find(subset.begin(), subset.end()) != subset.end()) parse_fail(*l, "feasible set repeats");
        auto& seen = t ? seen_timed : seen_wild;
        if (!seen.insert({k, t.value_or(-1)}).second) parse_fail(*l, "duplicate feasible set");
        for (int tt = 0; tt <= T; ++tt)
          if (!t || *t == tt) s.feasible[k][tt] = subset;
      }
  }

  {
    std::vector<std::pair<const Line*, std::vector<std::string>>> rows;
    for (const auto& l : required(secs, "init")) rows.push_back({&l, l.tokens});
    s.init_dist = read_dist(rows, s.state_space);
  }

  {
    // One row group per (which, agent, time spec); explicit times replace the wildcard group.
    using Rows = std::vector<std::pair<const Line*, std::vector<std::string>>>;
    std::map<std::tuple<int, std::optional<int>>, Rows> groups;  // which: 0 = w, 1 + k = v^k
    for (const auto& l : section(secs, "noise")) {
      const std::string& key = l.tokens[0];
      std::size_t at = 1;
      int which = 0;
      if (key == "v") {
        if (l.tokens.size() < 2) parse_fail(l, "expected 'v <agent> t=.. <value> <p>'");
        which = 1 + parse_agent(l, l.tokens[1], K);
        at = 2;
      } else if (key != "w") {
        parse_fail(l, "unknown key '" + key + "' in [noise]");
      }
      if (l.tokens.size() != at + 3) parse_fail(l, "expected '" + key + " ... t=.. <value> <probability>'");
      const auto t = parse_time(l, l.tokens[at], T);
      groups[{which, t}].push_back({&l, {l.tokens[at + 1], l.tokens[at + 2]}});
    }
    for (int which = 0; which <= K; ++which) {
      const FiniteSpace& sp = which == 0 ? s.w_space : s.v_spaces[which - 1];
      for (int t = 0; t <= T; ++t) {
        const Rows* rows = nullptr;
        if (auto it = groups.find({which, t}); it != groups.end()) rows = &it->second;
        else if (auto it2 = groups.find({which, std::nullopt}); it2 != groups.end()) rows = &it2->second;
        std::vector<double> p;
        if (rows) {
          p = read_dist(*rows, sp);
        } else if (sp.values.size() == 1) {
          p = {1.0};  // singleton noise needs no row
        } else {
          fail(Errc::MissingTableEntry,
               "no distribution for " + sp.name + " at t=" + std::to_string(t));
        }
        if (which == 0) s.w_dists[t] = p;
        else s.v_dists[t][which - 1] = p;
      }
    }
  }

  const std::size_t nU = static_cast<std::size_t>(K);
  auto read_actions = [&](const Line& l, std::size_t first, std::vector<int>& key) {
    for (std::size_t k = 0; k < nU; ++k) key.push_back(lookup(l, s.action_spaces[k], l.tokens[first + k]));
  };
  auto action_names = [&](int joint) {
    std::vector<int> u = s.unpack_actions(joint);
    std::string out = "(";
    for (int k = 0; k < K; ++k) out += (k ? "," : "") + s.action_spaces[k].values[u[k]];
    return out + ")";
  };

  {
    TimedTable<int> tab;
    for (const auto& l : required(secs, "transition")) {
      if (l.tokens.size() != nU + 4) parse_fail(l, "expected 't=.. <x> <u1..uK> <w> <x_next>'");
      const auto t = parse_time(l, l.tokens[0], T);
      std::vector<int> key{lookup(l, s.state_space, l.tokens[1])};
      read_actions(l, 2, key);
      key.push_back(lookup(l, s.w_space, l.tokens[2 + nU]));
      tab.put(l, t, key, lookup(l, s.state_space, l.tokens[3 + nU]));
    }
    for (int t = 0; t <= T; ++t)
      for (int x = 0; x < s.state_space.size(); ++x)
        for (int j = 0; j < s.joint_action_count(); ++j)
          for (int w = 0; w < s.w_space.size(); ++w) {
            std::vector<int> key{x};
            for (int a : s.unpack_actions(j)) key.push_back(a);
            key.push_back(w);
            const int* v = tab.get(t, key);
            if (!v)
              fail(Errc::MissingTableEntry,
                   "transition row missing for " + join_tuple({"t=" + std::to_string(t), "x=" + s.state_space.values[x],
                                                               "u=" + action_names(j), "w=" + s.w_space.values[w]}));
            s.transition[s.transition_index(t, x, j, w)] = *v;
          }
  }

  {
    TimedTable<int> tab;
    for (const auto& l : required(secs, "observation")) {
      if (l.tokens.size() != 5) parse_fail(l, "expected '<agent> t=.. <x> <v> <y>'");
      const int k = parse_agent(l, l.tokens[0], K);
      const auto t = parse_time(l, l.tokens[1], T);
      std::vector<int> key{k, lookup(l, s.state_space, l.tokens[2]), lookup(l, s.v_spaces[k], l.tokens[3])};
      tab.put(l, t, key, lookup(l, s.obs_spaces[k], l.tokens[4]));
    }
    for (int k = 0; k < K; ++k)
      for (int t = 0; t <= T; ++t)
        for (int x = 0; x < s.state_space.size(); ++x)
          for (int v = 0; v < s.v_spaces[k].size(); ++v) {
            const int* y = tab.get(t, {k, x, v});
            if (!y)
              fail(Errc::MissingTableEntry,
                   "observation row missing for " +
                       join_tuple({"agent=" + std::to_string(k + 1), "t=" + std::to_string(t),
                                   "x=" + s.state_space.values[x], "v=" + s.v_spaces[k].values[v]}));
            s.observation[s.observation_index(k, t, x, v)] = *y;
          }
  }

  {
    TimedTable<double> tab;
    for (const auto& l : required(secs, "cost")) {
      if (l.tokens.size() != nU + 3) parse_fail(l, "expected 't=.. <x> <u1..uK> <cost>'");
      const auto t = parse_time(l, l.tokens[0], T);
      std::vector<int> key{lookup(l, s.state_space, l.tokens[1])};
      read_actions(l, 2, key);
      tab.put(l, t, key, parse_real(l, l.tokens[2 + nU], "cost"));
    }
    for (int t = 0; t <= T; ++t)
      for (int x = 0; x < s.state_space.size(); ++x)
        for (int j = 0; j < s.joint_action_count(); ++j) {
          std::vector<int> key{x};
          for (int a : s.unpack_actions(j)) key.push_back(a);
          const double* c = tab.get(t, key);
          if (!c)
            fail(Errc::MissingTableEntry,
                 "cost row missing for " + join_tuple({"t=" + std::to_string(t), "x=" + s.state_space.values[x],
                                                       "u=" + action_names(j)}));
          s.cost[s.cost_index(t, x, j)] = *c;
        }
  }

  validate_scenario(s);
  return {std::move(topo), std::move(s)};
}

LoadedScenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

namespace {

std::string real_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Emits one row per domain tuple, collapsed to t=* when constant over time.
template <class Get, class Emit>
void timed_rows(int T, std::size_t domain, Get&& get, Emit&& emit) {
  for (std::size_t i = 0; i < domain; ++i) {
    bool constant = true;
    for (int t = 1; t <= T; ++t) constant = constant && get(t, i) == get(0, i);
    if (constant) {
      emit(std::string("t=*"), i, get(0, i));
    } else {
      for (int t = 0; t <= T; ++t) emit("t=" + std::to_string(t), i, get(t, i));
    }
  }
}

}  // namespace

std::string write_scenario(const Topology& topology, const Scenario& s) {
  const int K = s.agent_count;
  const int T = s.horizon;
  std::ostringstream o;
  auto values = [](const FiniteSpace& sp) {
    std::string out;
    for (const auto& v : sp.values) out += " " + v;
    return out;
  };
  o << "[agents]\ncount " << K << "\n\n[links]\n";
  for (const auto& l : topology.links()) o << "link " << l.from + 1 << " " << l.to + 1 << " " << l.delay << "\n";
  o << "\n[spaces]\nstate" << values(s.state_space) << "\n";
  for (int k = 0; k < K; ++k) o << "action " << k + 1 << values(s.action_spaces[k]) << "\n";
  for (int k = 0; k < K; ++k)
    for (int t = 0; t <= T; ++t)
      if (static_cast<int>(s.feasible[k][t].size()) != s.action_spaces[k].size()) {
        o << "action " << k + 1 << " t=" << t;
        for (int a : s.feasible[k][t]) o << " " << s.action_spaces[k].values[a];
        o << "\n";
      }
  for (int k = 0; k < K; ++k) o << "obs " << k + 1 << values(s.obs_spaces[k]) << "\n";
  o << "wnoise" << values(s.w_space) << "\n";
  for (int k = 0; k < K; ++k) o << "vnoise " << k + 1 << values(s.v_spaces[k]) << "\n";
  o << "\n[horizon]\nT " << T << "\n\n[init]\n";
  for (int x = 0; x < s.state_space.size(); ++x) o << s.state_space.values[x] << " " << real_text(s.init_dist[x]) << "\n";

  o << "\n[noise]\n";
  auto dist_rows = [&](const std::string& prefix, const FiniteSpace& sp, auto&& dist_at) {
    bool constant = true;
    for (int t = 1; t <= T; ++t) constant = constant && dist_at(t) == dist_at(0);
    for (int t = 0; t <= (constant ? 0 : T); ++t) {
      const std::string ts = constant ? "t=*" : "t=" + std::to_string(t);
      for (int i = 0; i < sp.size(); ++i) o << prefix << ts << " " << sp.values[i] << " " << real_text(dist_at(t)[i]) << "\n";
    }
  };
  dist_rows("w ", s.w_space, [&](int t) -> const std::vector<double>& { return s.w_dists[t]; });
  for (int k = 0; k < K; ++k)
    dist_rows("v " + std::to_string(k + 1) + " ", s.v_spaces[k],
              [&, k](int t) -> const std::vector<double>& { return s.v_dists[t][k]; });

  const int X = s.state_space.size();
  const int U = s.joint_action_count();
  const int W = s.w_space.size();
  auto actions = [&](int joint) {
    std::string out;
    std::vector<int> u = s.unpack_actions(joint);
    for (int k = 0; k < K; ++k) out += " " + s.action_spaces[k].values[u[k]];
    return out;
  };

  o << "\n[transition]\n";
  timed_rows(
      T, static_cast<std::size_t>(X * U * W),
      [&](int t, std::size_t i) {
        const int x = static_cast<int>(i) / (U * W), j = static_cast<int>(i) / W % U, w = static_cast<int>(i) % W;
        return s.next_state(t, x, j, w);
      },
      [&](const std::string& ts, std::size_t i, int nx) {
        const int x = static_cast<int>(i) / (U * W), j = static_cast<int>(i) / W % U, w = static_cast<int>(i) % W;
        o << ts << " " << s.state_space.values[x] << actions(j) << " " << s.w_space.values[w] << " "
          << s.state_space.values[nx] << "\n";
      });

  o << "\n[observation]\n";
  for (int k = 0; k < K; ++k) {
    const int V = s.v_spaces[k].size();
    timed_rows(
        T, static_cast<std::size_t>(X * V),
        [&](int t, std::size_t i) { return s.observe(k, t, static_cast<int>(i) / V, static_cast<int>(i) % V); },
        [&](const std::string& ts, std::size_t i, int y) {
          o << k + 1 << " " << ts << " " << s.state_space.values[static_cast<int>(i) / V] << " "
            << s.v_spaces[k].values[static_cast<int>(i) % V] << " " << s.obs_spaces[k].values[y] << "\n";
        });
  }

  o << "\n[cost]\n";
  timed_rows(
      T, static_cast<std::size_t>(X * U),
      [&](int t, std::size_t i) { return s.stage_cost(t, static_cast<int>(i) / U, static_cast<int>(i) % U); },
      [&](const std::string& ts, std::size_t i, double c) {
        o << ts << " " << s.state_space.values[static_cast<int>(i) / U] << actions(static_cast<int>(i) % U) << " "
          << real_text(c) << "\n";
      });
  return o.str();
}

}  // namespace womc
