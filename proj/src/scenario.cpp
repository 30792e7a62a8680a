#include "womc/scenario.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "womc/error.hpp"
#include "womc/infostruct.hpp"
#include "womc/kernels.hpp"

namespace womc {

int FiniteSpace::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (values[i] == label) return i;
  return -1;
}

int Scenario::joint_action_count() const {
  int n = 1;
  for (const auto& a : action_spaces) n *= a.size();
  return n;
}

int Scenario::pack_actions(std::span<const int> actions) const {
  int joint = 0;
  for (int k = 0; k < agent_count; ++k) joint = joint * action_spaces[k].size() + actions[k];
  return joint;
}

std::vector<int> Scenario::unpack_actions(int joint) const {
  std::vector<int> u(static_cast<std::size_t>(agent_count));
  for (int k = agent_count - 1; k >= 0; --k) {
    u[k] = joint % action_spaces[k].size();
    joint /= action_spaces[k].size();
  }
  return u;
}

std::size_t Scenario::transition_index(int t, int x, int joint_u, int w) const {
  const std::size_t X = state_space.values.size();
  const std::size_t U = static_cast<std::size_t>(joint_action_count());
  const std::size_t W = w_space.values.size();
  return ((static_cast<std::size_t>(t) * X + x) * U + joint_u) * W + w;
}

std::size_t Scenario::observation_index(int k, int t, int x, int v) const {
  const std::size_t X = state_space.values.size();
  std::size_t base = 0;
  for (int j = 0; j < k; ++j) base += static_cast<std::size_t>(horizon + 1) * X * v_spaces[j].values.size();
  return base + (static_cast<std::size_t>(t) * X + x) * v_spaces[k].values.size() + v;
}

std::size_t Scenario::cost_index(int t, int x, int joint_u) const {
  return (static_cast<std::size_t>(t) * state_space.values.size() + x) * joint_action_count() + joint_u;
}

int Scenario::radix(const VarLabel& l) const {
  return l.kind == Kind::Obs ? obs_spaces[l.agent].size() : action_spaces[l.agent].size();
}

void Scenario::allocate_tables() {
  const std::size_t T1 = static_cast<std::size_t>(horizon + 1);
  const std::size_t X = state_space.values.size();
  const std::size_t U = static_cast<std::size_t>(joint_action_count());
  transition.assign(T1 * X * U * w_space.values.size(), 0);
  std::size_t obs = 0;
  for (const auto& v : v_spaces) obs += T1 * X * v.values.size();
  observation.assign(obs, 0);
  cost.assign(T1 * X * U, 0.0);
  init_dist.assign(X, 0.0);
  w_dists.assign(T1, std::vector<double>(w_space.values.size(), 0.0));
  v_dists.assign(T1, {});
  for (auto& per_t : v_dists)
    for (const auto& v : v_spaces) per_t.emplace_back(v.values.size(), 0.0);
}

void Scenario::default_feasible() {
  feasible.assign(static_cast<std::size_t>(agent_count), {});
  for (int k = 0; k < agent_count; ++k) {
    std::vector<int> all(static_cast<std::size_t>(action_spaces[k].size()));
    for (int i = 0; i < action_spaces[k].size(); ++i) all[i] = i;
    feasible[k].assign(static_cast<std::size_t>(horizon + 1), all);
  }
}

namespace {

void check_space(const FiniteSpace& sp, const std::string& what) {
  if (sp.values.empty()) fail(Errc::ParseError, what + " space is empty");
  for (std::size_t i = 0; i < sp.values.size(); ++i)
    for (std::size_t j = i + 1; j < sp.values.size(); ++j)
      if (sp.values[i] == sp.values[j]) fail(Errc::ParseError, what + " space repeats value '" + sp.values[i] + "'");
}

void check_dist(const std::vector<double>& p, std::size_t n, const std::string& what) {
  if (p.size() != n) fail(Errc::MissingTableEntry, what + " has " + std::to_string(p.size()) + " entries");
  double sum = 0.0;
  for (double q : p) {
    if (!(q >= 0.0) || !std::isfinite(q)) fail(Errc::BadDistribution, what + " has a negative or non-finite entry");
    sum += q;
  }
  if (std::abs(sum - 1.0) > 1e-12) fail(Errc::BadDistribution, what + " sums to " + std::to_string(sum));
}

}  // namespace

void validate_scenario(const Scenario& s) {
  const int K = s.agent_count;
  if (K < 1) fail(Errc::InvalidAgent, "agent count must be at least 1");
  if (s.horizon < 0) fail(Errc::ParseError, "horizon must be nonnegative");
  if (static_cast<int>(s.action_spaces.size()) != K || static_cast<int>(s.obs_spaces.size()) != K ||
      static_cast<int>(s.v_spaces.size()) != K)
    fail(Errc::MissingTableEntry, "per-agent spaces must be given for every agent");
  check_space(s.state_space, "state");
  check_space(s.w_space, "wnoise");
  for (int k = 0; k < K; ++k) {
    const std::string a = " " + std::to_string(k + 1);
    check_space(s.action_spaces[k], "action" + a);
    check_space(s.obs_spaces[k], "obs" + a);
    check_space(s.v_spaces[k], "vnoise" + a);
  }
  const std::size_t T1 = static_cast<std::size_t>(s.horizon + 1);
  const std::size_t X = s.state_space.values.size();
  const std::size_t U = static_cast<std::size_t>(s.joint_action_count());
  if (s.transition.size() != T1 * X * U * s.w_space.values.size())
    fail(Errc::MissingTableEntry, "transition table has the wrong size");
  for (int x : s.transition)
    if (x < 0 || x >= static_cast<int>(X)) fail(Errc::MissingTableEntry, "transition entry out of range");
  if (s.cost.size() != T1 * X * U) fail(Errc::MissingTableEntry, "cost table has the wrong size");
  for (double c : s.cost)
    if (!std::isfinite(c)) fail(Errc::ParseError, "cost entry is not finite");
  std::size_t obs = 0;
  for (const auto& v : s.v_spaces) obs += T1 * X * v.values.size();
  if (s.observation.size() != obs) fail(Errc::MissingTableEntry, "observation table has the wrong size");
  for (int k = 0; k < K; ++k)
    for (int t = 0; t <= s.horizon; ++t)
      for (int x = 0; x < static_cast<int>(X); ++x)
        for (int v = 0; v < s.v_spaces[k].size(); ++v) {
          const int y = s.observe(k, t, x, v);
          if (y < 0 || y >= s.obs_spaces[k].size()) fail(Errc::MissingTableEntry, "observation entry out of range");
        }
  check_dist(s.init_dist, X, "init");
  if (s.w_dists.size() != T1 || s.v_dists.size() != T1) fail(Errc::MissingTableEntry, "noise tables must cover 0..T");
  for (std::size_t t = 0; t < T1; ++t) {
    check_dist(s.w_dists[t], s.w_space.values.size(), "w noise at t=" + std::to_string(t));
    if (static_cast<int>(s.v_dists[t].size()) != K) fail(Errc::MissingTableEntry, "v noise must cover every agent");
    for (int k = 0; k < K; ++k)
      check_dist(s.v_dists[t][k], s.v_spaces[k].values.size(),
                 "v noise of agent " + std::to_string(k + 1) + " at t=" + std::to_string(t));
  }
  if (static_cast<int>(s.feasible.size()) != K) fail(Errc::MissingTableEntry, "feasible sets must cover every agent");
  for (int k = 0; k < K; ++k) {
    if (s.feasible[k].size() != T1) fail(Errc::MissingTableEntry, "feasible sets must cover 0..T");
    for (const auto& f : s.feasible[k]) {
      if (f.empty()) fail(Errc::ParseError, "empty feasible action set for agent " + std::to_string(k + 1));
      for (int a : f)
        if (a < 0 || a >= s.action_spaces[k].size()) fail(Errc::ParseError, "feasible action out of range");
    }
  }
}

double Trajectory::total_cost() const {
  double sum = 0.0;
  for (double c : stage_costs) sum += c;
  return sum;
}

Indexer::Indexer(const Scenario& s, InfoSet labels) : labels_(std::move(labels)) {
  const std::size_t n = labels_.size();
  radix_.resize(n);
  stride_.resize(n);
  size_ = 1;
  for (std::size_t i = n; i-- > 0;) {
    radix_[i] = s.radix(labels_.labels()[i]);
    stride_[i] = size_;
    if (size_ > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(radix_[i]))
      fail(Errc::EnumerationCapExceeded, "realization count of " + std::to_string(n) + " labels overflows");
    size_ *= static_cast<std::uint64_t>(radix_[i]);
  }
}

std::uint64_t Indexer::index(const Trajectory& tr) const {
  std::uint64_t idx = 0;
  const auto& ls = labels_.labels();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const int v = tr.value(ls[i]);
    if (v < 0) fail(Errc::InvalidArgument, to_string(ls[i]) + " has no value yet");
    idx += stride_[i] * static_cast<std::uint64_t>(v);
  }
  return idx;
}

std::uint64_t Indexer::index(const Realization& r) const {
  std::uint64_t idx = 0;
  const auto& ls = labels_.labels();
  const bool same = r.labels == labels_;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const int v = same ? r.values[i] : r.value(ls[i]);
    idx += stride_[i] * static_cast<std::uint64_t>(v);
  }
  return idx;
}

Realization Indexer::decode(std::uint64_t index) const {
  Realization r;
  r.labels = labels_;
  r.values.resize(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    r.values[i] = static_cast<int>(index / stride_[i]);
    index %= stride_[i];
  }
  return r;
}

Realization realization_of(const Trajectory& tr, const InfoSet& labels) {
  Realization r;
  r.labels = labels;
  r.values.reserve(labels.size());
  for (const auto& l : labels) {
    const int v = tr.value(l);
    if (v < 0) fail(Errc::InvalidArgument, to_string(l) + " has no value yet");
    r.values.push_back(v);
  }
  return r;
}

Policy Policy::blank(const Scenario& s, const DelayMatrix& d) {
  Policy g;
  g.tables_.resize(static_cast<std::size_t>(s.agent_count));
  for (int k = 0; k < s.agent_count; ++k)
    for (int t = 0; t <= s.horizon; ++t) {
      PolicyTable tab{Indexer(s, memory_labels(d, k, t)), {}};
      if (tab.memory.size() > kMaxTableEntries)
        fail(Errc::EnumerationCapExceeded, "policy table of agent " + std::to_string(k + 1) + " at t=" +
                                               std::to_string(t) + " has " + std::to_string(tab.memory.size()) +
                                               " entries");
      tab.action.assign(tab.memory.size(), -1);
      g.tables_[k].push_back(std::move(tab));
    }
  return g;
}

Policy Policy::constant(const Scenario& s, const DelayMatrix& d, const std::vector<int>& actions) {
  Policy g = blank(s, d);
  for (int k = 0; k < s.agent_count; ++k)
    for (auto& tab : g.tables_[k]) std::fill(tab.action.begin(), tab.action.end(), actions.at(k));
  return g;
}

int Policy::act(int k, int t, const Trajectory& tr) const {
  const PolicyTable& tab = tables_.at(k).at(t);
  const std::uint64_t idx = tab.memory.index(tr);
  const int a = tab.action[idx];
  if (a < 0)
    fail(Errc::UndefinedPolicyEntry, "agent " + std::to_string(k + 1) + " at t=" + std::to_string(t) +
                                         " has no action for memory realization #" + std::to_string(idx));
  return a;
}

bool operator==(const Policy& a, const Policy& b) {
  if (a.tables_.size() != b.tables_.size()) return false;
  for (std::size_t k = 0; k < a.tables_.size(); ++k) {
    if (a.tables_[k].size() != b.tables_[k].size()) return false;
    for (std::size_t t = 0; t < a.tables_[k].size(); ++t)
      if (a.tables_[k][t].memory.labels() != b.tables_[k][t].memory.labels() ||
          a.tables_[k][t].action != b.tables_[k][t].action)
        return false;
  }
  return true;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

int draw(std::uint64_t seed, std::uint64_t stream, const std::vector<double>& p) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(stream)));
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  double cum = 0.0;
  int last = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    last = static_cast<int>(i);
    cum += p[i];
    if (u < cum) return last;
  }
  return last;
}

}  // namespace

World sample_world(const Scenario& s, std::uint64_t seed) {
  const int K = s.agent_count;
  const int T = s.horizon;
  World w;
  w.x0 = draw(seed, 0, s.init_dist);
  w.prob = s.init_dist[w.x0];
  w.w.resize(static_cast<std::size_t>(T + 1));
  w.v.resize(static_cast<std::size_t>((T + 1) * K));
  for (int t = 0; t <= T; ++t) {
    w.w[t] = draw(seed, 1 + static_cast<std::uint64_t>(t), s.w_dists[t]);
    w.prob *= s.w_dists[t][w.w[t]];
    for (int k = 0; k < K; ++k) {
      const int v = draw(seed, 1 + static_cast<std::uint64_t>(T + 1) + static_cast<std::uint64_t>(t * K + k),
                         s.v_dists[t][k]);
      w.v[t * K + k] = v;
      w.prob *= s.v_dists[t][k][v];
    }
  }
  return w;
}

Trajectory simulate_world(const Scenario& s, const Topology& topology, const Policy& g, const World& world) {
  const int K = s.agent_count;
  const int T = s.horizon;
  struct InFlight {
    int packet;  // index into transmissions
    int to;
    Path path;
    std::size_t hop;  // index of the node the packet is travelling towards
    int arrival;      // time it reaches path.nodes[hop]
  };
  std::vector<std::vector<Path>> paths(static_cast<std::size_t>(K), std::vector<Path>(static_cast<std::size_t>(K)));
  for (int j = 0; j < K; ++j)
    for (int k = 0; k < K; ++k)
      if (j != k) paths[j][k] = information_path(topology, j, k);

  Trajectory tr;
  tr.horizon = T;
  tr.agent_count = K;
  tr.states.assign(static_cast<std::size_t>(T + 2), -1);
  tr.obs.assign(static_cast<std::size_t>((T + 1) * K), -1);
  tr.act.assign(static_cast<std::size_t>((T + 1) * K), -1);
  tr.stage_costs.assign(static_cast<std::size_t>(T + 1), 0.0);
  tr.w = world.w;
  tr.v = world.v;
  tr.states[0] = world.x0;

  std::vector<std::map<VarLabel, int>> memory(static_cast<std::size_t>(K));
  std::vector<InFlight> flying;
  std::vector<int> u(static_cast<std::size_t>(K));
  for (int t = 0; t <= T; ++t) {
    // Receive: move every packet due now one hop and memorize deliveries.
    std::vector<InFlight> still;
    for (auto& f : flying) {
      while (f.arrival == t) {
        if (f.hop + 1 == f.path.nodes.size()) {
          const Transmission& p = tr.transmissions[f.packet];
          memory[f.to][{p.from, p.time, Kind::Obs}] = p.obs;
          if (p.prev_act >= 0) memory[f.to][{p.from, p.time - 1, Kind::Act}] = p.prev_act;
          tr.deliveries.push_back({p.from, f.to, p.time, t, f.path.nodes});
          break;
        }
        const int here = f.path.nodes[f.hop];
        const int next = f.path.nodes[f.hop + 1];
        f.arrival = t + *topology.link_delay(here, next);
        ++f.hop;
      }
      if (f.arrival > t || f.hop + 1 < f.path.nodes.size()) still.push_back(std::move(f));
    }
    flying = std::move(still);

    const int x = tr.states[t];
    for (int k = 0; k < K; ++k) {
      const int y = s.observe(k, t, x, world.v[t * K + k]);
      tr.obs[t * K + k] = y;
      memory[k][{k, t, Kind::Obs}] = y;
      if (t > 0) memory[k][{k, t - 1, Kind::Act}] = tr.act[(t - 1) * K + k];
    }
    // Transmit the same-cycle observation and the previous action.
    for (int k = 0; k < K; ++k) {
      const int packet = static_cast<int>(tr.transmissions.size());
      tr.transmissions.push_back({k, t, tr.obs[t * K + k], t > 0 ? tr.act[(t - 1) * K + k] : -1});
      for (int j = 0; j < K; ++j) {
        if (j == k) continue;
        const Path& p = paths[k][j];
        flying.push_back({packet, j, p, 1, t + *topology.link_delay(p.nodes[0], p.nodes[1])});
      }
    }
    for (int k = 0; k < K; ++k) {
      const PolicyTable& tab = g.table(k, t);
      Realization m;
      m.labels = tab.memory.labels();
      for (const auto& l : m.labels) {
        auto it = memory[k].find(l);
        if (it == memory[k].end())
          fail(Errc::InvalidArgument, "agent " + std::to_string(k + 1) + " never received " + to_string(l));
        m.values.push_back(it->second);
      }
      const int a = tab.action[tab.memory.index(m)];
      if (a < 0)
        fail(Errc::UndefinedPolicyEntry,
             "agent " + std::to_string(k + 1) + " at t=" + std::to_string(t) + " reached an undefined memory");
      u[k] = a;
      tr.act[t * K + k] = a;
    }
    const int joint = s.pack_actions(u);
    tr.stage_costs[t] = s.stage_cost(t, x, joint);
    tr.states[t + 1] = s.next_state(t, x, joint, world.w[t]);
  }
  return tr;
}

Trajectory simulate(const Scenario& s, const Topology& topology, const Policy& g, std::uint64_t seed) {
  return simulate_world(s, topology, g, sample_world(s, seed));
}

Trajectory propagate(const Scenario& s, const World& world, const Policy& g) {
  return rollout(s, world, s.horizon + 1, [&](int k, int t, const Trajectory& tr) { return g.act(k, t, tr); });
}

World primitives_of(const Trajectory& tr, double prob) {
  World w;
  w.x0 = tr.states.at(0);
  w.w = tr.w;
  w.v = tr.v;
  w.prob = prob;
  return w;
}

std::vector<WeightedTrajectory> joint_distribution(const Scenario& s, const Policy& g, const Limits& limits) {
  return propagate_all(s, enumerate_worlds(s, limits.primitive_cap), g, limits.jobs);
}

std::uint64_t primitive_count(const Scenario& s) {
  const std::uint64_t big = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t n = static_cast<std::uint64_t>(s.state_space.size());
  auto mul = [&](std::uint64_t f) {
    if (f != 0 && n > big / f) n = big;
    else n *= f;
  };
  for (int t = 0; t <= s.horizon; ++t) {
    mul(static_cast<std::uint64_t>(s.w_space.size()));
    for (const auto& v : s.v_spaces) mul(static_cast<std::uint64_t>(v.size()));
  }
  return n;
}

}  // namespace womc
