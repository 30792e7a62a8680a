#include "womc/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "womc/error.hpp"
#include "womc/infostruct.hpp"
#include "womc/kernels.hpp"

namespace womc {

std::vector<InfoSet> sufficient_components(const DelayMatrix& d, int k, int t) {
  std::vector<InfoSet> out;
  for (int i = 0; i < d.agent_count(); ++i)
    out.push_back(i < k ? inaccessible_labels(d, i, k, t) : inaccessible_labels(d, i, i, t));
  return out;
}

InfoSet sufficient_labels(const DelayMatrix& d, int k, int t) {
  InfoSet all;
  for (const auto& c : sufficient_components(d, k, t)) all = set_union(all, c);
  return all;
}

Realization SufficientState::component(const DelayMatrix& d, int i) const {
  return l.project(sufficient_components(d, owner, time)[i]);
}

std::vector<SufficientState> sufficient_state_space(const Scenario& s, const DelayMatrix& d, int k, int t,
                                                    std::uint64_t cap) {
  Indexer idx(s, sufficient_labels(d, k, t));
  const auto X = static_cast<std::uint64_t>(s.state_space.size());
  if (idx.size() > cap / X)
    fail(Errc::EnumerationCapExceeded, "sufficient state space of agent " + std::to_string(k + 1) + " at t=" +
                                           std::to_string(t) + " exceeds cap " + std::to_string(cap));
  std::vector<SufficientState> out;
  out.reserve(X * idx.size());
  for (int x = 0; x < static_cast<int>(X); ++x)
    for (std::uint64_t i = 0; i < idx.size(); ++i) out.push_back({k, t, x, idx.decode(i)});
  return out;
}

namespace {

std::vector<std::uint64_t> strides_of(const Indexer& idx) {
  std::vector<std::uint64_t> st(idx.labels().size());
  std::uint64_t acc = 1;
  for (std::size_t i = st.size(); i-- > 0;) {
    st[i] = acc;
    acc *= static_cast<std::uint64_t>(idx.radix(i));
  }
  return st;
}

void decode_values(const Indexer& idx, std::uint64_t index, std::vector<int>& out) {
  out.resize(idx.labels().size());
  for (std::size_t i = out.size(); i-- > 0;) {
    const auto r = static_cast<std::uint64_t>(idx.radix(i));
    out[i] = static_cast<int>(index % r);
    index /= r;
  }
}

}  // namespace

StepPlan::StepPlan(const Scenario& s, const DelayMatrix& d, int k, int t) : k_(k), t_(t), horizon_(s.horizon) {
  current_ = Indexer(s, sufficient_labels(d, k, t));
  accessible_ = Indexer(s, accessible_labels(d, k, t));
  for (int j = 0; j < s.agent_count; ++j) {
    domains_.emplace_back(s, prescription_domain(d, k, j, t));
    const auto st = strides_of(domains_.back());
    std::vector<std::pair<int, std::uint64_t>> r;
    const auto& ls = domains_.back().labels().labels();
    for (std::size_t p = 0; p < ls.size(); ++p) r.emplace_back(current_.labels().position(ls[p]), st[p]);
    domain_route_.push_back(std::move(r));
  }
  if (t < s.horizon) {
    next_ = Indexer(s, sufficient_labels(d, k, t + 1));
    new_info_ = Indexer(s, new_info_labels(d, k, t + 1));
    next_route_ = route(s, next_.labels(), next_);
    z_route_ = route(s, new_info_.labels(), new_info_);
  }
}

std::vector<StepPlan::Source> StepPlan::route(const Scenario&, const InfoSet& target, const Indexer& idx) const {
  const auto st = strides_of(idx);
  std::vector<Source> out;
  for (std::size_t p = 0; p < target.size(); ++p) {
    const VarLabel& l = target.labels()[p];
    Source src{0, 0, st[p]};
    if (l.kind == Kind::Obs && l.time == t_ + 1) {
      src.kind = 3;
      src.pos = l.agent;
    } else if (l.kind == Kind::Act && l.time == t_) {
      src.kind = 2;
      src.pos = l.agent;
    } else if (int q = current_.labels().position(l); q >= 0) {
      src.pos = q;
    } else if (int r = accessible_.labels().position(l); r >= 0) {
      src.kind = 1;
      src.pos = r;
    } else {
      fail(Errc::InsufficientState, to_string(l) + " is neither in the state nor accessible");
    }
    out.push_back(src);
  }
  return out;
}

void StepPlan::check_theta(const CompletePrescription& theta) const {
  if (static_cast<int>(theta.parts.size()) != static_cast<int>(domains_.size()))
    fail(Errc::DomainMismatch, "complete prescription has " + std::to_string(theta.parts.size()) + " parts");
  for (std::size_t j = 0; j < domains_.size(); ++j)
    if (theta.parts[j].domain.labels() != domains_[j].labels())
      fail(Errc::DomainMismatch, "prescription for agent " + std::to_string(j + 1) + " at t=" + std::to_string(t_) +
                                     " has the wrong domain");
}

std::uint64_t StepPlan::domain_index(int j, const std::vector<int>& current) const {
  std::uint64_t idx = 0;
  for (const auto& [pos, stride] : domain_route_[j]) idx += stride * static_cast<std::uint64_t>(current[pos]);
  return idx;
}

int StepPlan::decode(std::uint64_t key, std::vector<int>& current) const {
  decode_values(current_, key % current_.size(), current);
  return static_cast<int>(key / current_.size());
}

void StepPlan::actions(const CompletePrescription& theta, const std::vector<int>& current, std::vector<int>& u) const {
  u.resize(domains_.size());
  for (std::size_t j = 0; j < domains_.size(); ++j)
    u[j] = theta.parts[j].table[domain_index(static_cast<int>(j), current)];
}

bool StepPlan::advance(const Scenario& s, int x, const std::vector<int>& current, const std::vector<int>* accessible,
                       const std::vector<int>& u, int w, const std::vector<int>& v_next, int& x_next,
                       std::uint64_t& next_index, std::uint64_t& z_index) const {
  x_next = s.next_state(t_, x, s.pack_actions(u), w);
  const int K = s.agent_count;
  int y_next[64];
  for (int j = 0; j < K; ++j) y_next[j] = s.observe(j, t_ + 1, x_next, v_next[j]);
  auto value = [&](const Source& src, int& out) {
    switch (src.kind) {
      case 0: out = current[src.pos]; return true;
      case 1:
        if (!accessible) return false;
        out = (*accessible)[src.pos];
        return true;
      case 2: out = u[src.pos]; return true;
      default: out = y_next[src.pos]; return true;
    }
  };
  next_index = 0;
  z_index = 0;
  int v = 0;
  for (const auto& src : next_route_) {
    if (!value(src, v)) return false;
    next_index += src.stride * static_cast<std::uint64_t>(v);
  }
  for (const auto& src : z_route_) {
    if (!value(src, v)) return false;
    z_index += src.stride * static_cast<std::uint64_t>(v);
  }
  return true;
}

StepResult state_step(const Scenario& s, const DelayMatrix& d, const SufficientState& st, int w,
                      const std::vector<int>& v_next, const CompletePrescription& theta) {
  if (st.time >= s.horizon) fail(Errc::InvalidArgument, "no step after the horizon");
  if (s.agent_count > 64) fail(Errc::InvalidArgument, "at most 64 agents");
  StepPlan plan(s, d, st.owner, st.time);
  plan.check_theta(theta);
  if (st.l.labels != plan.current().labels()) fail(Errc::DomainMismatch, "sufficient state has the wrong labels");
  std::vector<int> u;
  plan.actions(theta, st.l.values, u);
  int x_next = 0;
  std::uint64_t ni = 0, zi = 0;
  if (!plan.advance(s, st.x, st.l.values, nullptr, u, w, v_next, x_next, ni, zi))
    fail(Errc::InsufficientState, "agent " + std::to_string(st.owner + 1) + " at t=" + std::to_string(st.time) +
                                      " needs accessible values to form the next state");
  return {{st.owner, st.time + 1, x_next, plan.next().decode(ni)}, plan.new_info().decode(zi)};
}

double stage_cost_hat(const Scenario& s, const SufficientState& st, const CompletePrescription& theta) {
  std::vector<int> u(static_cast<std::size_t>(s.agent_count));
  for (int j = 0; j < s.agent_count; ++j) {
    const PrescriptionFunction& gamma = theta.parts.at(j);
    u[j] = act(gamma, st.l.project(gamma.domain.labels()));
  }
  return s.stage_cost(st.time, st.x, s.pack_actions(u));
}

double BeliefState::total() const {
  double sum = 0.0;
  for (const auto& e : probs) sum += e.second;
  return sum;
}

double BeliefState::prob(std::uint64_t key) const {
  auto it = std::lower_bound(probs.begin(), probs.end(), std::make_pair(key, -1.0));
  return it != probs.end() && it->first == key ? it->second : 0.0;
}

SufficientState BeliefState::state(std::uint64_t key) const {
  return {owner, time, static_cast<int>(key / labels.size()), labels.decode(key % labels.size())};
}

double linf_distance(const BeliefState& a, const BeliefState& b) {
  if (a.owner != b.owner || a.time != b.time || a.labels.labels() != b.labels.labels())
    return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.probs.size() || j < b.probs.size()) {
    if (j == b.probs.size() || (i < a.probs.size() && a.probs[i].first < b.probs[j].first)) {
      worst = std::max(worst, a.probs[i++].second);
    } else if (i == a.probs.size() || b.probs[j].first < a.probs[i].first) {
      worst = std::max(worst, b.probs[j++].second);
    } else {
      worst = std::max(worst, std::abs(a.probs[i++].second - b.probs[j++].second));
    }
  }
  return worst;
}

namespace {

BeliefState normalized(int k, int t, const Indexer& labels, Realization accessible,
                       const std::map<std::uint64_t, double>& mass, double total) {
  BeliefState b{k, t, labels, std::move(accessible), {}};
  b.probs.reserve(mass.size());
  for (const auto& [key, p] : mass) b.probs.emplace_back(key, p / total);
  return b;
}

}  // namespace

BeliefState belief_from_scratch(const Scenario& s, const DelayMatrix& d, int k, const Realization& a,
                                const std::vector<CompletePrescription>& thetas, std::uint64_t cap) {
  const int t = static_cast<int>(thetas.size());
  if (t > s.horizon) fail(Errc::InvalidArgument, "more prescriptions than time steps");
  const InfoSet acc = accessible_labels(d, k, t);
  if (a.labels != acc) fail(Errc::DomainMismatch, "conditioning realization must cover exactly A^k_t");
  for (int tau = 0; tau < t; ++tau) StepPlan(s, d, k, tau).check_theta(thetas[tau]);
  const Indexer labels(s, sufficient_labels(d, k, t));
  std::map<std::uint64_t, double> mass;
  double total = 0.0;
  for (const World& w : enumerate_worlds(s, cap)) {
    const Trajectory tr = rollout(s, w, t, [&](int j, int tau, const Trajectory& p) {
      const PrescriptionFunction& gamma = thetas[tau].parts[j];
      return gamma.table[gamma.domain.index(p)];
    });
    if (realization_of(tr, acc).values != a.values) continue;
    mass[static_cast<std::uint64_t>(tr.states[t]) * labels.size() + labels.index(tr)] += w.prob;
    total += w.prob;
  }
  if (total <= 0.0)
    fail(Errc::ZeroProbabilityCondition, "accessible realization and prescriptions have probability zero for agent " +
                                             std::to_string(k + 1) + " at t=" + std::to_string(t));
  return normalized(k, t, labels, a, mass, total);
}

std::vector<Outcome> initial_outcomes(const Scenario& s, const DelayMatrix& d, int k, std::uint64_t cap) {
  const Indexer acc(s, accessible_labels(d, k, 0));
  const Indexer labels(s, sufficient_labels(d, k, 0));
  std::map<std::uint64_t, std::map<std::uint64_t, double>> groups;
  for (const World& w : enumerate_worlds(s, cap)) {
    const Trajectory tr = rollout(s, w, 0, [](int, int, const Trajectory&) { return 0; });
    groups[acc.index(tr)][static_cast<std::uint64_t>(tr.states[0]) * labels.size() + labels.index(tr)] += w.prob;
  }
  std::vector<Outcome> out;
  for (const auto& [zi, mass] : groups) {
    double total = 0.0;
    for (const auto& e : mass) total += e.second;
    Realization z = acc.decode(zi);
    out.push_back({z, total, normalized(k, 0, labels, z, mass, total)});
  }
  return out;
}

std::vector<Outcome> belief_outcomes(const Scenario& s, const StepPlan& plan, const BeliefState& pi,
                                     const CompletePrescription& theta) {
  const int t = pi.time;
  if (plan.owner() != pi.owner || plan.time() != t) fail(Errc::InvalidArgument, "step plan does not match belief");
  if (t >= s.horizon) fail(Errc::InvalidArgument, "no step after the horizon");
  if (s.agent_count > 64) fail(Errc::InvalidArgument, "at most 64 agents");
  plan.check_theta(theta);
  const int K = s.agent_count;
  // Positive-probability (v^1..v^K) at t+1, in canonical order.
  std::vector<std::pair<std::vector<int>, double>> vs{{{}, 1.0}};
  for (int j = 0; j < K; ++j) {
    std::vector<std::pair<std::vector<int>, double>> grown;
    for (const auto& [prefix, p] : vs)
      for (int v = 0; v < s.v_spaces[j].size(); ++v) {
        const double q = s.v_dists[t + 1][j][v];
        if (q <= 0.0) continue;
        auto next = prefix;
        next.push_back(v);
        grown.emplace_back(std::move(next), p * q);
      }
    vs = std::move(grown);
  }
  const std::vector<int>& accessible = pi.accessible.values;
  const auto L = pi.labels.size();
  const auto Ln = plan.next().size();
  std::map<std::uint64_t, std::map<std::uint64_t, double>> groups;
  std::vector<int> current, u;
  for (const auto& [key, p] : pi.probs) {
    const int x = static_cast<int>(key / L);
    decode_values(pi.labels, key % L, current);
    plan.actions(theta, current, u);
    for (int w = 0; w < s.w_space.size(); ++w) {
      const double pw = s.w_dists[t][w];
      if (pw <= 0.0) continue;
      for (const auto& [v, pv] : vs) {
        int xn = 0;
        std::uint64_t ni = 0, zi = 0;
        if (!plan.advance(s, x, current, &accessible, u, w, v, xn, ni, zi))
          fail(Errc::InsufficientState, "missing accessible values");
        groups[zi][static_cast<std::uint64_t>(xn) * Ln + ni] += p * pw * pv;
      }
    }
  }
  std::vector<Outcome> out;
  for (const auto& [zi, mass] : groups) {
    double total = 0.0;
    for (const auto& e : mass) total += e.second;
    if (total <= 0.0) continue;
    Realization z = plan.new_info().decode(zi);
    out.push_back({z, total, normalized(pi.owner, t + 1, plan.next(), merge(pi.accessible, z), mass, total)});
  }
  return out;
}

std::vector<Outcome> belief_outcomes(const Scenario& s, const DelayMatrix& d, const BeliefState& pi,
                                     const CompletePrescription& theta) {
  return belief_outcomes(s, StepPlan(s, d, pi.owner, pi.time), pi, theta);
}

BeliefState belief_update(const Scenario& s, const DelayMatrix& d, const BeliefState& pi,
                          const CompletePrescription& theta, const Realization& z) {
  StepPlan plan(s, d, pi.owner, pi.time);
  if (z.labels != plan.new_info().labels())
    fail(Errc::DomainMismatch, "new information must cover exactly Z^k_{t+1}");
  for (auto& o : belief_outcomes(s, plan, pi, theta))
    if (o.z.values == z.values) return std::move(o.next);
  fail(Errc::ZeroProbabilityObservation, "new information has probability zero for agent " +
                                             std::to_string(pi.owner + 1) + " at t=" + std::to_string(pi.time + 1));
}

double expected_cost(const Scenario& s, const StepPlan& plan, const BeliefState& pi, const CompletePrescription& theta) {
  plan.check_theta(theta);
  const auto L = pi.labels.size();
  std::vector<int> current, u;
  double sum = 0.0;
  for (const auto& [key, p] : pi.probs) {
    decode_values(pi.labels, key % L, current);
    plan.actions(theta, current, u);
    sum += p * s.stage_cost(pi.time, static_cast<int>(key / L), s.pack_actions(u));
  }
  return sum;
}

double expected_cost(const Scenario& s, const DelayMatrix& d, const BeliefState& pi, const CompletePrescription& theta) {
  return expected_cost(s, StepPlan(s, d, pi.owner, pi.time), pi, theta);
}

}  // namespace womc
