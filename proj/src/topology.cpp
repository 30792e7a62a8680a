#include "womc/topology.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>
#include <utility>

#include "womc/error.hpp"

namespace womc {

namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

std::string pair_name(int from, int to) {
  return std::to_string(from + 1) + "->" + std::to_string(to + 1);
}

}  // namespace

Topology::Topology(int agent_count, std::vector<Link> links)
    : agent_count_(agent_count), links_(std::move(links)) {}

std::optional<int> Topology::link_delay(int from, int to) const {
  for (const auto& l : links_)
    if (l.from == from && l.to == to) return l.delay;
  return std::nullopt;
}

void validate_topology(const Topology& topology) {
  const int n = topology.agent_count();
  if (n < 1) fail(Errc::InvalidAgent, "agent count must be >= 1");
  std::set<std::pair<int, int>> seen;
  for (const auto& l : topology.links()) {
    if (l.from < 0 || l.from >= n || l.to < 0 || l.to >= n)
      fail(Errc::InvalidAgent, "link " + pair_name(l.from, l.to) + " names an unknown agent");
    if (l.from == l.to) fail(Errc::SelfLink, "link " + pair_name(l.from, l.to));
    if (!seen.emplace(l.from, l.to).second)
      fail(Errc::DuplicateLink, "link " + pair_name(l.from, l.to));
    if (l.delay < 1)
      fail(Errc::NonPositiveDelay, "link " + pair_name(l.from, l.to) + " has delay " +
                                       std::to_string(l.delay));
  }
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& l : topology.links()) adj[l.from].push_back(l.to);
  for (int s = 0; s < n; ++s) {
    std::vector<char> reached(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{s};
    reached[s] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[u])
        if (!reached[v]) {
          reached[v] = 1;
          stack.push_back(v);
        }
    }
    for (int t = 0; t < n; ++t)
      if (!reached[t]) fail(Errc::NotStronglyConnected, "no path " + pair_name(s, t));
  }
}

DelayMatrix::DelayMatrix(int agent_count)
    : agent_count_(agent_count),
      d_(static_cast<std::size_t>(agent_count) * static_cast<std::size_t>(agent_count), 0) {}

DelayMatrix min_delay_matrix(const Topology& topology) {
  validate_topology(topology);
  const int n = topology.agent_count();
  DelayMatrix d(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d.at(i, j) = i == j ? 0 : kUnreachable;
  for (const auto& l : topology.links()) d.at(l.from, l.to) = std::min(d(l.from, l.to), l.delay);
  // Floyd-Warshall
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d(i, m) + d(m, j) < d(i, j)) d.at(i, j) = d(i, m) + d(m, j);
  return d;
}

Path information_path(const Topology& topology, int from, int to) {
  if (from == to) fail(Errc::SameAgent, "agent " + std::to_string(from + 1));
  const DelayMatrix d = min_delay_matrix(topology);
  const int n = topology.agent_count();
  if (from < 0 || from >= n || to < 0 || to >= n) fail(Errc::InvalidAgent, pair_name(from, to));

  // Greedy smallest successor that stays on a shortest path. Positive delays
  // make every such walk simple and keep a completion available.
  Path path;
  path.nodes.push_back(from);
  path.total_delay = d(from, to);
  int u = from;
  while (u != to) {
    int next = -1;
    for (int v = 0; v < n && next < 0; ++v) {
      auto delay = topology.link_delay(u, v);
      if (delay && *delay + d(v, to) == d(u, to)) next = v;
    }
    path.nodes.push_back(next);
    u = next;
  }
  return path;
}

}  // namespace womc
