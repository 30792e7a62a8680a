#pragma once

#include <optional>
#include <vector>

// Agents are addressed by 0-based index throughout the library. Files, JSON
// and CLI output use 1-based agent numbers.

namespace womc {

struct Link {
  int from = 0;
  int to = 0;
  int delay = 1;  // time steps, >= 1
};

/// Directed, delay-weighted agent network. Construction does not validate;
/// call validate_topology() before computing delays.
class Topology {
 public:
  Topology() = default;
  Topology(int agent_count, std::vector<Link> links);

  int agent_count() const noexcept { return agent_count_; }
  const std::vector<Link>& links() const noexcept { return links_; }
  std::optional<int> link_delay(int from, int to) const;

 private:
  int agent_count_ = 0;
  std::vector<Link> links_;
};

/// Throws womc::Error (SelfLink, DuplicateLink, NonPositiveDelay,
/// InvalidAgent, NotStronglyConnected) on the first violated invariant.
void validate_topology(const Topology& topology);

/// All-pairs minimum communication delay; d(k, k) = 0.
class DelayMatrix {
 public:
  DelayMatrix() = default;
  explicit DelayMatrix(int agent_count);

  int agent_count() const noexcept { return agent_count_; }
  int operator()(int from, int to) const { return d_[index(from, to)]; }
  int& at(int from, int to) { return d_[index(from, to)]; }

  friend bool operator==(const DelayMatrix&, const DelayMatrix&) = default;

 private:
  std::size_t index(int from, int to) const {
    return static_cast<std::size_t>(from) * static_cast<std::size_t>(agent_count_) +
           static_cast<std::size_t>(to);
  }
  int agent_count_ = 0;
  std::vector<int> d_;
};

DelayMatrix min_delay_matrix(const Topology& topology);

struct Path {
  std::vector<int> nodes;
  int total_delay = 0;
};

/// Minimum-delay path; ties go to the lexicographically smallest node
/// sequence.
Path information_path(const Topology& topology, int from, int to);

}  // namespace womc
