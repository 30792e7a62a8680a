#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace womc {

enum class Kind : std::uint8_t { Obs = 0, Act = 1 };

/// Names one random variable: Y^agent_time (Obs) or U^agent_time (Act).
struct VarLabel {
  int agent = 0;
  int time = 0;
  Kind kind = Kind::Obs;

  auto operator<=>(const VarLabel&) const = default;
};

/// Canonical text form, 1-based agent: "Y1@0", "U2@3".
std::string to_string(const VarLabel& label);
VarLabel parse_label(const std::string& text);

/// Sorted, duplicate-free set of labels. Ordering is (agent, time, kind),
/// which fixes the enumeration order of realizations.
class InfoSet {
 public:
  InfoSet() = default;
  explicit InfoSet(std::vector<VarLabel> labels);

  const std::vector<VarLabel>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  bool contains(const VarLabel& l) const;
  /// Position of `l`, or -1.
  int position(const VarLabel& l) const;

  auto begin() const { return labels_.begin(); }
  auto end() const { return labels_.end(); }

  friend bool operator==(const InfoSet&, const InfoSet&) = default;

 private:
  std::vector<VarLabel> labels_;
};

InfoSet set_union(const InfoSet& a, const InfoSet& b);
InfoSet set_intersection(const InfoSet& a, const InfoSet& b);
InfoSet set_difference(const InfoSet& a, const InfoSet& b);
bool is_subset(const InfoSet& a, const InfoSet& b);

/// Value assignment (value indices into the label's space) over an InfoSet.
struct Realization {
  InfoSet labels;
  std::vector<int> values;

  int value(const VarLabel& l) const;  // throws DomainMismatch if absent
  /// Restriction to a subset of the labels.
  Realization project(const InfoSet& subset) const;
  friend bool operator==(const Realization&, const Realization&) = default;
  friend auto operator<=>(const Realization& a, const Realization& b) {
    if (auto c = a.labels.labels() <=> b.labels.labels(); c != 0) return c;
    return a.values <=> b.values;
  }
};

/// Union of two realizations that agree on shared labels. Throws
/// DomainMismatch on a conflicting shared label.
Realization merge(const Realization& a, const Realization& b);

}  // namespace womc
