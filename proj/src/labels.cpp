#include "womc/labels.hpp"

#include <algorithm>
#include <iterator>

#include "womc/error.hpp"

namespace womc {

std::string to_string(const VarLabel& label) {
  return std::string(label.kind == Kind::Obs ? "Y" : "U") + std::to_string(label.agent + 1) + "@" +
         std::to_string(label.time);
}

VarLabel parse_label(const std::string& text) {
  auto at = text.find('@');
  if (text.size() < 4 || (text[0] != 'Y' && text[0] != 'U') || at == std::string::npos)
    fail(Errc::ParseError, "bad label '" + text + "'");
  try {
    VarLabel l;
    l.kind = text[0] == 'Y' ? Kind::Obs : Kind::Act;
    l.agent = std::stoi(text.substr(1, at - 1)) - 1;
    l.time = std::stoi(text.substr(at + 1));
    if (l.agent < 0 || l.time < 0) throw std::out_of_range("negative");
    return l;
  } catch (const std::logic_error&) {
    fail(Errc::ParseError, "bad label '" + text + "'");
  }
}

InfoSet::InfoSet(std::vector<VarLabel> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
}

bool InfoSet::contains(const VarLabel& l) const {
  return std::binary_search(labels_.begin(), labels_.end(), l);
}

int InfoSet::position(const VarLabel& l) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), l);
  if (it == labels_.end() || *it != l) return -1;
  return static_cast<int>(it - labels_.begin());
}

InfoSet set_union(const InfoSet& a, const InfoSet& b) {
  std::vector<VarLabel> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return InfoSet(std::move(out));
}

InfoSet set_intersection(const InfoSet& a, const InfoSet& b) {
  std::vector<VarLabel> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return InfoSet(std::move(out));
}

InfoSet set_difference(const InfoSet& a, const InfoSet& b) {
  std::vector<VarLabel> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return InfoSet(std::move(out));
}

bool is_subset(const InfoSet& a, const InfoSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

int Realization::value(const VarLabel& l) const {
  int p = labels.position(l);
  if (p < 0) fail(Errc::DomainMismatch, "label " + to_string(l) + " not in realization");
  return values[static_cast<std::size_t>(p)];
}

Realization Realization::project(const InfoSet& subset) const {
  Realization r;
  r.labels = subset;
  r.values.reserve(subset.size());
  for (const auto& l : subset) r.values.push_back(value(l));
  return r;
}

Realization merge(const Realization& a, const Realization& b) {
  Realization r;
  r.labels = set_union(a.labels, b.labels);
  r.values.reserve(r.labels.size());
  for (const auto& l : r.labels) {
    int pa = a.labels.position(l);
    int pb = b.labels.position(l);
    if (pa >= 0 && pb >= 0 && a.values[pa] != b.values[pb])
      fail(Errc::DomainMismatch, "conflicting values for " + to_string(l));
    r.values.push_back(pa >= 0 ? a.values[pa] : b.values[pb]);
  }
  return r;
}

}  // namespace womc
