#include "womc/infostruct.hpp"

#include <algorithm>
#include <string>

#include "womc/error.hpp"

namespace womc {

InfoSet memory_labels(const DelayMatrix& d, int k, int t) {
  std::vector<VarLabel> out;
  for (int j = 0; j < d.agent_count(); ++j) {
    const int last_obs = t - d(j, k);
    for (int tau = 0; tau <= last_obs; ++tau) out.push_back({j, tau, Kind::Obs});
    for (int tau = 0; tau <= last_obs - 1; ++tau) out.push_back({j, tau, Kind::Act});
  }
  return InfoSet(std::move(out));
}

InfoSet accessible_labels(const DelayMatrix& d, int k, int t) {
  std::vector<VarLabel> out;
  for (int j = 0; j < d.agent_count(); ++j) {
    int worst = 0;
    for (int i = 0; i <= k; ++i) worst = std::max(worst, d(j, i));
    const int last_obs = t - worst;
    for (int tau = 0; tau <= last_obs; ++tau) out.push_back({j, tau, Kind::Obs});
    for (int tau = 0; tau <= last_obs - 1; ++tau) out.push_back({j, tau, Kind::Act});
  }
  return InfoSet(std::move(out));
}

InfoSet new_info_labels(const DelayMatrix& d, int k, int t) {
  if (t == 0) return accessible_labels(d, k, 0);
  return set_difference(accessible_labels(d, k, t), accessible_labels(d, k, t - 1));
}

InfoSet inaccessible_labels(const DelayMatrix& d, int k, int j, int t) {
  if (!is_beyond(j, k))
    fail(Errc::NotBeyond, "agent " + std::to_string(j + 1) + " is not beyond agent " + std::to_string(k + 1));
  return set_difference(memory_labels(d, k, t), accessible_labels(d, j, t));
}

BeyondSet beyond(int k, int agent_count) {
  BeyondSet b;
  b.base = k;
  for (int j = k; j < agent_count; ++j) b.members.push_back(j);
  return b;
}

std::vector<Realization> enumerate_realizations(const Scenario& s, const InfoSet& labels, std::uint64_t cap) {
  std::uint64_t count = 1;
  for (const auto& l : labels) {
    count *= static_cast<std::uint64_t>(s.radix(l));
    if (count > cap)
      fail(Errc::EnumerationCapExceeded, "realizations of " + std::to_string(labels.size()) +
                                             " labels exceed cap " + std::to_string(cap));
  }
  Indexer idx(s, labels);
  std::vector<Realization> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(idx.decode(i));
  return out;
}

}  // namespace womc
