#include "tosi/core/estimate.hpp"

#include "tosi/error.hpp"

#include <algorithm>
#include <string>

namespace tosi {

IndexSet make_index_set(std::vector<Index> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return indices;
}

IndexSet set_union(std::span<const IndexSet> sets) {
  std::vector<Index> all;
  for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
  return make_index_set(std::move(all));
}

const Estimate& EstimateSet::at(Index j) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), j,
                             [](const Estimate& e, Index v) { return e.index < v; });
  if (it == entries.end() || it->index != j)
    throw DomainError("no estimate held for index " + std::to_string(j + 1));
  return *it;
}

EstimateSet EstimateSet::restrict_to(const IndexSet& g) const {
  EstimateSet out;
  out.n_used = n_used;
  out.q = q;
  out.entries.reserve(g.size());
  for (Index j : g) out.entries.push_back(at(j));
  return out;
}

EstimateSet FittedSample::estimates(const IndexSet& g, Execution exec) const {
  EstimateSet out;
  out.n_used = n_used();
  out.q = q();
  out.entries.resize(g.size());
  for_each_index(exec, g.size(), [&](std::size_t k) { out.entries[k] = estimate(g[k]); });
  return out;
}

EstimateSet EstimatorBackend::estimate(const DataMatrix& data, std::span<const Index> rows,
                                       const IndexSet& g) const {
  const Index p = parameter_count(data);
  for (Index j : g)
    if (j >= p) throw DomainError("index " + std::to_string(j + 1) + " exceeds parameter count");
  return fit(data, rows)->estimates(g);
}

}  // namespace tosi
