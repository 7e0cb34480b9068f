#pragma once

#include "tosi/numerics/matrix.hpp"
#include "tosi/numerics/parallel.hpp"

#include <memory>
#include <span>
#include <vector>

namespace tosi {

/// Sorted, duplicate-free set of 0-based parameter indices.
using IndexSet = std::vector<Index>;

/// Sorts and deduplicates.
IndexSet make_index_set(std::vector<Index> indices);

/// Union of several index sets.
IndexSet set_union(std::span<const IndexSet> sets);

/// Per-index estimate: theta_hat (q-vector) with the estimated asymptotic
/// covariance of sqrt(n)(theta_hat - theta).
struct Estimate {
  Index index = 0;
  Vector theta;
  SpdMatrix sigma;
};

/// Estimates for a set of indices from one row subset. All entries share q
/// and indices are distinct.
struct EstimateSet {
  std::vector<Estimate> entries;
  Index n_used = 0;
  Index q = 0;

  bool empty() const noexcept { return entries.empty(); }
  std::size_t size() const noexcept { return entries.size(); }
  /// Entry for index j; throws DomainError when absent.
  const Estimate& at(Index j) const;
  /// Sub-collection restricted to G (must be a subset of the indices held).
  EstimateSet restrict_to(const IndexSet& g) const;
};

/// A backend already fitted on one row subset. Answers per-index queries;
/// the shared part of the fit (for example the initial lasso) is computed
/// once when the backend prepares the sample.
class FittedSample {
 public:
  virtual ~FittedSample() = default;

  virtual Estimate estimate(Index j) const = 0;
  virtual Index n_used() const = 0;
  virtual Index q() const = 0;
  /// Number of parameters p available for inference.
  virtual Index parameter_count() const = 0;

  /// Estimates for every index of g, evaluated with `exec`.
  EstimateSet estimates(const IndexSet& g, Execution exec = Execution::serial) const;
};

/// Contract shared by the mean, regression and factor models: from the rows
/// of `data` listed in `rows`, produce estimates for any requested index.
/// Implementations are deterministic and safe for concurrent const use.
class EstimatorBackend {
 public:
  virtual ~EstimatorBackend() = default;

  virtual std::unique_ptr<FittedSample> fit(const DataMatrix& data,
                                            std::span<const Index> rows) const = 0;
  /// Number of parameters p for data with the given column count.
  virtual Index parameter_count(const DataMatrix& data) const = 0;

  /// Convenience: fit the rows and estimate every index in g.
  EstimateSet estimate(const DataMatrix& data, std::span<const Index> rows,
                       const IndexSet& g) const;
};

}  // namespace tosi
