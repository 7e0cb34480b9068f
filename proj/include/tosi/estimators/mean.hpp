#pragma once

#include "tosi/core/estimate.hpp"

namespace tosi {

struct MeanBackendConfig {
  /// Column variances at or below this value are treated as constant columns.
  double variance_floor = 1e-12;
};

/// Column means over the listed rows with unbiased sample variances (q = 1).
/// Throws SingularityError (with the index) for a column whose variance is
/// below the floor, and DomainError for fewer than two rows.
EstimateSet mean_estimates(const DataMatrix& data, std::span<const Index> rows,
                           const IndexSet& g, const MeanBackendConfig& cfg = {});

class MeanBackend final : public EstimatorBackend {
 public:
  explicit MeanBackend(MeanBackendConfig cfg = {});

  std::unique_ptr<FittedSample> fit(const DataMatrix& data,
                                    std::span<const Index> rows) const override;
  Index parameter_count(const DataMatrix& data) const override { return data.cols(); }

 private:
  MeanBackendConfig cfg_;
};

}  // namespace tosi
