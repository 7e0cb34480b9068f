#include "tosi/estimators/mean.hpp"

#include "tosi/error.hpp"

#include <string>

namespace tosi {
namespace {

class FittedMeans final : public FittedSample {
 public:
  FittedMeans(Vector means, Vector variances, Index n, double floor)
      : means_(std::move(means)), variances_(std::move(variances)), n_(n), floor_(floor) {}

  Estimate estimate(Index j) const override {
    if (j >= static_cast<Index>(means_.size()))
      throw DomainError("index " + std::to_string(j + 1) + " exceeds column count");
    const double var = variances_(static_cast<Eigen::Index>(j));
    if (!(var > floor_))
      throw SingularityError("column " + std::to_string(j + 1) + " is constant on this sample", j);
    return Estimate{j, Vector::Constant(1, means_(static_cast<Eigen::Index>(j))),
                    SpdMatrix::scalar(var)};
  }
  Index n_used() const override { return n_; }
  Index q() const override { return 1; }
  Index parameter_count() const override { return static_cast<Index>(means_.size()); }

 private:
  Vector means_;
  Vector variances_;
  Index n_;
  double floor_;
};

}  // namespace

MeanBackend::MeanBackend(MeanBackendConfig cfg) : cfg_(cfg) {
  if (!(cfg_.variance_floor > 0.0)) throw DomainError("variance floor must be positive");
}

std::unique_ptr<FittedSample> MeanBackend::fit(const DataMatrix& data,
                                               std::span<const Index> rows) const {
  if (rows.size() < 2) throw DomainError("mean estimates need at least two rows");
  Matrix sub = data.select_rows(rows);
  const Vector means = center_columns(sub);
  const Vector variances =
      sub.colwise().squaredNorm().transpose() / static_cast<double>(rows.size() - 1);
  return std::make_unique<FittedMeans>(means, variances, rows.size(), cfg_.variance_floor);
}

EstimateSet mean_estimates(const DataMatrix& data, std::span<const Index> rows,
                           const IndexSet& g, const MeanBackendConfig& cfg) {
  return MeanBackend(cfg).estimate(data, rows, g);
}

}  // namespace tosi
