#pragma once

#include "tosi/core/estimate.hpp"

#include <utility>
#include <vector>

namespace tosi {

/// Least-squares factor fit X ~ H B^T in the canonical rotation:
/// n^{-1} H^T H = I_q, B^T B diagonal and nonincreasing, and the first
/// non-negligible entry of every column of B positive.
struct FactorFit {
  Matrix h;                   // n x q scores
  Matrix b;                   // p x q loadings
  Index q = 0;
  Vector residual_variances;  // sigma_j^2 = n^{-1} sum_i (x_ij - h_i^T b_j)^2
  Vector singular_values;     // all singular values of the centered X
  /// Set when the q-th and (q+1)-th singular values coincide (within 1e-12
  /// relative), i.e. the factor space is not identified.
  bool non_identifiable = false;
};

/// Column-centers X, then takes the top-q singular vectors:
/// H = sqrt(n) U_q and B = X^T H / n, sign-fixed per column.
FactorFit factor_fit(const Matrix& x, Index q);

/// Squared Frobenius residual ||Xc - H B^T||_F^2 of a fit on x (centered).
double factor_residual(const Matrix& x, const FactorFit& fit);

/// Eigenvalue-ratio choice of the number of factors: argmax over
/// k <= q_max of lambda_k / lambda_{k+1}, lambda the eigenvalues of
/// n^{-1} Xc Xc^T. Throws DomainError when every ratio is within 1e-12 of 1.
Index select_q(const Matrix& x, Index q_max);

/// Thresholded loading supports: entry (j, k) kept iff
/// |b_jk| > c * sigma_j * sqrt(log p / n).
struct LoadingSupport {
  IndexSet rows;
  std::vector<std::pair<Index, Index>> entries;
};
LoadingSupport sparsify_loadings(const FactorFit& fit, double c);

struct FactorBackendConfig {
  Index q = 1;
  double variance_floor = 1e-12;
};

/// theta_j = b_j and Sigma_j = sigma_j^2 I_q from a fit on one row subset.
class FactorBackend final : public EstimatorBackend {
 public:
  explicit FactorBackend(FactorBackendConfig cfg);

  std::unique_ptr<FittedSample> fit(const DataMatrix& data,
                                    std::span<const Index> rows) const override;
  Index parameter_count(const DataMatrix& data) const override { return data.cols(); }

 private:
  FactorBackendConfig cfg_;
};

/// Estimates for the rows of `data` listed in `rows` and indices in g.
EstimateSet factor_estimates(const DataMatrix& data, std::span<const Index> rows,
                             const IndexSet& g, Index q);

}  // namespace tosi
