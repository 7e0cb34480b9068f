#pragma once

#include "tosi/core/estimate.hpp"
#include "tosi/numerics/rng.hpp"

#include <optional>
#include <span>
#include <vector>

namespace tosi {

/// Result of one lasso solve, coefficients on the original column scale.
struct LassoFit {
  Vector beta;
  double lambda = 0.0;
  /// Max KKT subgradient violation on the standardized scale.
  double kkt_residual = 0.0;
  /// Coordinate sweeps used (full and active-set).
  Index iterations = 0;

  Index support_size() const;
};

struct LassoOptions {
  Index max_sweeps = 100000;
  /// Converged when the largest standardized coefficient change in a sweep
  /// is below this and the KKT residual is below `kkt_tolerance`.
  double change_tolerance = 1e-10;
  double kkt_tolerance = 1e-8;
};

/// Minimizes (2n)^{-1} ||y - X beta||^2 + lambda ||beta||_1 by cyclic
/// coordinate descent with an active set. Columns are scaled internally to
/// unit empirical norm (||x_j||^2 / n = 1); lambda is on that scale. All-zero
/// columns get a zero coefficient. Throws ConvergenceError at the sweep cap.
LassoFit lasso_cd(const Matrix& x, const Vector& y, double lambda, const LassoOptions& opt = {});

/// Lasso fits along `grid` (any order) with warm starts, returned in grid order.
std::vector<LassoFit> lasso_path(const Matrix& x, const Vector& y, std::span<const double> grid,
                                 const LassoOptions& opt = {});

/// Smallest lambda giving the all-zero solution: max_j |x_j^T y| / n on the
/// standardized scale.
double lambda_max(const Matrix& x, const Vector& y);

/// Geometric grid of `count` values from lambda_max down to ratio * lambda_max.
std::vector<double> lambda_grid(const Matrix& x, const Vector& y, Index count, double ratio);

/// Lasso regression of column j on the remaining columns.
struct NodewiseFit {
  Index j = 0;
  /// Full-length coefficient vector with gamma[j] = 0.
  Vector gamma;
  double tau_sq = 0.0;
  /// Row j of the precision estimate: 1/tau^2 at j, -gamma_k/tau^2 elsewhere.
  Vector theta_row;
};

/// Throws SingularityError when column j duplicates another column up to
/// sign and scale, or tau^2 falls below 1e-10.
NodewiseFit nodewise(const Matrix& x, Index j, double lambda_j, const LassoOptions& opt = {});

enum class NoiseMethod { residual, refit };

/// ||y - X beta||^2 / (n - s) with s the support size of beta.
/// Throws DegreesOfFreedomError when n <= s.
double noise_variance(const Matrix& x, const Vector& y, const Vector& beta);

struct DebiasConfig {
  /// Main lasso penalty; default sigma_hat * sqrt(2 log p / n). sigma_hat
  /// starts from the null model and is re-estimated from each lasso fit until
  /// it changes by less than 1e-4 (relative) or `noise_passes` fits are used.
  std::optional<double> lambda_main;
  Index noise_passes = 20;
  /// Nodewise penalty; default node_constant * sqrt(log p / n) for every j.
  std::optional<double> lambda_node;
  double node_constant = 0.4;
  NoiseMethod noise = NoiseMethod::residual;
  /// Subtract column means of X and the mean of y on each row subset first.
  bool center = false;
  LassoOptions lasso;
};

/// Resolved penalties and noise estimate of a fitted sample.
struct DebiasSummary {
  double lambda_main = 0.0;
  double lambda_node = 0.0;
  double sigma_sq = 0.0;
  LassoFit initial;
};

/// Debiased lasso fitted on one sample (rows of X and y). Estimates are
/// computed per index on demand; the initial lasso is shared.
class DebiasedLasso final : public FittedSample {
 public:
  DebiasedLasso(const Matrix& x, const Vector& y, const DebiasConfig& cfg);

  Estimate estimate(Index j) const override;
  Index n_used() const override { return static_cast<Index>(xs_.rows()); }
  Index q() const override { return 1; }
  Index parameter_count() const override { return static_cast<Index>(xs_.cols()); }

  const DebiasSummary& summary() const noexcept { return summary_; }

 private:
  Matrix xs_;      // standardized design
  Vector scale_;   // column scales: x = xs * diag(scale)
  Vector beta_s_;  // initial lasso, standardized scale
  Vector score_;   // xs^T (y - xs beta_s) / n
  DebiasSummary summary_;
  LassoOptions lasso_;
};

/// b_hat = beta_lasso + Theta X^T (y - X beta_lasso) / n on G, with
/// Sigma_hat_j = sigma^2 (Theta Sigma_x Theta^T)_jj and n_used = rows(X).
EstimateSet debiased_estimates(const Matrix& x, const Vector& y, const IndexSet& g,
                               const DebiasConfig& cfg = {});

/// Backend over data laid out as [response | predictors]: column
/// `response_column` is y and the remaining columns, in order, are the p
/// predictors indexed 0..p-1.
class RegressionBackend final : public EstimatorBackend {
 public:
  RegressionBackend(Index response_column, DebiasConfig cfg = {});

  std::unique_ptr<FittedSample> fit(const DataMatrix& data,
                                    std::span<const Index> rows) const override;
  Index parameter_count(const DataMatrix& data) const override;

  /// Splits a data matrix into (X, y) using the response column.
  std::pair<Matrix, Vector> design(const Matrix& data) const;

 private:
  Index response_;
  DebiasConfig cfg_;
};

struct CvResult {
  double lambda = 0.0;
  LassoFit fit;
  /// Mean out-of-fold squared error per grid value, in grid order.
  std::vector<double> cv_error;
};

/// K-fold cross-validated lasso: the grid value minimizing mean held-out
/// squared error (ties to the larger lambda), refitted on all rows.
CvResult cv_lasso(const Matrix& x, const Vector& y, Index folds, std::span<const double> grid,
                  const RngStream& stream, const LassoOptions& opt = {});

}  // namespace tosi
