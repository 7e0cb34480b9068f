#include "tosi/estimators/regression.hpp"

#include "tosi/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tosi {
namespace {

struct Standardized {
  Matrix xs;
  Vector scale;  // zero for all-zero columns
};

Standardized standardize(const Matrix& x) {
  const double n = static_cast<double>(x.rows());
  Standardized st{x, (x.colwise().squaredNorm().transpose() / n).cwiseSqrt()};
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (st.scale(j) > 0.0)
      st.xs.col(j) /= st.scale(j);
    else
      st.xs.col(j).setZero();
  }
  return st;
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

struct Solution {
  Vector beta;      // standardized scale
  Vector residual;  // y - xs beta
  Index sweeps = 0;
  double kkt = 0.0;
};

double kkt_residual(const Matrix& xs, const Vector& scale, const Vector& beta, const Vector& r,
                    double lambda, Eigen::Index exclude) {
  const double n = static_cast<double>(xs.rows());
  double worst = 0.0;
  for (Eigen::Index j = 0; j < xs.cols(); ++j) {
    if (j == exclude || scale(j) == 0.0) continue;
    const double c = xs.col(j).dot(r) / n;
    const double v = beta(j) != 0.0 ? std::fabs(c - std::copysign(lambda, beta(j)))
                                    : std::max(0.0, std::fabs(c) - lambda);
    worst = std::max(worst, v);
  }
  return worst;
}

// Coordinate descent on unit-norm columns. `exclude` is skipped (nodewise).
Solution solve_standardized(const Matrix& xs, const Vector& scale, const Vector& y, double lambda,
                            Vector beta, Eigen::Index exclude, const LassoOptions& opt) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lasso penalty must be nonnegative");
  const double n = static_cast<double>(xs.rows());
  const Eigen::Index p = xs.cols();
  Solution sol;
  sol.residual = y - xs * beta;
  sol.beta = std::move(beta);
  Vector& b = sol.beta;
  Vector& r = sol.residual;

  auto update = [&](Eigen::Index j) {
    const double g = xs.col(j).dot(r) / n + b(j);
    const double nb = soft_threshold(g, lambda);
    const double d = nb - b(j);
    if (d != 0.0) {
      r.noalias() -= d * xs.col(j);
      b(j) = nb;
    }
    return std::fabs(d);
  };

  std::vector<Eigen::Index> active;
  active.reserve(static_cast<std::size_t>(p));
  for (;;) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (j == exclude || scale(j) == 0.0) continue;
      max_change = std::max(max_change, update(j));
    }
    ++sol.sweeps;
    if (max_change < opt.change_tolerance) {
      sol.kkt = kkt_residual(xs, scale, b, r, lambda, exclude);
      if (sol.kkt <= opt.kkt_tolerance) return sol;
    } else {
      active.clear();
      for (Eigen::Index j = 0; j < p; ++j)
        if (b(j) != 0.0) active.push_back(j);
      while (sol.sweeps < opt.max_sweeps) {
        double m = 0.0;
        for (Eigen::Index j : active) m = std::max(m, update(j));
        ++sol.sweeps;
        if (m < opt.change_tolerance) break;
      }
    }
    if (sol.sweeps >= opt.max_sweeps) {
      const double kkt = kkt_residual(xs, scale, b, r, lambda, exclude);
      throw ConvergenceError("lasso coordinate descent did not converge", kkt);
    }
  }
}

LassoFit to_fit(const Solution& sol, const Vector& scale, double lambda) {
  LassoFit fit;
  fit.beta = Vector::Zero(sol.beta.size());
  for (Eigen::Index j = 0; j < sol.beta.size(); ++j)
    if (scale(j) > 0.0) fit.beta(j) = sol.beta(j) / scale(j);
  fit.lambda = lambda;
  fit.kkt_residual = sol.kkt;
  fit.iterations = sol.sweeps;
  return fit;
}

void check_design(const Matrix& x, const Vector& y) {
  if (x.rows() != y.size()) throw DomainError("design and response row counts differ");
  if (x.rows() < 2) throw DomainError("lasso needs at least two observations");
  if (x.cols() < 1) throw DomainError("lasso needs at least one predictor");
}

// Lasso of `response` on the standardized columns other than j. Returns the
// fit on the original scale of the columns (gamma_k = gamma_std_k / scale_k).
NodewiseFit nodewise_impl(const Matrix& xs, const Vector& scale, const Vector& response,
                          Index j, double lambda, const LassoOptions& opt) {
  const auto jj = static_cast<Eigen::Index>(j);
  const double n = static_cast<double>(xs.rows());
  if (scale(jj) == 0.0)
    throw SingularityError("predictor " + std::to_string(j + 1) + " is identically zero", j);
  for (Eigen::Index k = 0; k < xs.cols(); ++k) {
    if (k == jj || scale(k) == 0.0) continue;
    if (std::fabs(xs.col(k).dot(xs.col(jj))) / n >= 1.0 - 1e-12)
      throw SingularityError("predictor " + std::to_string(j + 1) + " is collinear with predictor " +
                                 std::to_string(k + 1),
                             j);
  }
  const Solution sol =
      solve_standardized(xs, scale, response, lambda, Vector::Zero(xs.cols()), jj, opt);
  NodewiseFit fit;
  fit.j = j;
  fit.gamma = Vector::Zero(xs.cols());
  for (Eigen::Index k = 0; k < xs.cols(); ++k)
    if (k != jj && scale(k) > 0.0) fit.gamma(k) = sol.beta(k) / scale(k);
  fit.tau_sq = sol.residual.squaredNorm() / n + lambda * fit.gamma.lpNorm<1>();
  if (!(fit.tau_sq >= 1e-10))
    throw SingularityError("nodewise residual variance below floor for predictor " +
                               std::to_string(j + 1),
                           j);
  fit.theta_row = -fit.gamma / fit.tau_sq;
  fit.theta_row(jj) = 1.0 / fit.tau_sq;
  return fit;
}

}  // namespace

Index LassoFit::support_size() const {
  return static_cast<Index>((beta.array() != 0.0).count());
}

LassoFit lasso_cd(const Matrix& x, const Vector& y, double lambda, const LassoOptions& opt) {
  check_design(x, y);
  const Standardized st = standardize(x);
  const Solution sol =
      solve_standardized(st.xs, st.scale, y, lambda, Vector::Zero(x.cols()), -1, opt);
  return to_fit(sol, st.scale, lambda);
}

std::vector<LassoFit> lasso_path(const Matrix& x, const Vector& y, std::span<const double> grid,
                                 const LassoOptions& opt) {
  check_design(x, y);
  const Standardized st = standardize(x);
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return grid[a] > grid[b]; });
  std::vector<LassoFit> out(grid.size());
  Vector warm = Vector::Zero(x.cols());
  for (std::size_t k : order) {
    Solution sol = solve_standardized(st.xs, st.scale, y, grid[k], warm, -1, opt);
    warm = sol.beta;
    out[k] = to_fit(sol, st.scale, grid[k]);
  }
  return out;
}

double lambda_max(const Matrix& x, const Vector& y) {
  check_design(x, y);
  const Standardized st = standardize(x);
  return (st.xs.transpose() * y).cwiseAbs().maxCoeff() / static_cast<double>(x.rows());
}

std::vector<double> lambda_grid(const Matrix& x, const Vector& y, Index count, double ratio) {
  if (count < 1) throw DomainError("lambda grid needs at least one value");
  if (!(ratio > 0.0 && ratio <= 1.0)) throw DomainError("lambda grid ratio must lie in (0, 1]");
  const double top = lambda_max(x, y);
  std::vector<double> grid(count);
  for (Index k = 0; k < count; ++k) {
    const double t = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
    grid[k] = top * std::pow(ratio, t);
  }
  return grid;
}

NodewiseFit nodewise(const Matrix& x, Index j, double lambda_j, const LassoOptions& opt) {
  if (x.cols() < 2) throw DomainError("nodewise regression needs at least two columns");
  if (j >= static_cast<Index>(x.cols())) throw DomainError("nodewise column out of range");
  if (!(lambda_j >= 0.0)) throw DomainError("nodewise penalty must be nonnegative");
  check_design(x, x.col(0));
  const Standardized st = standardize(x);
  return nodewise_impl(st.xs, st.scale, x.col(static_cast<Eigen::Index>(j)), j, lambda_j, opt);
}

double noise_variance(const Matrix& x, const Vector& y, const Vector& beta) {
  check_design(x, y);
  if (beta.size() != x.cols()) throw DomainError("coefficient length differs from column count");
  const auto support = static_cast<Eigen::Index>((beta.array() != 0.0).count());
  if (x.rows() <= support)
    throw DegreesOfFreedomError("no residual degrees of freedom: n <= support size");
  return (y - x * beta).squaredNorm() / static_cast<double>(x.rows() - support);
}

namespace {

double refit_noise_variance(const Matrix& x, const Vector& y, const Vector& beta) {
  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    if (beta(j) != 0.0) support.push_back(j);
  const auto s = static_cast<Eigen::Index>(support.size());
  if (x.rows() <= s) throw DegreesOfFreedomError("no residual degrees of freedom: n <= support size");
  if (s == 0) return y.squaredNorm() / static_cast<double>(x.rows());
  Matrix xsub(x.rows(), s);
  for (Eigen::Index k = 0; k < s; ++k) xsub.col(k) = x.col(support[static_cast<std::size_t>(k)]);
  const Vector coef = xsub.colPivHouseholderQr().solve(y);
  return (y - xsub * coef).squaredNorm() / static_cast<double>(x.rows() - s);
}

double estimate_noise(const Matrix& xs, const Vector& y, const Vector& beta_s, NoiseMethod m) {
  return m == NoiseMethod::residual ? noise_variance(xs, y, beta_s)
                                    : refit_noise_variance(xs, y, beta_s);
}

}  // namespace

DebiasedLasso::DebiasedLasso(const Matrix& x, const Vector& y, const DebiasConfig& cfg)
    : lasso_(cfg.lasso) {
  check_design(x, y);
  Matrix xc = x;
  Vector yc = y;
  if (cfg.center) {
    center_columns(xc);
    yc.array() -= yc.mean();
  }
  Standardized st = standardize(xc);
  xs_ = std::move(st.xs);
  scale_ = std::move(st.scale);
  const double n = static_cast<double>(xs_.rows());
  const double p = static_cast<double>(xs_.cols());
  const double rate = std::sqrt(2.0 * std::log(p) / n);

  if (cfg.lambda_main) {
    summary_.lambda_main = *cfg.lambda_main;
  } else {
    if (cfg.noise_passes < 1) throw DomainError("noise_passes must be at least 1");
    double sigma = std::sqrt(yc.squaredNorm() / n);
    Vector warm = Vector::Zero(xs_.cols());
    for (Index pass = 0; pass < cfg.noise_passes; ++pass) {
      const Solution fit = solve_standardized(xs_, scale_, yc, sigma * rate, warm, -1, lasso_);
      const double next = std::sqrt(estimate_noise(xs_, yc, fit.beta, cfg.noise));
      warm = fit.beta;
      const bool settled = std::fabs(next - sigma) <= 1e-4 * sigma;
      sigma = next;
      if (settled) break;
    }
    summary_.lambda_main = sigma * rate;
  }
  const Solution sol = solve_standardized(xs_, scale_, yc, summary_.lambda_main,
                                          Vector::Zero(xs_.cols()), -1, lasso_);
  beta_s_ = sol.beta;
  score_ = xs_.transpose() * sol.residual / n;
  summary_.sigma_sq = estimate_noise(xs_, yc, beta_s_, cfg.noise);
  summary_.initial = to_fit(sol, scale_, summary_.lambda_main);
  summary_.lambda_node =
      cfg.lambda_node ? *cfg.lambda_node : cfg.node_constant * std::sqrt(std::log(p) / n);
  if (!(summary_.lambda_node >= 0.0)) throw DomainError("nodewise penalty must be nonnegative");
}

Estimate DebiasedLasso::estimate(Index j) const {
  if (j >= parameter_count()) throw DomainError("index " + std::to_string(j + 1) + " exceeds predictor count");
  const auto jj = static_cast<Eigen::Index>(j);
  const Vector ones = (scale_.array() > 0.0).cast<double>();
  const NodewiseFit nw = nodewise_impl(xs_, ones, xs_.col(jj), j, summary_.lambda_node, lasso_);
  const double n = static_cast<double>(xs_.rows());
  const double b_std = beta_s_(jj) + nw.theta_row.dot(score_);
  const double v_std = summary_.sigma_sq * (xs_ * nw.theta_row).squaredNorm() / n;
  const double s = scale_(jj);
  if (!(v_std > 0.0))
    throw SingularityError("debiased variance is not positive for predictor " + std::to_string(j + 1), j);
  return Estimate{j, Vector::Constant(1, b_std / s), SpdMatrix::scalar(v_std / (s * s))};
}

EstimateSet debiased_estimates(const Matrix& x, const Vector& y, const IndexSet& g,
                               const DebiasConfig& cfg) {
  const DebiasedLasso fit(x, y, cfg);
  return fit.estimates(g);
}

RegressionBackend::RegressionBackend(Index response_column, DebiasConfig cfg)
    : response_(response_column), cfg_(std::move(cfg)) {}

Index RegressionBackend::parameter_count(const DataMatrix& data) const {
  if (response_ >= data.cols() || data.cols() < 2)
    throw DomainError("response column out of range or no predictors");
  return data.cols() - 1;
}

std::pair<Matrix, Vector> RegressionBackend::design(const Matrix& data) const {
  const auto r = static_cast<Eigen::Index>(response_);
  if (r >= data.cols() || data.cols() < 2)
    throw DomainError("response column out of range or no predictors");
  Matrix x(data.rows(), data.cols() - 1);
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < data.cols(); ++c)
    if (c != r) x.col(k++) = data.col(c);
  return {std::move(x), data.col(r)};
}

std::unique_ptr<FittedSample> RegressionBackend::fit(const DataMatrix& data,
                                                     std::span<const Index> rows) const {
  auto [x, y] = design(data.select_rows(rows));
  return std::make_unique<DebiasedLasso>(x, y, cfg_);
}

CvResult cv_lasso(const Matrix& x, const Vector& y, Index folds, std::span<const double> grid,
                  const RngStream& stream, const LassoOptions& opt) {
  check_design(x, y);
  if (folds < 2) throw DomainError("cross-validation needs at least two folds");
  if (grid.empty()) throw DomainError("cross-validation grid is empty");
  for (double v : grid)
    if (!(v > 0.0)) throw DomainError("cross-validation grid values must be positive");
  const auto n = static_cast<Index>(x.rows());
  if (n / folds < 2) throw DomainError("a cross-validation fold would hold fewer than two rows");

  RngEngine engine(stream.child("cv-folds"));
  const auto perm = random_permutation(engine, n);
  std::vector<Index> fold_of(n);
  for (Index i = 0; i < n; ++i) fold_of[perm[i]] = i % folds;

  std::vector<double> sse(grid.size(), 0.0);
  for (Index f = 0; f < folds; ++f) {
    std::vector<Index> train, test;
    for (Index i = 0; i < n; ++i) (fold_of[i] == f ? test : train).push_back(i);
    const Matrix xtr = select_rows(x, train);
    const Vector ytr = select_rows(y, train);
    const Matrix xte = select_rows(x, test);
    const Vector yte = select_rows(y, test);
    const auto path = lasso_path(xtr, ytr, grid, opt);
    for (std::size_t k = 0; k < grid.size(); ++k)
      sse[k] += (yte - xte * path[k].beta).squaredNorm();
  }
  CvResult out;
  out.cv_error.resize(grid.size());
  std::size_t best = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.cv_error[k] = sse[k] / static_cast<double>(n);
    const bool better = out.cv_error[k] < out.cv_error[best] ||
                        (out.cv_error[k] == out.cv_error[best] && grid[k] > grid[best]);
    if (better) best = k;
  }
  out.lambda = grid[best];
  out.fit = lasso_cd(x, y, out.lambda, opt);
  return out;
}

}  // namespace tosi
