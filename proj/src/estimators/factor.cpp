#include "tosi/estimators/factor.hpp"

#include "tosi/error.hpp"
#include "tosi/numerics/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace tosi {

FactorFit factor_fit(const Matrix& x, Index q) {
  const auto n = static_cast<Index>(x.rows());
  const auto p = static_cast<Index>(x.cols());
  if (q < 1 || q > std::min(n, p)) throw DomainError("factor count must lie in [1, min(n, p)]");
  Matrix xc = x;
  center_columns(xc);

  const auto kq = static_cast<Eigen::Index>(q);
  Eigen::BDCSVD<Matrix> svd(xc, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double root_n = std::sqrt(static_cast<double>(n));

  FactorFit fit;
  fit.q = q;
  fit.singular_values = svd.singularValues();
  fit.h = root_n * svd.matrixU().leftCols(kq);
  fit.b = svd.matrixV().leftCols(kq) * svd.singularValues().head(kq).asDiagonal() / root_n;

  for (Eigen::Index k = 0; k < kq; ++k) {
    const double col_max = fit.b.col(k).cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < fit.b.rows(); ++j) {
      const double v = fit.b(j, k);
      if (std::fabs(v) > 1e-12 * col_max) {
        if (v < 0.0) {
          fit.b.col(k) *= -1.0;
          fit.h.col(k) *= -1.0;
        }
        break;
      }
    }
  }

  const Matrix resid = xc - fit.h * fit.b.transpose();
  fit.residual_variances = resid.colwise().squaredNorm().transpose() / static_cast<double>(n);

  const Vector& s = fit.singular_values;
  if (kq < s.size()) {
    const double a = s(kq - 1);
    const double c = s(kq);
    fit.non_identifiable = std::fabs(a - c) <= 1e-12 * std::max(a, std::numeric_limits<double>::min());
  }
  return fit;
}

double factor_residual(const Matrix& x, const FactorFit& fit) {
  Matrix xc = x;
  center_columns(xc);
  return (xc - fit.h * fit.b.transpose()).squaredNorm();
}

Index select_q(const Matrix& x, Index q_max) {
  const auto n = static_cast<Index>(x.rows());
  const auto p = static_cast<Index>(x.cols());
  if (q_max < 1 || q_max + 1 > std::min(n, p))
    throw DomainError("q_max must lie in [1, min(n, p) - 1]");
  Matrix xc = x;
  center_columns(xc);
  const Vector s = singular_values(xc);
  const Vector eig = s.array().square() / static_cast<double>(n);
  const double tiny = 1e-14 * eig(0);

  Index best = 0;
  double best_ratio = -1.0;
  bool informative = false;
  for (Index k = 0; k < q_max; ++k) {
    const double num = eig(static_cast<Eigen::Index>(k));
    const double den = eig(static_cast<Eigen::Index>(k + 1));
    const double ratio = den <= tiny ? (num <= tiny ? 1.0 : std::numeric_limits<double>::infinity())
                                     : num / den;
    if (std::fabs(ratio - 1.0) > 1e-12) informative = true;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = k + 1;
    }
  }
  if (!informative) throw DomainError("no factor structure: all eigenvalue ratios equal one");
  return best;
}

LoadingSupport sparsify_loadings(const FactorFit& fit, double c) {
  if (!(c > 0.0)) throw DomainError("threshold constant must be positive");
  const double n = static_cast<double>(fit.h.rows());
  const double p = static_cast<double>(fit.b.rows());
  const double rate = std::sqrt(std::log(p) / n);
  LoadingSupport out;
  for (Eigen::Index j = 0; j < fit.b.rows(); ++j) {
    const double cut = c * std::sqrt(fit.residual_variances(j)) * rate;
    bool any = false;
    for (Eigen::Index k = 0; k < fit.b.cols(); ++k) {
      if (std::fabs(fit.b(j, k)) > cut) {
        out.entries.emplace_back(static_cast<Index>(j), static_cast<Index>(k));
        any = true;
      }
    }
    if (any) out.rows.push_back(static_cast<Index>(j));
  }
  return out;
}

namespace {

class FittedFactors final : public FittedSample {
 public:
  FittedFactors(FactorFit fit, Index n, double floor)
      : fit_(std::move(fit)), n_(n), floor_(floor) {}

  Estimate estimate(Index j) const override {
    if (j >= parameter_count()) throw DomainError("index " + std::to_string(j + 1) + " exceeds column count");
    const auto jj = static_cast<Eigen::Index>(j);
    const double var = fit_.residual_variances(jj);
    if (!(var >= floor_))
      throw SingularityError("residual variance below floor for variable " + std::to_string(j + 1), j);
    return Estimate{j, fit_.b.row(jj).transpose(), SpdMatrix::scaled_identity(fit_.q, var)};
  }
  Index n_used() const override { return n_; }
  Index q() const override { return fit_.q; }
  Index parameter_count() const override { return static_cast<Index>(fit_.b.rows()); }

 private:
  FactorFit fit_;
  Index n_;
  double floor_;
};

}  // namespace

FactorBackend::FactorBackend(FactorBackendConfig cfg) : cfg_(cfg) {
  if (cfg_.q < 1) throw DomainError("factor count must be at least 1");
}

std::unique_ptr<FittedSample> FactorBackend::fit(const DataMatrix& data,
                                                 std::span<const Index> rows) const {
  FactorFit f = factor_fit(data.select_rows(rows), cfg_.q);
  return std::make_unique<FittedFactors>(std::move(f), rows.size(), cfg_.variance_floor);
}

EstimateSet factor_estimates(const DataMatrix& data, std::span<const Index> rows,
                             const IndexSet& g, Index q) {
  return FactorBackend(FactorBackendConfig{q}).estimate(data, rows, g);
}

}  // namespace tosi
