#include "tosi/harness/dgp.hpp"

#include "tosi/error.hpp"

#include <cmath>

namespace tosi {

Matrix ar1_normal(Index n, Index p, double phi, RngEngine& engine) {
  if (!(std::fabs(phi) < 1.0)) throw DomainError("AR(1) coefficient must lie in (-1, 1)");
  const double innov = std::sqrt(1.0 - phi * phi);
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double prev = engine.normal();
    if (p > 0) x(i, 0) = prev;
    for (Eigen::Index j = 1; j < x.cols(); ++j) {
      prev = phi * prev + innov * engine.normal();
      x(i, j) = prev;
    }
  }
  return x;
}

Vector regression_beta(Index p, Index s, double rho, const RngStream& stream, double z_low,
                       double z_high) {
  if (s > p) throw DomainError("sparsity exceeds dimension");
  if (!(z_low < z_high)) throw DomainError("coefficient range is empty");
  RngEngine engine(stream);
  Vector beta = Vector::Zero(static_cast<Eigen::Index>(p));
  for (Index j = 0; j < s; ++j) beta(static_cast<Eigen::Index>(j)) = rho * engine.uniform(z_low, z_high);
  return beta;
}

RegressionData gen_regression(Index n, const Vector& beta, const RngStream& stream) {
  RngEngine xs(stream.child("x"));
  RngEngine es(stream.child("eps"));
  RegressionData d;
  d.x = ar1_normal(n, static_cast<Index>(beta.size()), 0.9, xs);
  d.beta = beta;
  d.y = d.x * beta;
  const double root2 = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < d.y.size(); ++i) d.y(i) += es.student_t(4.0) / root2;
  return d;
}

RegressionData gen_regression(Index n, Index p, Index s, const RngStream& stream) {
  return gen_regression(n, regression_beta(p, s, 0.3, stream.child("beta")), stream);
}

Matrix factor_loadings(Index p, Index q, Index s, double rho, RngEngine& engine) {
  if (q < 1) throw DomainError("factor count must be at least 1");
  if (s > p) throw DomainError("sparsity exceeds dimension");
  const Index s0 = s / q;
  if (s0 == 0) throw DomainError("block size floor(s/q) is zero");
  Matrix b = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
  for (Index k = 0; k < q; ++k) {
    const Index lo = k * s0;
    const Index hi = k + 1 == q ? s : (k + 1) * s0;
    for (Index j = lo; j < hi; ++j)
      b(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          rho * (1.5 - 0.24 * static_cast<double>(k) + engine.uniform01());
  }
  return b;
}

FactorData gen_factor(Index n, Index p, Index q, Index s, double rho, double sigma_sq,
                      const RngStream& stream) {
  if (!(sigma_sq > 0.0)) throw DomainError("noise variance must be positive");
  if (n <= q) throw DomainError("need more observations than factors");
  RngEngine lo(stream.child("loadings"));
  RngEngine hs(stream.child("scores"));
  RngEngine us(stream.child("noise"));
  FactorData d;
  d.b = factor_loadings(p, q, s, rho, lo);

  Matrix h = ar1_normal(n, q, 0.5, hs);
  center_columns(h);
  Eigen::HouseholderQR<Matrix> qr(h);
  Matrix qthin = qr.householderQ() * Matrix::Identity(h.rows(), h.cols());
  // Keep the orientation of the drawn scores.
  const Matrix r = qr.matrixQR().topRows(h.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < qthin.cols(); ++k)
    if (r(k, k) < 0.0) qthin.col(k) *= -1.0;
  d.h = std::sqrt(static_cast<double>(n)) * qthin;

  const double sd = std::sqrt(sigma_sq);
  d.x = d.h * d.b.transpose();
  for (Eigen::Index i = 0; i < d.x.rows(); ++i)
    for (Eigen::Index j = 0; j < d.x.cols(); ++j) d.x(i, j) += sd * us.normal();
  return d;
}

MeanData gen_mean(Index n, Index p, Index s, double rho, const RngStream& stream) {
  if (s > p) throw DomainError("sparsity exceeds dimension");
  RngEngine engine(stream.child("x"));
  MeanData d;
  d.theta = Vector::Zero(static_cast<Eigen::Index>(p));
  d.theta.head(static_cast<Eigen::Index>(s)).setConstant(rho);
  d.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < d.x.rows(); ++i)
    for (Eigen::Index j = 0; j < d.x.cols(); ++j) d.x(i, j) = d.theta(j) + engine.normal();
  return d;
}

}  // namespace tosi
