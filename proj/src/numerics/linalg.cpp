#include "tosi/numerics/linalg.hpp"

#include "tosi/error.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace tosi {

ThinSvd thin_svd(const Matrix& m, Index k) {
  const auto kk = static_cast<Eigen::Index>(k);
  if (k == 0 || kk > std::min(m.rows(), m.cols()))
    throw DomainError("thin_svd: rank must lie in [1, min(rows, cols)]");
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return ThinSvd{svd.matrixU().leftCols(kk), svd.singularValues().head(kk),
                 svd.matrixV().leftCols(kk)};
}

Vector singular_values(const Matrix& m) {
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues();
}

double spd_jitter(const SpdMatrix& s) {
  return 1e-10 * s.values().trace() / static_cast<double>(s.dim());
}

SpdEigen conditioned_eigen(const SpdMatrix& s) {
  const double jitter = spd_jitter(s);
  if (s.dim() == 1) {
    const double v = s.values()(0, 0) + jitter;
    if (!(v > 0.0) || !std::isfinite(v)) throw SingularityError("variance is not positive");
    return SpdEigen{Vector::Constant(1, v), Matrix::Identity(1, 1)};
  }
  Matrix m = s.values();
  m.diagonal().array() += jitter;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.info() != Eigen::Success) throw SingularityError("eigendecomposition failed");
  const Vector& values = eig.eigenvalues();
  const double largest = values(values.size() - 1);
  if (!(largest > 0.0) || values(0) <= 1e-12 * largest)
    throw SingularityError("covariance matrix is singular after conditioning");
  return SpdEigen{values, eig.eigenvectors()};
}

SpdMatrix spd_inv_sqrt(const SpdMatrix& s) {
  const SpdEigen eig = conditioned_eigen(s);
  Matrix r = eig.vectors * eig.values.cwiseSqrt().cwiseInverse().asDiagonal() *
             eig.vectors.transpose();
  // Symmetrize away rounding so the result passes the SpdMatrix check.
  Matrix sym = 0.5 * (r + r.transpose());
  return SpdMatrix(std::move(sym));
}

double whitened_norm(const SpdMatrix& s, const Vector& v) {
  if (static_cast<Index>(v.size()) != s.dim())
    throw DomainError("dimension mismatch between estimate and covariance");
  const SpdEigen eig = conditioned_eigen(s);
  const Vector rotated = eig.vectors.transpose() * v;
  return std::sqrt((rotated.array().square() / eig.values.array()).sum());
}

}  // namespace tosi
