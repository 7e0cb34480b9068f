#include "tosi/numerics/matrix.hpp"

#include "tosi/error.hpp"

#include <cmath>
#include <string>

namespace tosi {

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1)
    throw DomainError("data matrix must have at least one row and one column");
  if (!values_.allFinite()) {
    for (Eigen::Index i = 0; i < values_.rows(); ++i)
      for (Eigen::Index j = 0; j < values_.cols(); ++j)
        if (!std::isfinite(values_(i, j)))
          throw DomainError("non-finite entry at row " + std::to_string(i + 1) +
                            ", column " + std::to_string(j + 1));
  }
}

Matrix DataMatrix::select_rows(std::span<const Index> rows) const {
  return tosi::select_rows(values_, rows);
}

Matrix select_rows(const Matrix& m, std::span<const Index> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= static_cast<Index>(m.rows()))
      throw DomainError("row index out of range");
    out.row(static_cast<Eigen::Index>(r)) = m.row(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

Vector select_rows(const Vector& v, std::span<const Index> rows) {
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= static_cast<Index>(v.size()))
      throw DomainError("row index out of range");
    out(static_cast<Eigen::Index>(r)) = v(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

Vector center_columns(Matrix& m) {
  Vector means = m.colwise().mean().transpose();
  m.rowwise() -= means.transpose();
  return means;
}

SpdMatrix::SpdMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.rows() != values_.cols())
    throw DomainError("covariance matrix must be square and non-empty");
  if (!values_.allFinite()) throw SingularityError("covariance matrix has non-finite entries");
  const double scale = values_.cwiseAbs().maxCoeff();
  const double asym = (values_ - values_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1e-300))
    throw DomainError("covariance matrix is not symmetric");
}

SpdMatrix SpdMatrix::scalar(double variance) {
  Matrix m(1, 1);
  m(0, 0) = variance;
  return SpdMatrix(std::move(m));
}

SpdMatrix SpdMatrix::scaled_identity(Index dim, double variance) {
  return SpdMatrix(Matrix::Identity(static_cast<Eigen::Index>(dim),
                                    static_cast<Eigen::Index>(dim)) *
                   variance);
}

}  // namespace tosi
