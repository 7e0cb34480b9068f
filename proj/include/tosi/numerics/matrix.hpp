#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace tosi {

using Index = std::size_t;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense n x d data matrix; row = observation, column = variable.
/// Every entry is finite and both dimensions are at least one.
class DataMatrix {
 public:
  DataMatrix() = default;
  explicit DataMatrix(Matrix values);

  Index rows() const noexcept { return static_cast<Index>(values_.rows()); }
  Index cols() const noexcept { return static_cast<Index>(values_.cols()); }
  const Matrix& values() const noexcept { return values_; }
  double operator()(Index i, Index j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  /// Copy of the rows listed in `rows`, in the given order.
  Matrix select_rows(std::span<const Index> rows) const;

 private:
  Matrix values_;
};

/// Copy of the listed rows of an arbitrary matrix.
Matrix select_rows(const Matrix& m, std::span<const Index> rows);
Vector select_rows(const Vector& v, std::span<const Index> rows);

/// Subtracts the column means in place and returns them.
Vector center_columns(Matrix& m);

/// Symmetric positive-definite q x q matrix (symmetric to 1e-12 relative).
class SpdMatrix {
 public:
  SpdMatrix() = default;
  explicit SpdMatrix(Matrix values);
  /// 1 x 1 matrix holding a variance.
  static SpdMatrix scalar(double variance);
  /// variance * I_dim.
  static SpdMatrix scaled_identity(Index dim, double variance);

  Index dim() const noexcept { return static_cast<Index>(values_.rows()); }
  const Matrix& values() const noexcept { return values_; }

 private:
  Matrix values_;
};

}  // namespace tosi
