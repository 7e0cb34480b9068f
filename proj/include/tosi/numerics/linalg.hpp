#pragma once

#include "tosi/numerics/matrix.hpp"

namespace tosi {

/// Rank-k truncation of a singular value decomposition M = U S V^T.
struct ThinSvd {
  Matrix u;  // n x k, orthonormal columns
  Vector s;  // k singular values, nonincreasing
  Matrix v;  // d x k, orthonormal columns
};

/// Top-k singular triplets of m. Throws DomainError unless 1 <= k <= min(n, d).
ThinSvd thin_svd(const Matrix& m, Index k);

/// All min(n, d) singular values of m, nonincreasing.
Vector singular_values(const Matrix& m);

/// Diagonal jitter added before factorizing an SpdMatrix: 1e-10 * trace / dim.
double spd_jitter(const SpdMatrix& s);

/// Eigendecomposition of the jittered matrix. Throws SingularityError when
/// the smallest eigenvalue is <= 1e-12 times the largest (or non-positive).
struct SpdEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns
};
SpdEigen conditioned_eigen(const SpdMatrix& s);

/// R = S^{-1/2} (symmetric), so that R S R = I up to the jitter.
SpdMatrix spd_inv_sqrt(const SpdMatrix& s);

/// ||S^{-1/2} v||_2, computed through the same conditioning as spd_inv_sqrt.
double whitened_norm(const SpdMatrix& s, const Vector& v);

}  // namespace tosi
