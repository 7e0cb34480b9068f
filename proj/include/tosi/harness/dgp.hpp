#pragma once

#include "tosi/numerics/matrix.hpp"
#include "tosi/numerics/rng.hpp"

namespace tosi {

/// n draws of N(0, Sigma) with Sigma_jk = phi^|j-k|, generated as a
/// stationary AR(1) recursion along each row.
Matrix ar1_normal(Index n, Index p, double phi, RngEngine& engine);

/// beta_j = rho * z_j with z_j ~ U[z_low, z_high] for j < s, zero otherwise.
Vector regression_beta(Index p, Index s, double rho, const RngStream& stream,
                       double z_low = 0.0, double z_high = 2.0);

struct RegressionData {
  Matrix x;
  Vector y;
  Vector beta;
};

/// Rows x_i ~ N(0, AR(0.9)), eps_i ~ t(4)/sqrt(2), y = X beta + eps.
RegressionData gen_regression(Index n, const Vector& beta, const RngStream& stream);

/// As above with beta drawn from stream.child("beta") with rho = 0.3.
RegressionData gen_regression(Index n, Index p, Index s, const RngStream& stream);

/// p x q block-sparse loadings: rows of block k (s0 = floor(s/q) rows each,
/// the last block running to s) are rho (1.5 - 0.24 k + z), z ~ U[0, 1],
/// with k counted from 0. Throws DomainError when s < q.
Matrix factor_loadings(Index p, Index q, Index s, double rho, RngEngine& engine);

struct FactorData {
  Matrix x;
  Matrix h;
  Matrix b;
};

/// Scores h_i ~ N(0, AR(0.5)) then centered and scaled to n^{-1} H^T H = I;
/// X = H B^T + U with u_ij ~ N(0, sigma_sq).
FactorData gen_factor(Index n, Index p, Index q, Index s, double rho, double sigma_sq,
                      const RngStream& stream);

struct MeanData {
  Matrix x;
  Vector theta;
};

/// Rows N(theta, I_p) with theta_j = rho for j < s.
MeanData gen_mean(Index n, Index p, Index s, double rho, const RngStream& stream);

}  // namespace tosi
