#pragma once

#include "tosi/numerics/matrix.hpp"
#include "tosi/numerics/rng.hpp"

#include <cstdint>
#include <string_view>

namespace tosi::testing {

inline Matrix normal_matrix(Index n, Index p, std::uint64_t seed, std::string_view label = "m") {
  RngEngine e(RngStream(seed, label));
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = e.normal();
  return m;
}

inline Vector normal_vector(Index n, std::uint64_t seed, std::string_view label = "v") {
  return normal_matrix(n, 1, seed, label).col(0);
}

}  // namespace tosi::testing
