#pragma once

#include "tosi/estimators/regression.hpp"
#include "tosi/numerics/matrix.hpp"
#include "tosi/numerics/parallel.hpp"

#include <cstdint>

namespace tosi {

/// Support recovery of TOSI-guided penalty selection versus cross-validated
/// lasso on the sparse regression model.
struct TuningExperimentConfig {
  Index n = 50;
  Index p = 50;
  Index s = 3;
  /// Coefficients are rho * z, z ~ U[z_low, z_high].
  double rho = 2.0;
  double z_low = 0.0;
  double z_high = 2.0;
  Index extra = 50;
  Index reps = 500;
  double alpha = 0.05;
  Index splits = 1;
  /// TOSI grid: geometric from the extra-sample lambda_max down by grid_ratio.
  Index grid_size = 50;
  double grid_ratio = 0.01;
  Index cv_folds = 10;
  Index cv_grid_size = 100;
  std::uint64_t seed = 0;
  DebiasConfig debias;
};

struct SelectionStats {
  /// Mean selected-set size.
  double nv = 0.0;
  /// Fraction of replicates whose selection contains the true support.
  double in = 0.0;
  /// Fraction of replicates selecting exactly the true support.
  double cs = 0.0;
};

struct TuningExperimentResult {
  TuningExperimentConfig config;
  SelectionStats tosi;
  SelectionStats cv;
  Index completed = 0;
  Index failed = 0;
  Index found = 0;
  Index boundary_low = 0;
  Index boundary_high = 0;
  /// Fraction of replicates whose extra-sample lasso path selects the true
  /// support exactly at some grid value (a ceiling for the TOSI rate).
  double path_contains_truth = 0.0;
};

/// Each replicate draws its own coefficients, a main sample of n rows and an
/// independent extra sample. TOSI fits supports on the extra sample and tests
/// them on the main sample; CV uses both samples pooled. When TOSI finds no
/// qualifying lambda its selection falls back to the largest lambda accepted
/// by ToMax, or the smallest grid value if none is.
TuningExperimentResult run_tuning_experiment(const TuningExperimentConfig& cfg,
                                             Execution exec = Execution::parallel);

}  // namespace tosi
