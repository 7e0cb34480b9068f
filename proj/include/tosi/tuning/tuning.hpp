#pragma once

#include "tosi/core/tosi.hpp"
#include "tosi/estimators/regression.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tosi {

/// One evaluated grid point. Sets G0(lambda) (estimated zeros) and
/// Gnz(lambda) (estimated nonzeros) come from a lasso fit on the extra
/// sample; p-values come from ToMax on G0 and ToMin on Gnz over the main
/// sample.
struct TuningStep {
  double lambda = 0.0;
  Index zero_count = 0;
  Index nonzero_count = 0;
  std::optional<double> p_max;
  std::optional<double> p_min;
  /// ToMax accepts (p_max >= alpha) and ToMin rejects (p_min < alpha).
  bool max_accepts = false;
  bool min_rejects = false;
  /// Extra-sample lasso support (the estimated nonzero set).
  IndexSet support;
  /// Empty unless the point was skipped.
  std::string note;
};

enum class TuningStatus { found, boundary_low, boundary_high };

std::string_view to_string(TuningStatus status);

struct TuningOutcome {
  TuningStatus status = TuningStatus::boundary_low;
  std::optional<double> lambda_star;
  /// Extra-sample lasso support at lambda_star (empty when not found).
  IndexSet support;
  /// In descending lambda order.
  std::vector<TuningStep> trace;
  /// False when |G0(lambda)| decreases somewhere as lambda grows.
  bool monotone = true;
};

struct TuningOptions {
  double alpha = 0.05;
  Index splits = 1;
  DebiasConfig debias;
  LassoOptions lasso;
};

/// Scans `grid` for a penalty at which the estimated zero set is accepted by
/// ToMax and the estimated nonzero set is rejected by ToMin. Every grid
/// point reuses the same split plan, so the halves are fitted once. Returns
/// the largest qualifying lambda. If ToMax rejects at every point the status
/// is boundary_low (the grid needs smaller values); otherwise, when no point
/// qualifies, boundary_high.
TuningOutcome select_lambda_tosi(const Matrix& x_main, const Vector& y_main,
                                 const Matrix& x_extra, const Vector& y_extra,
                                 std::span<const double> grid, const RngStream& stream,
                                 const TuningOptions& opt = {},
                                 Execution exec = Execution::parallel);

}  // namespace tosi
