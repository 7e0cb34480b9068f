#include "tosi/tuning/tuning.hpp"

#include "tosi/error.hpp"

#include <algorithm>
#include <numeric>

namespace tosi {

std::string_view to_string(TuningStatus status) {
  switch (status) {
    case TuningStatus::found: return "found";
    case TuningStatus::boundary_low: return "boundary_low";
    case TuningStatus::boundary_high: return "boundary_high";
  }
  return "unknown";
}

TuningOutcome select_lambda_tosi(const Matrix& x_main, const Vector& y_main,
                                 const Matrix& x_extra, const Vector& y_extra,
                                 std::span<const double> grid, const RngStream& stream,
                                 const TuningOptions& opt, Execution exec) {
  if (grid.empty()) throw DomainError("tuning grid is empty");
  if (x_main.cols() != x_extra.cols())
    throw DomainError("main and extra samples have different predictor counts");
  if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const auto p = static_cast<Index>(x_main.cols());

  std::vector<double> lambdas(grid.begin(), grid.end());
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  const auto path = lasso_path(x_extra, y_extra, lambdas, opt.lasso);

  // Main data as [y | X] for the regression backend.
  Matrix joined(x_main.rows(), x_main.cols() + 1);
  joined.col(0) = y_main;
  joined.rightCols(x_main.cols()) = x_main;
  const DataMatrix data(std::move(joined));
  const RegressionBackend backend(0, opt.debias);
  const SplitPlan plan = make_split_plan(data.rows(), opt.splits, stream);

  TuningOutcome out;
  out.trace.resize(lambdas.size());
  std::vector<TestRequest> requests;
  std::vector<std::pair<std::size_t, Mode>> owner;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    IndexSet zeros, nonzeros;
    for (Index j = 0; j < p; ++j)
      (path[k].beta(static_cast<Eigen::Index>(j)) != 0.0 ? nonzeros : zeros).push_back(j);
    TuningStep& step = out.trace[k];
    step.lambda = lambdas[k];
    step.zero_count = zeros.size();
    step.nonzero_count = nonzeros.size();
    if (zeros.empty() || nonzeros.empty()) {
      step.note = zeros.empty() ? "estimated zero set is empty" : "estimated nonzero set is empty";
    } else {
      requests.push_back({zeros, Mode::max});
      owner.emplace_back(k, Mode::max);
      requests.push_back({nonzeros, Mode::min});
      owner.emplace_back(k, Mode::min);
    }
    step.support = std::move(nonzeros);
    if (k > 0 && out.trace[k].zero_count > out.trace[k - 1].zero_count) out.monotone = false;
  }

  if (!requests.empty()) {
    const auto results = run_split_tests(data, backend, plan, requests, exec);
    for (std::size_t r = 0; r < requests.size(); ++r) {
      const MultiSplitResult agg = aggregate_splits(results[r], opt.alpha);
      TuningStep& step = out.trace[owner[r].first];
      if (owner[r].second == Mode::max) {
        step.p_max = agg.combined_p;
        step.max_accepts = !agg.reject;
      } else {
        step.p_min = agg.combined_p;
        step.min_rejects = agg.reject;
      }
    }
  }

  bool any_accept = false;
  for (std::size_t k = 0; k < out.trace.size(); ++k) {
    const TuningStep& step = out.trace[k];
    any_accept = any_accept || step.max_accepts;
    if (step.max_accepts && step.min_rejects) {
      out.status = TuningStatus::found;
      out.lambda_star = step.lambda;
      out.support = step.support;
      return out;
    }
  }
  out.status = any_accept ? TuningStatus::boundary_high : TuningStatus::boundary_low;
  return out;
}

}  // namespace tosi
