#pragma once

#include "tosi/core/estimate.hpp"
#include "tosi/numerics/parallel.hpp"
#include "tosi/numerics/rng.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace tosi {

/// ToMax tests an assumed-zero set (is anything nonzero?); ToMin tests an
/// assumed-nonzero set (is anything zero?).
enum class Mode { max, min };

std::string_view to_string(Mode mode);

/// One random partition of {0..n-1}: |first| = floor(n/2), second gets the rest.
struct Split {
  std::vector<Index> first;
  std::vector<Index> second;
};

struct SplitPlan {
  Index n = 0;
  std::vector<Split> splits;
};

/// Split number `l` of the plan keyed by `stream`. Plans are prefix-stable:
/// the first L' splits of an L-split plan equal the L'-split plan.
Split make_split(Index n, const RngStream& stream, Index l);

/// L independent uniform partitions. Throws TooFewObservationsError for n < 4.
SplitPlan make_split_plan(Index n, Index splits, const RngStream& stream);

/// True when the split's halves are disjoint and cover {0..n-1}.
bool is_partition(const Split& split, Index n);

/// Index whose whitened estimate norm ||Sigma^{-1/2} theta|| is largest
/// (Mode::max) or smallest (Mode::min). Ties go to the smallest index.
Index stage1_select(const EstimateSet& est, Mode mode);

/// n_bar * theta^T Sigma^{-1} theta.
double wald_stat(const Vector& theta, const SpdMatrix& sigma, Index n_bar);

struct TestResult {
  Mode mode = Mode::max;
  Index selected_index = 0;
  double statistic = 0.0;
  double p_value = 1.0;
  Index q = 1;
  Index n_bar = 0;
};

/// Two-stage test from already-fitted halves: select on `stage1` over g,
/// Wald-test the selected index on `stage2`.
TestResult two_stage_test(const FittedSample& stage1, const FittedSample& stage2,
                          const IndexSet& g, Mode mode);

/// Single-split ToMax/ToMin on `data`.
TestResult tosi_single(const DataMatrix& data, const IndexSet& g,
                       const EstimatorBackend& backend, Mode mode, const Split& split);

/// Holm step-down adjusted p-values, in input order.
std::vector<double> holm_adjust(std::span<const double> p);

/// Benjamini-Yekutieli step-up adjusted p-values, in input order.
std::vector<double> by_adjust(std::span<const double> p);

/// Rule "reject if at least ceil(r L) of the L raw p-values are <= alpha r".
struct MarkovDiagnostic {
  double r = 0.0;
  double gamma = 0.0;
  Index required = 0;
  Index count = 0;
  bool reject = false;
};

struct MultiSplitResult {
  Mode mode = Mode::max;
  double alpha = 0.05;
  std::vector<TestResult> splits;
  std::vector<double> raw_p;
  std::vector<double> adjusted_p;
  double combined_p = 1.0;
  Index k_rejections = 0;
  bool reject = false;
  std::optional<MarkovDiagnostic> markov;
};

/// Holm aggregation of per-split results. `markov_r` in (0, 1] adds the
/// Markov-inequality diagnostic.
MultiSplitResult aggregate_splits(std::vector<TestResult> splits, double alpha,
                                  std::optional<double> markov_r = std::nullopt);

/// One (set, direction) request evaluated on every split of a plan.
struct TestRequest {
  IndexSet g;
  Mode mode = Mode::max;
};

/// Per-request, per-split results: out[request][split]. Each split fits its
/// two halves once and shares them across requests. Splits run in parallel
/// under Execution::parallel; output is schedule-independent.
std::vector<std::vector<TestResult>> run_split_tests(const DataMatrix& data,
                                                     const EstimatorBackend& backend,
                                                     const SplitPlan& plan,
                                                     std::span<const TestRequest> requests,
                                                     Execution exec = Execution::parallel);

/// ToMax(L) / ToMin(L): L splits drawn from `stream`, Holm-combined.
MultiSplitResult tosi_multi(const DataMatrix& data, const IndexSet& g,
                            const EstimatorBackend& backend, Mode mode, Index splits,
                            double alpha, const RngStream& stream,
                            Execution exec = Execution::parallel,
                            std::optional<double> markov_r = std::nullopt);

}  // namespace tosi
