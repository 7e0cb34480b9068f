#pragma once

#include "tosi/core/tosi.hpp"
#include "tosi/estimators/regression.hpp"
#include "tosi/harness/gsets.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tosi {

enum class Experiment { regression, factor, mean };

std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);

struct SimConfig {
  Experiment experiment = Experiment::regression;
  Index n = 100;
  Index p = 200;
  Index s = 5;
  Index q = 1;
  /// Signal strength: regression beta_j = rho z with z ~ U[0, 2], factor
  /// loadings rho (1.5 - 0.24 k + z) with z ~ U[0, 1], mean theta_j = rho.
  double rho = 0.3;
  /// Factor-model noise variance.
  double sigma_sq = 1.0;
  /// Split counts L to evaluate. Each replicate draws max(L) splits and
  /// smaller L use a prefix of them.
  std::vector<Index> splits{1};
  double alpha = 0.05;
  Index reps = 500;
  std::uint64_t seed = 0;
  /// G-set labels to run; empty runs all twelve.
  std::vector<std::string> gsets;
  /// Adds a "BY" cell per G1x set: Benjamini-Yekutieli over full-sample
  /// per-coordinate Wald p-values.
  bool by_comparator = true;
  /// Debiased-lasso settings for the regression experiment.
  DebiasConfig debias;
  /// Keep the single-split statistic of every replicate (for QQ output).
  bool keep_statistics = false;
};

/// Throws DomainError describing the first invalid field.
void validate(const SimConfig& cfg);

struct SimCell {
  std::string gset;
  std::string method;  // "ToMax", "ToMin" or "BY"
  Index splits = 0;    // L; 0 for BY
  Index n = 0;
  Index rejections = 0;
  Index reps = 0;
  double rate = 0.0;
  double se = 0.0;
  /// Whether the set's null hypothesis holds under the generating model.
  bool null_hypothesis = false;
};

struct SimTable {
  SimConfig config;
  std::vector<SimCell> cells;
  Index completed = 0;
  /// Replicates discarded because an estimator failed.
  Index failed = 0;
  std::vector<std::string> failure_messages;  // at most 10
  /// Single-split statistic per G-set label, in replicate order.
  std::map<std::string, std::vector<double>> statistics;

  const SimCell* find(std::string_view gset, std::string_view method, Index splits) const;
};

/// Monte Carlo size/power table. Replicate r draws its data and splits from
/// the stream (seed, "simulate") / rep#r, so the table is identical under
/// any thread count or schedule.
SimTable run_size_power(const SimConfig& cfg, Execution exec = Execution::parallel);

/// Pairs (chi2 quantile at (i - 0.5)/m, i-th smallest statistic), i = 1..m.
std::vector<std::pair<double, double>> qq_data(std::span<const double> stats, Index q);

}  // namespace tosi
