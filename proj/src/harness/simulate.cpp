#include "tosi/harness/simulate.hpp"

#include "tosi/error.hpp"
#include "tosi/estimators/factor.hpp"
#include "tosi/estimators/mean.hpp"
#include "tosi/estimators/regression.hpp"
#include "tosi/harness/dgp.hpp"
#include "tosi/numerics/chi2.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace tosi {

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::regression: return "regression";
    case Experiment::factor: return "factor";
    case Experiment::mean: return "mean";
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  if (name == "regression" || name == "exp1") return Experiment::regression;
  if (name == "factor" || name == "exp2") return Experiment::factor;
  if (name == "mean") return Experiment::mean;
  return std::nullopt;
}

void validate(const SimConfig& cfg) {
  if (cfg.reps < 1) throw DomainError("reps must be at least 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (cfg.n < 4) throw DomainError("n must be at least 4");
  if (cfg.p < 4) throw DomainError("p must be at least 4");
  if (cfg.s < 1 || cfg.s >= cfg.p) throw DomainError("s must satisfy 1 <= s < p");
  if (cfg.q < 1) throw DomainError("q must be at least 1");
  if (cfg.splits.empty()) throw DomainError("at least one split count L is required");
  for (Index l : cfg.splits)
    if (l < 1) throw DomainError("split counts must be at least 1");
  if (cfg.experiment == Experiment::factor) {
    if (cfg.s / cfg.q == 0) throw DomainError("factor blocks are empty: s < q");
    if (cfg.q >= std::min(cfg.n / 2, cfg.p)) throw DomainError("q must be below min(n/2, p)");
    if (!(cfg.sigma_sq > 0.0)) throw DomainError("sigma-sq must be positive");
  }
}

const SimCell* SimTable::find(std::string_view gset, std::string_view method, Index splits) const {
  for (const auto& c : cells)
    if (c.gset == gset && c.method == method && c.splits == splits) return &c;
  return nullptr;
}

namespace {

struct Replicate {
  bool ok = false;
  std::string error;
  std::vector<char> reject;
  std::vector<double> stats;
};

struct Generated {
  DataMatrix data;
  std::unique_ptr<EstimatorBackend> backend;
};

Generated generate(const SimConfig& cfg, const Vector& beta, const RngStream& stream) {
  Generated g;
  switch (cfg.experiment) {
    case Experiment::regression: {
      const RegressionData d = gen_regression(cfg.n, beta, stream);
      Matrix joined(d.x.rows(), d.x.cols() + 1);
      joined.col(0) = d.y;
      joined.rightCols(d.x.cols()) = d.x;
      g.data = DataMatrix(std::move(joined));
      g.backend = std::make_unique<RegressionBackend>(0, cfg.debias);
      break;
    }
    case Experiment::factor: {
      FactorData d = gen_factor(cfg.n, cfg.p, cfg.q, cfg.s, cfg.rho, cfg.sigma_sq, stream);
      g.data = DataMatrix(std::move(d.x));
      g.backend = std::make_unique<FactorBackend>(FactorBackendConfig{cfg.q});
      break;
    }
    case Experiment::mean: {
      MeanData d = gen_mean(cfg.n, cfg.p, cfg.s, cfg.rho, stream);
      g.data = DataMatrix(std::move(d.x));
      g.backend = std::make_unique<MeanBackend>();
      break;
    }
  }
  return g;
}

bool by_rejects(const FittedSample& full, const IndexSet& g, double alpha) {
  std::vector<double> p;
  p.reserve(g.size());
  for (Index j : g) {
    const Estimate e = full.estimate(j);
    p.push_back(chi2_sf(wald_stat(e.theta, e.sigma, full.n_used()),
                        static_cast<unsigned>(full.q())));
  }
  const auto adj = by_adjust(p);
  return *std::min_element(adj.begin(), adj.end()) < alpha;
}

}  // namespace

SimTable run_size_power(const SimConfig& cfg, Execution exec) {
  validate(cfg);
  std::vector<GSet> sets;
  for (GSet& gs : build_gsets(cfg.p, cfg.s))
    if (cfg.gsets.empty() || std::find(cfg.gsets.begin(), cfg.gsets.end(), gs.label) != cfg.gsets.end())
      sets.push_back(std::move(gs));
  if (sets.empty()) throw DomainError("no known G-set label selected");

  const RngStream root(cfg.seed, "simulate");
  // Regression coefficients are drawn once per run and held fixed.
  Vector beta;
  std::vector<bool> nonzero(cfg.p, false);
  if (cfg.experiment == Experiment::regression) {
    beta = regression_beta(cfg.p, cfg.s, cfg.rho, root.child("beta"));
    for (Index j = 0; j < cfg.p; ++j) nonzero[j] = beta(static_cast<Eigen::Index>(j)) != 0.0;
  } else {
    for (Index j = 0; j < cfg.s; ++j) nonzero[j] = cfg.rho != 0.0;
  }

  std::vector<Index> ls = cfg.splits;
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  const Index l_max = ls.back();

  SimTable table;
  table.config = cfg;
  for (const GSet& gs : sets) {
    const bool null = is_null(gs, nonzero);
    for (Index l : ls)
      table.cells.push_back({gs.label, std::string(to_string(gs.mode)), l, cfg.n, 0, 0, 0.0, 0.0, null});
    if (cfg.by_comparator && gs.mode == Mode::max)
      table.cells.push_back({gs.label, "BY", 0, cfg.n, 0, 0, 0.0, 0.0, null});
  }

  std::vector<TestRequest> requests;
  for (const GSet& gs : sets) requests.push_back({gs.g, gs.mode});

  std::vector<Replicate> reps(cfg.reps);
  for_each_index(exec, cfg.reps, [&](std::size_t r) {
    Replicate& out = reps[r];
    const RngStream stream = root.child("rep", r);
    try {
      const Generated gen = generate(cfg, beta, stream.child("data"));
      const SplitPlan plan = make_split_plan(cfg.n, l_max, stream.child("splits"));
      const auto results = run_split_tests(gen.data, *gen.backend, plan, requests, Execution::serial);
      std::unique_ptr<FittedSample> full;
      if (cfg.by_comparator) {
        std::vector<Index> all(cfg.n);
        for (Index i = 0; i < cfg.n; ++i) all[i] = i;
        full = gen.backend->fit(gen.data, all);
      }
      for (std::size_t k = 0; k < sets.size(); ++k) {
        for (Index l : ls) {
          std::vector<TestResult> prefix(results[k].begin(), results[k].begin() + static_cast<std::ptrdiff_t>(l));
          out.reject.push_back(aggregate_splits(std::move(prefix), cfg.alpha).reject ? 1 : 0);
        }
        if (full && sets[k].mode == Mode::max)
          out.reject.push_back(by_rejects(*full, sets[k].g, cfg.alpha) ? 1 : 0);
        out.stats.push_back(results[k].front().statistic);
      }
      out.ok = true;
    } catch (const Error& e) {
      out.ok = false;
      out.error = e.what();
      out.reject.clear();
      out.stats.clear();
    }
  });

  for (const Replicate& r : reps) {
    if (!r.ok) {
      ++table.failed;
      if (table.failure_messages.size() < 10) table.failure_messages.push_back(r.error);
      continue;
    }
    ++table.completed;
    for (std::size_t c = 0; c < table.cells.size(); ++c) table.cells[c].rejections += r.reject[c];
    if (cfg.keep_statistics)
      for (std::size_t k = 0; k < sets.size(); ++k) table.statistics[sets[k].label].push_back(r.stats[k]);
  }
  for (SimCell& c : table.cells) {
    c.reps = table.completed;
    if (c.reps > 0) {
      c.rate = static_cast<double>(c.rejections) / static_cast<double>(c.reps);
      c.se = std::sqrt(c.rate * (1.0 - c.rate) / static_cast<double>(c.reps));
    }
  }
  return table;
}

std::vector<std::pair<double, double>> qq_data(std::span<const double> stats, Index q) {
  if (stats.empty()) throw DomainError("QQ data needs at least one statistic");
  std::vector<double> sorted(stats.begin(), stats.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  std::vector<std::pair<double, double>> out;
  out.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    out.emplace_back(chi2_quantile((static_cast<double>(i) + 0.5) / m, static_cast<unsigned>(q)), sorted[i]);
  return out;
}

}  // namespace tosi
