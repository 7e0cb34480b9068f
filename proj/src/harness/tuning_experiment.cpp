#include "tosi/harness/tuning_experiment.hpp"

#include "tosi/error.hpp"
#include "tosi/harness/dgp.hpp"
#include "tosi/tuning/tuning.hpp"

#include <algorithm>
#include <vector>

namespace tosi {
namespace {

struct Outcome {
  bool ok = false;
  TuningStatus status = TuningStatus::boundary_low;
  IndexSet tosi;
  IndexSet cv;
  IndexSet truth;
  bool path_has_truth = false;
};

IndexSet support_of(const Vector& beta) {
  IndexSet s;
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    if (beta(j) != 0.0) s.push_back(static_cast<Index>(j));
  return s;
}

void tally(SelectionStats& st, const IndexSet& sel, const IndexSet& truth) {
  st.nv += static_cast<double>(sel.size());
  const bool in = std::includes(sel.begin(), sel.end(), truth.begin(), truth.end());
  st.in += in ? 1.0 : 0.0;
  st.cs += in && sel.size() == truth.size() ? 1.0 : 0.0;
}

void normalize(SelectionStats& st, Index reps) {
  if (reps == 0) return;
  const double r = static_cast<double>(reps);
  st.nv /= r;
  st.in /= r;
  st.cs /= r;
}

}  // namespace

TuningExperimentResult run_tuning_experiment(const TuningExperimentConfig& cfg, Execution exec) {
  if (cfg.reps < 1) throw DomainError("reps must be at least 1");
  if (cfg.s < 1 || cfg.s >= cfg.p) throw DomainError("s must satisfy 1 <= s < p");
  if (cfg.n < 4 || cfg.extra < 2) throw DomainError("samples are too small");

  const RngStream root(cfg.seed, "tuning-experiment");
  std::vector<Outcome> outs(cfg.reps);
  for_each_index(exec, cfg.reps, [&](std::size_t r) {
    Outcome& o = outs[r];
    const RngStream stream = root.child("rep", r);
    try {
      const Vector beta = regression_beta(cfg.p, cfg.s, cfg.rho, stream.child("beta"), cfg.z_low, cfg.z_high);
      o.truth = support_of(beta);
      const RegressionData main = gen_regression(cfg.n, beta, stream.child("main"));
      const RegressionData extra = gen_regression(cfg.extra, beta, stream.child("extra"));

      const auto grid = lambda_grid(extra.x, extra.y, cfg.grid_size, cfg.grid_ratio);
      TuningOptions opt;
      opt.alpha = cfg.alpha;
      opt.splits = cfg.splits;
      opt.debias = cfg.debias;
      const TuningOutcome t =
          select_lambda_tosi(main.x, main.y, extra.x, extra.y, grid, stream.child("splits"), opt,
                             Execution::serial);
      o.status = t.status;
      o.path_has_truth = std::any_of(t.trace.begin(), t.trace.end(),
                                     [&](const TuningStep& s) { return s.support == o.truth; });
      if (t.status == TuningStatus::found) {
        o.tosi = t.support;
      } else {
        auto it = std::find_if(t.trace.begin(), t.trace.end(),
                               [](const TuningStep& s) { return s.max_accepts; });
        o.tosi = it != t.trace.end() ? it->support : t.trace.back().support;
      }

      Matrix x(main.x.rows() + extra.x.rows(), main.x.cols());
      x << extra.x, main.x;
      Vector y(x.rows());
      y << extra.y, main.y;
      const double ratio = x.rows() >= x.cols() ? 1e-4 : 1e-2;
      const auto cv_grid = lambda_grid(x, y, cfg.cv_grid_size, ratio);
      const CvResult cv = cv_lasso(x, y, cfg.cv_folds, cv_grid, stream.child("cv"));
      o.cv = support_of(cv.fit.beta);
      o.ok = true;
    } catch (const Error&) {
      o.ok = false;
    }
  });

  TuningExperimentResult res;
  res.config = cfg;
  for (const Outcome& o : outs) {
    if (!o.ok) {
      ++res.failed;
      continue;
    }
    ++res.completed;
    switch (o.status) {
      case TuningStatus::found: ++res.found; break;
      case TuningStatus::boundary_low: ++res.boundary_low; break;
      case TuningStatus::boundary_high: ++res.boundary_high; break;
    }
    res.path_contains_truth += o.path_has_truth ? 1.0 : 0.0;
    tally(res.tosi, o.tosi, o.truth);
    tally(res.cv, o.cv, o.truth);
  }
  normalize(res.tosi, res.completed);
  normalize(res.cv, res.completed);
  if (res.completed > 0) res.path_contains_truth /= static_cast<double>(res.completed);
  return res;
}

}  // namespace tosi
