// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any selected criterion fails.

#include "tosi/core/tosi.hpp"
#include "tosi/error.hpp"
#include "tosi/estimators/factor.hpp"
#include "tosi/estimators/mean.hpp"
#include "tosi/estimators/regression.hpp"
#include "tosi/harness/dgp.hpp"
#include "tosi/harness/gsets.hpp"
#include "tosi/harness/simulate.hpp"
#include "tosi/harness/tuning_experiment.hpp"
#include "tosi/numerics/linalg.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace tosi;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double ks_uniform(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  const double m = static_cast<double>(p.size());
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    d = std::max({d, std::fabs(p[i] - static_cast<double>(i) / m), std::fabs(static_cast<double>(i + 1) / m - p[i])});
  return d;
}

IndexSet range0(Index lo, Index hi) {
  IndexSet g;
  for (Index j = lo; j < hi; ++j) g.push_back(j);
  return g;
}

// 1: single-split p-values under the null are uniform (mean model).
Verdict criterion1(std::uint64_t seed) {
  Verdict v;
  const Index reps = 2000, n = 100, p = 200;
  const IndexSet null_max = range0(150, 200);  // all zero
  const IndexSet null_min = range0(0, 50);     // 5 nonzero, 45 zero
  std::vector<double> pmax(reps), pmin(reps);
  const MeanBackend backend;
  const RngStream root(seed, "acceptance-1");
  for_each_index(Execution::parallel, reps, [&](std::size_t r) {
    const RngStream rep = root.child("rep", r);
    const MeanData d = gen_mean(n, p, 5, 0.3, rep.child("data"));
    const DataMatrix data(d.x);
    const Split sp = make_split(n, rep.child("splits"), 0);
    pmax[r] = tosi_single(data, null_max, backend, Mode::max, sp).p_value;
    pmin[r] = tosi_single(data, null_min, backend, Mode::min, sp).p_value;
  });
  const double kmax = ks_uniform(pmax), kmin = ks_uniform(pmin);
  v.detail << "KS(ToMax)=" << kmax << " KS(ToMin)=" << kmin;
  v.require(kmax < 0.05, "ToMax KS < 0.05");
  v.require(kmin < 0.05, "ToMin KS < 0.05");
  return v;
}

SimTable regression_table(std::uint64_t seed) {
  SimConfig cfg;
  cfg.experiment = Experiment::regression;
  cfg.n = 100;
  cfg.p = 200;
  cfg.s = 5;
  cfg.rho = 0.3;
  cfg.reps = 500;
  cfg.splits = {1, 8};
  cfg.seed = seed;
  cfg.gsets = {"G11", "G12", "G13", "G16"};
  cfg.by_comparator = false;
  return run_size_power(cfg);
}

// 2: regression sizes.
Verdict criterion2(const SimTable& t) {
  Verdict v;
  for (const char* g : {"G11", "G12", "G13"}) {
    const SimCell* c1 = t.find(g, "ToMax", 1);
    const SimCell* c8 = t.find(g, "ToMax", 8);
    v.detail << g << ": L1=" << c1->rate << " L8=" << c8->rate << "  ";
    v.require(c1->rate >= 0.02 && c1->rate <= 0.08, std::string(g) + " L=1 size in [0.02, 0.08]");
    v.require(c8->rate <= 0.07, std::string(g) + " L=8 size <= 0.07");
  }
  v.detail << "completed=" << t.completed;
  return v;
}

// 3: multi-split power gain on G16.
Verdict criterion3(const SimTable& t) {
  Verdict v;
  const double p1 = t.find("G16", "ToMax", 1)->rate;
  const double p8 = t.find("G16", "ToMax", 8)->rate;
  v.detail << "G16 power L1=" << p1 << " L8=" << p8 << " gain=" << p8 - p1;
  v.require(p8 - p1 >= 0.10, "gain >= 0.10");
  return v;
}

// 4: penalty tuning versus cross-validation.
Verdict criterion4(std::uint64_t seed) {
  Verdict v;
  TuningExperimentConfig cfg;
  cfg.n = 50;
  cfg.p = 50;
  cfg.s = 3;
  cfg.rho = 2.0;
  cfg.reps = 500;
  cfg.seed = seed;
  const TuningExperimentResult r = run_tuning_experiment(cfg);
  v.detail << "TOSI CS=" << r.tosi.cs << " NV=" << r.tosi.nv << " IN=" << r.tosi.in << "; CV CS=" << r.cv.cs
           << " NV=" << r.cv.nv << "; path ceiling=" << r.path_contains_truth << "; completed=" << r.completed;
  v.require(r.tosi.cs >= 0.70, "TOSI exact-support rate >= 0.70");
  v.require(r.cv.cs <= 0.25, "CV exact-support rate <= 0.25");
  v.require(r.tosi.cs - r.cv.cs >= 0.40, "TOSI - CV >= 0.40");
  return v;
}

// 5: factor model sizes and ToMin power.
Verdict criterion5(std::uint64_t seed) {
  Verdict v;
  SimConfig cfg;
  cfg.experiment = Experiment::factor;
  cfg.n = 400;
  cfg.p = 150;
  cfg.s = 112;
  cfg.q = 1;
  cfg.rho = 0.3;
  cfg.sigma_sq = 1.0;
  cfg.reps = 200;
  cfg.splits = {1, 5, 8, 15, 20};
  cfg.seed = seed;
  cfg.by_comparator = false;
  const SimTable t = run_size_power(cfg);
  double lo = 1.0, hi = 0.0;
  for (const auto& c : t.cells) {
    if (!c.null_hypothesis) continue;
    lo = std::min(lo, c.rate);
    hi = std::max(hi, c.rate);
    if (c.rate < 0.01 || c.rate > 0.09)
      v.require(false, c.gset + " " + c.method + " L=" + std::to_string(c.splits) + " size " + std::to_string(c.rate));
  }
  v.detail << "sigma^2=1 null sizes in [" << lo << ", " << hi << "]";

  cfg.n = 200;
  cfg.sigma_sq = 3.0;
  cfg.splits = {20};
  cfg.gsets = {"G26"};
  const SimTable t3 = run_size_power(cfg);
  const double power = t3.find("G26", "ToMin", 20)->rate;
  v.detail << "; sigma^2=3 G26 ToMin(20) power=" << power;
  v.require(power >= 0.90, "G26 ToMin(20) power >= 0.90");
  return v;
}

std::vector<double> holm_oracle(const std::vector<double>& p) {
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] < p[b]; });
  std::vector<double> out(m);
  double running = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    running = std::max(running, static_cast<double>(m - k) * p[order[k]]);
    out[order[k]] = std::min(1.0, running);
  }
  return out;
}

std::vector<double> by_oracle(const std::vector<double>& p) {
  const std::size_t m = p.size();
  double c = 0.0;
  for (std::size_t i = 1; i <= m; ++i) c += 1.0 / static_cast<double>(i);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] < p[b]; });
  std::vector<double> out(m);
  double running = 1.0;
  for (std::size_t k = m; k-- > 0;) {
    running = std::min(running, static_cast<double>(m) * c / static_cast<double>(k + 1) * p[order[k]]);
    out[order[k]] = running;
  }
  return out;
}

Matrix normal_matrix(Index n, Index p, const RngStream& s) {
  RngEngine e(s);
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = e.normal();
  return m;
}

// 6: exact oracle equivalences.
Verdict criterion6(std::uint64_t seed) {
  Verdict v;
  const RngStream root(seed, "acceptance-6");
  RngEngine e(root.child("adjust"));
  double adj_err = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> p(1 + e.below(6));
    for (auto& x : p) x = e.below(8) == 0 ? 1.0 : e.uniform01();
    const auto h = holm_adjust(p), ho = holm_oracle(p), b = by_adjust(p), bo = by_oracle(p);
    for (std::size_t i = 0; i < p.size(); ++i)
      adj_err = std::max({adj_err, std::fabs(h[i] - ho[i]), std::fabs(b[i] - bo[i])});
  }
  v.require(adj_err <= 1e-12, "holm/by oracle");

  double soft_err = 0.0;
  for (Index t = 0; t < 50; ++t) {
    const Matrix x = normal_matrix(40, 1, root.child("soft-x", t)) * (0.3 + 0.05 * t);
    const Vector y = 0.5 * x.col(0) + normal_matrix(40, 1, root.child("soft-y", t)).col(0);
    const double scale = std::sqrt(x.col(0).squaredNorm() / 40.0);
    const double z = x.col(0).dot(y) / 40.0 / scale;
    for (double lambda : {0.0, 0.01, 0.1, 0.4, 2.0}) {
      const double st = z > lambda ? z - lambda : z < -lambda ? z + lambda : 0.0;
      soft_err = std::max(soft_err, std::fabs(lasso_cd(x, y, lambda).beta(0) - st / scale));
    }
  }
  v.require(soft_err <= 1e-10, "soft-threshold");

  double energy_err = 0.0;
  for (Index t = 0; t < 20; ++t) {
    const Matrix x = normal_matrix(30 + t, 12, root.child("svd", t));
    Matrix xc = x;
    center_columns(xc);
    const Vector s = singular_values(xc);
    for (Index q = 1; q <= 5; ++q) {
      const double discarded = s.tail(s.size() - static_cast<Eigen::Index>(q)).squaredNorm();
      energy_err = std::max(energy_err, std::fabs(factor_residual(x, factor_fit(x, q)) - discarded));
    }
  }
  v.require(energy_err <= 1e-8, "discarded energy");

  double ols_err = 0.0;
  for (Index t = 0; t < 10; ++t) {
    const Matrix x = normal_matrix(80, 6, root.child("ols-x", t));
    const Vector y = x * Vector::LinSpaced(6, -1.0, 1.5) + normal_matrix(80, 1, root.child("ols-y", t)).col(0);
    DebiasConfig cfg;
    cfg.lambda_main = 0.0;
    cfg.lambda_node = 0.0;
    const EstimateSet d = debiased_estimates(x, y, range0(0, 6), cfg);
    const Vector b = x.colPivHouseholderQr().solve(y);
    for (Index j = 0; j < 6; ++j) ols_err = std::max(ols_err, std::fabs(d.entries[j].theta(0) - b(j)));
  }
  v.require(ols_err <= 1e-8, "debiased = OLS");
  v.detail << "max errors: adjust=" << adj_err << " soft=" << soft_err << " energy=" << energy_err
           << " ols=" << ols_err;
  return v;
}

// 7: structural invariants.
Verdict criterion7(std::uint64_t seed) {
  Verdict v;
  const RngStream root(seed, "acceptance-7");
  Index fits = 0;
  double e1 = 0.0, e2 = 0.0;
  bool ordered = true;
  for (Index t = 0; t < 60; ++t) {
    const Index q = 1 + t % 3;
    const Matrix x = t % 2 == 0 ? normal_matrix(20 + t, 10 + t % 7, root.child("fx", t))
                                : gen_factor(60, 30, q, 24, 0.3, 1.0, root.child("fd", t)).x;
    const FactorFit f = factor_fit(x, q);
    const double n = static_cast<double>(f.h.rows());
    e1 = std::max(e1, (f.h.transpose() * f.h / n - Matrix::Identity(f.h.cols(), f.h.cols())).cwiseAbs().maxCoeff());
    Matrix btb = f.b.transpose() * f.b;
    const double scale = std::max(1.0, btb.cwiseAbs().maxCoeff());
    for (Eigen::Index a = 0; a < btb.rows(); ++a) {
      if (a + 1 < btb.rows() && btb(a, a) < btb(a + 1, a + 1) - 1e-10 * scale) ordered = false;
      btb(a, a) = 0.0;
    }
    e2 = std::max(e2, btb.cwiseAbs().maxCoeff() / scale);
    ++fits;
  }
  v.require(e1 <= 1e-8, "(E1) n^-1 H^T H = I");
  v.require(e2 <= 1e-8 && ordered, "(E2) B^T B diagonal, nonincreasing");

  Index plans = 0;
  bool partitions = true;
  for (Index n = 4; n <= 200; n += 3) {
    const SplitPlan plan = make_split_plan(n, 1 + n % 9, root.child("plan", n));
    for (const auto& sp : plan.splits) partitions = partitions && is_partition(sp, n) && sp.first.size() == n / 2;
    ++plans;
  }
  v.require(partitions, "split plans partition the rows");

  bool identical = true;
  for (Experiment ex : {Experiment::mean, Experiment::regression, Experiment::factor}) {
    SimConfig cfg;
    cfg.experiment = ex;
    cfg.n = 60;
    cfg.p = 40;
    cfg.s = ex == Experiment::factor ? 30 : 4;
    cfg.reps = 12;
    cfg.splits = {1, 3};
    cfg.seed = seed;
    cfg.keep_statistics = true;
    const int before = max_threads();
    set_threads(1);
    const SimTable a = run_size_power(cfg, Execution::serial);
    set_threads(4);
    const SimTable b = run_size_power(cfg, Execution::parallel);
    set_threads(before);
    for (std::size_t k = 0; k < a.cells.size(); ++k)
      identical = identical && a.cells[k].rejections == b.cells[k].rejections && a.cells[k].rate == b.cells[k].rate;
    identical = identical && a.statistics == b.statistics && a.cells.size() == b.cells.size();
  }
  v.require(identical, "SimTable identical under thread changes");
  v.detail << fits << " factor fits (E1 err " << e1 << ", E2 err " << e2 << "), " << plans
           << " split plans, 3 tables x 2 thread settings";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> selected;
  std::uint64_t seed = 7;
  app.add_option("--criterion", selected, "Criterion number (repeatable; default all)")->check(CLI::Range(1, 7));
  app.add_option("--seed", seed, "Seed for the Monte Carlo criteria");
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7};
  auto wanted = [&](int c) { return std::find(selected.begin(), selected.end(), c) != selected.end(); };

  int failures = 0;
  auto report = [&](int c, const Verdict& v, double seconds) {
    std::printf("criterion %d: %s  %s  (%.1fs)\n", c, v.pass ? "PASS" : "FAIL", v.detail.str().c_str(), seconds);
    std::fflush(stdout);
    if (!v.pass) ++failures;
  };
  auto timed = [&](int c, auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "error: " << e.what();
    }
    report(c, v, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  };

  if (wanted(1)) timed(1, [&] { return criterion1(seed); });
  if (wanted(2) || wanted(3)) {
    const auto t0 = std::chrono::steady_clock::now();
    SimTable table;
    std::string error;
    try {
      table = regression_table(seed);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (int c : {2, 3}) {
      if (!wanted(c)) continue;
      Verdict v;
      if (!error.empty()) {
        v.pass = false;
        v.detail << "error: " << error;
      } else {
        v = c == 2 ? criterion2(table) : criterion3(table);
      }
      report(c, v, secs);
    }
  }
  if (wanted(4)) timed(4, [&] { return criterion4(seed); });
  if (wanted(5)) timed(5, [&] { return criterion5(seed); });
  if (wanted(6)) timed(6, [&] { return criterion6(seed); });
  if (wanted(7)) timed(7, [&] { return criterion7(seed); });
  return failures == 0 ? 0 : 1;
}
