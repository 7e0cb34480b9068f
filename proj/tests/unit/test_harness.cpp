#include "helpers.hpp"

#include "tosi/error.hpp"
#include "tosi/harness/dgp.hpp"
#include "tosi/harness/gsets.hpp"
#include "tosi/harness/simulate.hpp"
#include "tosi/harness/tuning_experiment.hpp"
#include "tosi/numerics/chi2.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace tosi;

namespace {

IndexSet one_based(Index lo, Index hi) {
  IndexSet g;
  for (Index j = lo; j <= hi; ++j) g.push_back(j - 1);
  return g;
}

const GSet& by_label(const std::vector<GSet>& sets, const std::string& label) {
  return *std::find_if(sets.begin(), sets.end(), [&](const GSet& s) { return s.label == label; });
}

Matrix sample_cov(const Matrix& x) {
  Matrix c = x;
  center_columns(c);
  return c.transpose() * c / static_cast<double>(x.rows() - 1);
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("G-set definitions") {
  const auto sets = build_gsets(100, 5);
  REQUIRE(sets.size() == 12);
  CHECK(by_label(sets, "G11").g == one_based(99, 100));
  CHECK(by_label(sets, "G13").g == one_based(6, 100));
  CHECK(by_label(sets, "G24").g == one_based(1, 2));
  CHECK(by_label(sets, "G12").g == one_based(50, 100));
  CHECK(by_label(sets, "G26").g == one_based(1, 5));
  for (const auto& s : sets) CHECK(s.mode == (s.label[1] == '1' ? Mode::max : Mode::min));
  std::vector<bool> nz(100, false);
  for (int j = 0; j < 5; ++j) nz[j] = true;
  CHECK(is_null(by_label(sets, "G11"), nz));
  CHECK(!is_null(by_label(sets, "G16"), nz));
  CHECK(is_null(by_label(sets, "G23"), nz));
  CHECK(!is_null(by_label(sets, "G26"), nz));
  CHECK_THROWS_AS(build_gsets(3, 1), DomainError);
  CHECK_THROWS_AS(build_gsets(10, 10), DomainError);
}

TEST_CASE("AR(0.9) design covariance") {
  RngEngine e(RngStream(1, "ar"));
  const Matrix c5 = sample_cov(ar1_normal(10000, 5, 0.9, e));
  CHECK(std::fabs(c5(0, 2) - 0.81) <= 0.03);
  const RegressionData d = gen_regression(10000, Vector::Zero(10), RngStream(2, "cov"));
  const Matrix c = sample_cov(d.x);
  double dev = 0.0;
  for (int j = 0; j < 10; ++j)
    for (int k = 0; k < 10; ++k) dev = std::max(dev, std::fabs(c(j, k) - std::pow(0.9, std::abs(j - k))));
  CHECK(dev <= 0.05);
  const double m = d.y.mean();
  CHECK(std::fabs((d.y.array() - m).square().sum() / 9999.0 - 1.0) <= 0.05);
}

TEST_CASE("regression coefficients") {
  const Vector b = regression_beta(200, 5, 0.3, RngStream(3, "b"));
  CHECK((b.array() != 0.0).count() == 5);
  for (int j = 0; j < 5; ++j) {
    CHECK(b(j) > 0.0);
    CHECK(b(j) <= 0.6);
  }
  CHECK(b.tail(195).isZero(0.0));
}

TEST_CASE("factor model generator") {
  const FactorData d = gen_factor(200, 150, 1, 3 * 150 / 4, 0.3, 1.0, RngStream(4, "f"));
  Index nz = 0;
  for (Eigen::Index j = 0; j < 150; ++j) {
    if (d.b(j, 0) != 0.0) {
      CHECK(j < 112);
      ++nz;
    }
  }
  CHECK(nz == 112);
  CHECK((d.h.transpose() * d.h / 200.0 - Matrix::Identity(1, 1)).cwiseAbs().maxCoeff() <= 1e-10);

  const FactorData d2 = gen_factor(100, 40, 2, 30, 0.3, 1.0, RngStream(5, "f2"));
  CHECK((d2.h.transpose() * d2.h / 100.0 - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-10);
  for (Eigen::Index j = 0; j < 40; ++j) {
    if (d2.b(j, 1) != 0.0) {
      CHECK(d2.b(j, 1) >= 0.3 * 1.26 - 1e-12);
      CHECK(d2.b(j, 1) <= 0.3 * 2.26 + 1e-12);
    }
  }
}

TEST_CASE("mean model generator") {
  const MeanData d = gen_mean(50, 10, 3, 0.4, RngStream(6, "m"));
  CHECK(d.theta.head(3).isConstant(0.4));
  CHECK(d.theta.tail(7).isZero(0.0));
}

TEST_CASE("qq data") {
  RngEngine e(RngStream(7, "qq"));
  std::vector<double> stats(2000);
  for (auto& s : stats) {
    const double z = e.normal();
    s = z * z;
  }
  const auto pairs = qq_data(stats, 1);
  REQUIRE(pairs.size() == 2000);
  double band = 0.0, central = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double pr = (i + 0.5) / 2000.0;
    CHECK(pairs[i].first == doctest::Approx(chi2_quantile(pr, 1)).epsilon(1e-12));
    band = std::max(band, std::fabs((1.0 - chi2_sf(pairs[i].second, 1)) - pr));
    if (pr <= 0.9) central = std::max(central, std::fabs(pairs[i].first - pairs[i].second));
  }
  CHECK(band <= 1.63 / std::sqrt(2000.0));
  CHECK(central <= 0.25);

  const auto flat = qq_data(std::vector<double>(5, 2.0), 1);
  for (const auto& pr : flat) CHECK(pr.second == 2.0);
  const auto single = qq_data(std::vector<double>{1.0}, 2);
  REQUIRE(single.size() == 1);
  CHECK(single[0].first == doctest::Approx(chi2_quantile(0.5, 2)));
}

TEST_CASE("simulation table structure") {
  SimConfig cfg;
  cfg.experiment = Experiment::mean;
  cfg.n = 40;
  cfg.p = 20;
  cfg.s = 3;
  cfg.reps = 1;
  cfg.splits = {1, 3};
  cfg.seed = 5;
  const SimTable t = run_size_power(cfg);
  CHECK(t.completed == 1);
  for (const auto& c : t.cells) CHECK((c.rate == 0.0 || c.rate == 1.0));
  REQUIRE(t.find("G11", "ToMax", 3));
  CHECK(t.find("G11", "BY", 0));
  CHECK(!t.find("G21", "BY", 0));

  cfg.reps = 0;
  CHECK_THROWS_AS(validate(cfg), DomainError);
}

TEST_CASE("simulation tables are identical across thread counts") {
  for (Experiment ex : {Experiment::mean, Experiment::regression, Experiment::factor}) {
    SimConfig cfg;
    cfg.experiment = ex;
    cfg.n = 60;
    cfg.p = ex == Experiment::factor ? 40 : 30;
    cfg.s = ex == Experiment::factor ? 30 : 3;
    cfg.reps = 6;
    cfg.splits = {1, 2};
    cfg.seed = 11;
    cfg.keep_statistics = true;
    const int before = max_threads();
    set_threads(1);
    const SimTable serial = run_size_power(cfg, Execution::serial);
    set_threads(4);
    const SimTable par4 = run_size_power(cfg, Execution::parallel);
    set_threads(3);
    const SimTable par3 = run_size_power(cfg, Execution::parallel);
    set_threads(before);
    REQUIRE(serial.cells.size() == par4.cells.size());
    for (std::size_t k = 0; k < serial.cells.size(); ++k) {
      CHECK(serial.cells[k].rejections == par4.cells[k].rejections);
      CHECK(serial.cells[k].rejections == par3.cells[k].rejections);
    }
    CHECK(serial.statistics == par4.statistics);
    CHECK(serial.statistics == par3.statistics);
  }
}

TEST_CASE("tuning experiment is reproducible") {
  TuningExperimentConfig cfg;
  cfg.reps = 3;
  cfg.seed = 9;
  cfg.grid_size = 15;
  cfg.cv_grid_size = 20;
  const auto a = run_tuning_experiment(cfg, Execution::serial);
  const auto b = run_tuning_experiment(cfg, Execution::parallel);
  CHECK(a.completed + a.failed == 3);
  CHECK(a.tosi.cs == b.tosi.cs);
  CHECK(a.tosi.nv == b.tosi.nv);
  CHECK(a.cv.nv == b.cv.nv);
  CHECK(a.found + a.boundary_low + a.boundary_high == a.completed);
}

}
