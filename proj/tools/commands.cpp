#include "commands.hpp"

#include "report.hpp"

#include "tosi/error.hpp"
#include "tosi/estimators/factor.hpp"
#include "tosi/estimators/mean.hpp"
#include "tosi/estimators/regression.hpp"
#include "tosi/io/csv.hpp"
#include "tosi/io/index_set.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#ifndef TOSI_VERSION
#define TOSI_VERSION "unknown"
#endif

namespace tosi::cli {
namespace {

using Clock = std::chrono::steady_clock;

struct Common {
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::string out;
  int threads = 0;
};

void add_common(CLI::App& sub, Common& c) {
  c.seed_opt = sub.add_option("--seed", c.seed, "Random seed (drawn from entropy and echoed when omitted)");
  sub.add_option("--out", c.out, "Write the JSON report to this file instead of stdout");
  sub.add_option("--threads", c.threads, "Maximum worker threads")->check(CLI::NonNegativeNumber);
}

std::uint64_t resolve_seed(const Common& c) {
  if (c.seed_opt->count() > 0) return c.seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::vector<std::string> echo(const std::vector<std::string>& args, const Common& c,
                              std::uint64_t seed) {
  std::vector<std::string> cmd{"tosi"};
  cmd.insert(cmd.end(), args.begin(), args.end());
  if (c.seed_opt->count() == 0) {
    cmd.emplace_back("--seed");
    cmd.push_back(std::to_string(seed));
  }
  return cmd;
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << j.dump(2) << '\n';
  if (!f) throw InputError("failed writing '" + path + "'");
}

Json digest_json(const std::string& path, const CsvTable& t) {
  return {{"path", path},
          {"rows", t.values.rows()},
          {"cols", t.values.cols()},
          {"checksum", hex64(matrix_digest(t.values))}};
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------- test

struct TestArgs {
  Common common;
  std::string data;
  std::string model;
  std::vector<std::string> sets;
  std::string mode = "both";
  Index splits = 8;
  double alpha = 0.05;
  std::string response;
  Index q = 1;
  double markov_r = 0.0;
  CLI::Option* markov_opt = nullptr;
};

int cmd_test(const TestArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const auto start = Clock::now();
  const std::uint64_t seed = resolve_seed(a.common);
  const CsvTable table = read_csv_file(a.data);

  std::unique_ptr<EstimatorBackend> backend;
  std::vector<std::string> names;
  if (a.model == "mean") {
    backend = std::make_unique<MeanBackend>();
    names = table.header;
  } else if (a.model == "regression") {
    if (a.response.empty()) throw InputError("--response is required for the regression model");
    const Index r = table.column(a.response);
    if (table.header.size() < 2) throw InputError("regression needs at least one predictor column");
    backend = std::make_unique<RegressionBackend>(r);
    for (Index j = 0; j < table.header.size(); ++j)
      if (j != r) names.push_back(table.header[j]);
  } else {
    backend = std::make_unique<FactorBackend>(FactorBackendConfig{a.q});
    names = table.header;
  }

  const DataMatrix data(table.values);
  const Index p = backend->parameter_count(data);
  std::vector<IndexSet> sets;
  for (const auto& path : a.sets) sets.push_back(read_index_set_file(path, p));

  std::vector<Mode> modes;
  if (a.mode != "tomin") modes.push_back(Mode::max);
  if (a.mode != "tomax") modes.push_back(Mode::min);
  std::vector<TestRequest> requests;
  for (const auto& g : sets)
    for (Mode m : modes) requests.push_back({g, m});

  std::optional<double> markov;
  if (a.markov_opt->count() > 0) markov = a.markov_r;
  if (!(a.alpha > 0.0 && a.alpha < 1.0)) throw InputError("--alpha must lie in (0, 1)");
  if (markov && !(*markov > 0.0 && *markov <= 1.0)) throw InputError("--markov-r must lie in (0, 1]");

  const SplitPlan plan = make_split_plan(data.rows(), a.splits, RngStream(seed, "test"));
  auto per_split = run_split_tests(data, *backend, plan, requests);

  Json results = Json::array();
  for (std::size_t k = 0; k < requests.size(); ++k) {
    const MultiSplitResult agg = aggregate_splits(std::move(per_split[k]), a.alpha, markov);
    Json r;
    r["set"] = a.sets[k / modes.size()];
    r["size"] = requests[k].g.size();
    r["result"] = multi_split_json(agg, names);
    results.push_back(std::move(r));
  }

  Json report;
  report["tool"] = "tosi";
  report["version"] = TOSI_VERSION;
  report["command"] = echo(args, a.common, seed);
  report["seed"] = seed;
  Json set_info = Json::array();
  for (std::size_t i = 0; i < sets.size(); ++i)
    set_info.push_back({{"path", a.sets[i]}, {"size", sets[i].size()}, {"indices", index_set_json(sets[i])}});
  report["inputs"] = {{"data", digest_json(a.data, table)}, {"sets", std::move(set_info)}};
  Json config = {{"model", a.model}, {"mode", a.mode}, {"splits", a.splits}, {"alpha", a.alpha}};
  if (a.model == "regression") config["response"] = a.response;
  if (a.model == "factor") config["q"] = a.q;
  if (markov) config["markov_r"] = *markov;
  report["config"] = std::move(config);
  report["results"] = std::move(results);
  report["timing"] = {{"seconds", seconds_since(start)}, {"threads", max_threads()}};
  emit(report, a.common.out, out);
  return ExitCode::ok;
}

// ---------------------------------------------------------------- tune

struct TuneArgs {
  Common common;
  std::string data;
  std::string extra;
  std::string response;
  std::string grid;
  double alpha = 0.05;
  Index splits = 1;
  bool allow_overlap = false;
};

double parse_double(std::string_view s, const std::string& what) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw InputError(what + ": not a finite number: '" + std::string(s) + "'");
  return v;
}

}  // namespace

/// "a,b,c" or "min:max:count" (geometric, from max down to min).
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw InputError("--grid range must be min:max:count");
    const double lo = parse_double(parts[0], "--grid min");
    const double hi = parse_double(parts[1], "--grid max");
    const double count = parse_double(parts[2], "--grid count");
    if (count != std::floor(count) || count < 0) throw InputError("--grid count must be a non-negative integer");
    if (!(lo > 0.0 && hi >= lo)) throw InputError("--grid range needs 0 < min <= max");
    const auto k = static_cast<Index>(count);
    for (Index i = 0; i < k; ++i) {
      const double t = k == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(k - 1);
      grid.push_back(hi * std::pow(lo / hi, t));
    }
  } else {
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) {
      if (part.find_first_not_of(" \t") == std::string::npos) continue;
      const double v = parse_double(part, "--grid");
      if (v < 0.0) throw InputError("--grid values must be non-negative");
      grid.push_back(v);
    }
  }
  if (grid.empty()) throw InputError("--grid is empty");
  return grid;
}

namespace {

int cmd_tune(const TuneArgs& a, const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  const auto start = Clock::now();
  const std::uint64_t seed = resolve_seed(a.common);
  const std::vector<double> grid = parse_grid(a.grid);
  const CsvTable main_t = read_csv_file(a.data);
  const CsvTable extra_t = read_csv_file(a.extra);
  if (main_t.header != extra_t.header) throw InputError("main and extra files have different columns");

  const auto main_rows = row_digests(main_t.values);
  const auto extra_rows = row_digests(extra_t.values);
  const std::set<std::uint64_t> main_set(main_rows.begin(), main_rows.end());
  Index shared = 0;
  for (auto h : extra_rows) shared += main_set.count(h);
  if (shared > 0) {
    const std::string msg = std::to_string(shared) + " row(s) of '" + a.extra + "' also appear in '" +
                            a.data + "'; the extra sample must be independent";
    if (!a.allow_overlap) throw InputError(msg + " (pass --allow-overlap to proceed)");
    err << "warning: " << msg << '\n';
  }

  if (a.response.empty()) throw InputError("--response is required");
  const Index r = main_t.column(a.response);
  const RegressionBackend split_cols(r);
  const auto [x_main, y_main] = split_cols.design(main_t.values);
  const auto [x_extra, y_extra] = split_cols.design(extra_t.values);
  if (x_main.cols() < 1) throw InputError("no predictor columns");

  TuningOptions opt;
  opt.alpha = a.alpha;
  opt.splits = a.splits;
  const TuningOutcome outcome =
      select_lambda_tosi(x_main, y_main, x_extra, y_extra, grid, RngStream(seed, "tune"), opt);

  std::vector<std::string> names;
  for (Index j = 0; j < main_t.header.size(); ++j)
    if (j != r) names.push_back(main_t.header[j]);

  Json report;
  report["tool"] = "tosi";
  report["version"] = TOSI_VERSION;
  report["command"] = echo(args, a.common, seed);
  report["seed"] = seed;
  report["inputs"] = {{"main", digest_json(a.data, main_t)},
                      {"extra", digest_json(a.extra, extra_t)},
                      {"shared_rows", shared}};
  report["config"] = {{"response", a.response}, {"alpha", a.alpha}, {"splits", a.splits}, {"grid", grid}};
  Json res = tuning_outcome_json(outcome);
  Json selected = Json::array();
  for (Index j : outcome.support) selected.push_back(names[j]);
  res["support_names"] = std::move(selected);
  report["outcome"] = std::move(res);
  report["timing"] = {{"seconds", seconds_since(start)}, {"threads", max_threads()}};
  emit(report, a.common.out, out);
  return ExitCode::ok;
}

// ---------------------------------------------------------------- simulate

struct SimArgs {
  Common common;
  std::string experiment;
  std::optional<Index> n, p, s, q, extra;
  std::optional<double> rho, sigma_sq;
  Index reps = 500;
  double alpha = 0.05;
  std::vector<Index> splits;
  std::vector<std::string> gsets;
  bool no_by = false;
  std::string qq_out;
};

int cmd_simulate(const SimArgs& a, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(a.common);
  if (a.experiment == "tuning" || a.experiment == "exp1-tuning") {
    TuningExperimentConfig cfg;
    cfg.n = a.n.value_or(cfg.n);
    cfg.p = a.p.value_or(cfg.p);
    cfg.s = a.s.value_or(cfg.s);
    cfg.rho = a.rho.value_or(cfg.rho);
    cfg.extra = a.extra.value_or(cfg.extra);
    cfg.reps = a.reps;
    cfg.alpha = a.alpha;
    if (!a.splits.empty()) cfg.splits = a.splits.front();
    cfg.seed = seed;
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw InputError("--alpha must lie in (0, 1)");
    if (cfg.splits < 1) throw InputError("--L must be at least 1");
    emit(tuning_experiment_json(run_tuning_experiment(cfg)), a.common.out, out);
    return ExitCode::ok;
  }

  const auto exp = parse_experiment(a.experiment);
  if (!exp) throw InputError("unknown experiment '" + a.experiment + "'");
  SimConfig cfg;
  cfg.experiment = *exp;
  switch (*exp) {
    case Experiment::regression:
      cfg.splits = {1, 2, 5, 8};
      break;
    case Experiment::factor:
      cfg.n = 200;
      cfg.p = 150;
      cfg.s = 3 * a.p.value_or(150) / 4;
      cfg.splits = {1, 5, 8, 15, 20};
      break;
    case Experiment::mean:
      cfg.splits = {1, 8};
      break;
  }
  cfg.n = a.n.value_or(cfg.n);
  cfg.p = a.p.value_or(cfg.p);
  cfg.s = a.s.value_or(cfg.s);
  cfg.q = a.q.value_or(cfg.q);
  cfg.rho = a.rho.value_or(cfg.rho);
  cfg.sigma_sq = a.sigma_sq.value_or(cfg.sigma_sq);
  cfg.reps = a.reps;
  cfg.alpha = a.alpha;
  if (!a.splits.empty()) cfg.splits = a.splits;
  cfg.seed = seed;
  cfg.gsets = a.gsets;
  cfg.by_comparator = !a.no_by;
  cfg.keep_statistics = !a.qq_out.empty();
  validate(cfg);

  const SimTable table = run_size_power(cfg);
  emit(sim_table_json(table), a.common.out, out);
  if (!a.qq_out.empty()) emit(qq_json(table), a.qq_out, out);
  return ExitCode::ok;
}

}  // namespace

int env_threads() {
  const char* v = std::getenv("TOSI_THREADS");
  if (v == nullptr) return 0;
  int n = 0;
  const std::string_view s(v);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || ptr != s.data() + s.size() || n < 1) return 0;
  return n;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-directional simultaneous inference for high-dimensional models", "tosi"};
  app.require_subcommand(1);
  app.set_version_flag("--version", TOSI_VERSION);

  TestArgs ta;
  auto* test = app.add_subcommand("test", "Run ToMax/ToMin tests on a CSV data set");
  test->add_option("--data", ta.data, "CSV file with a header row")->required();
  test->add_option("--model", ta.model, "Estimator")
      ->required()
      ->check(CLI::IsMember({"mean", "regression", "factor"}));
  test->add_option("--set", ta.sets, "Index-set file (1-based, one per line); repeatable")->required();
  test->add_option("--mode", ta.mode, "Test direction")->check(CLI::IsMember({"tomax", "tomin", "both"}));
  test->add_option("--splits,-L", ta.splits, "Number of random splits")->check(CLI::PositiveNumber);
  test->add_option("--alpha", ta.alpha, "Level");
  test->add_option("--response", ta.response, "Response column name (regression)");
  test->add_option("--q", ta.q, "Number of factors (factor model)")->check(CLI::PositiveNumber);
  ta.markov_opt = test->add_option("--markov-r", ta.markov_r, "Add the Markov-rule diagnostic with this r");
  add_common(*test, ta.common);

  TuneArgs ua;
  auto* tune = app.add_subcommand("tune", "Choose a lasso penalty by testing the implied zero/nonzero sets");
  tune->add_option("--data", ua.data, "Main-sample CSV")->required();
  tune->add_option("--extra", ua.extra, "Independent sample used to fit the lasso path")->required();
  tune->add_option("--response", ua.response, "Response column name")->required();
  tune->add_option("--grid", ua.grid, "Penalties: comma list or min:max:count (geometric)")->required();
  tune->add_option("--alpha", ua.alpha, "Level");
  tune->add_option("--splits,-L", ua.splits, "Number of random splits")->check(CLI::PositiveNumber);
  tune->add_flag("--allow-overlap", ua.allow_overlap, "Proceed when the two files share rows");
  add_common(*tune, ua.common);

  SimArgs sa;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo size/power or tuning experiment");
  sim->add_option("experiment", sa.experiment, "regression (exp1), factor (exp2), mean or tuning")->required();
  sim->add_option("--n", sa.n, "Sample size");
  sim->add_option("--p", sa.p, "Dimension");
  sim->add_option("--s", sa.s, "Sparsity");
  sim->add_option("--q", sa.q, "Number of factors");
  sim->add_option("--rho", sa.rho, "Signal strength");
  sim->add_option("--sigma-sq", sa.sigma_sq, "Noise variance (factor)");
  sim->add_option("--extra", sa.extra, "Extra-sample size (tuning)");
  sim->add_option("--reps", sa.reps, "Replicates");
  sim->add_option("--alpha", sa.alpha, "Level");
  sim->add_option("--L", sa.splits, "Split count; repeatable");
  sim->add_option("--gset", sa.gsets, "Restrict to these G-set labels; repeatable");
  sim->add_flag("--no-by", sa.no_by, "Skip the Benjamini-Yekutieli comparator");
  sim->add_option("--qq-out", sa.qq_out, "Write single-split QQ data to this file");
  add_common(*sim, sa.common);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return ExitCode::ok;
    }
    err << "error: " << e.what() << '\n';
    return ExitCode::input_error;
  }

  Common* common = test->parsed() ? &ta.common : tune->parsed() ? &ua.common : &sa.common;
  const int threads = common->threads > 0 ? common->threads : env_threads();
  if (threads > 0) set_threads(threads);

  try {
    if (test->parsed()) return cmd_test(ta, args, out);
    if (tune->parsed()) return cmd_tune(ua, args, out, err);
    return cmd_simulate(sa, out);
  } catch (const SingularityError& e) {
    err << "numerical failure: " << e.what();
    if (e.index()) err << " (index " << *e.index() + 1 << ")";
    err << '\n';
    return ExitCode::numerical_failure;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return ExitCode::numerical_failure;
  } catch (const DegreesOfFreedomError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return ExitCode::numerical_failure;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return ExitCode::input_error;
  } catch (const DomainError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return ExitCode::input_error;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return ExitCode::numerical_failure;
  }
}

}  // namespace tosi::cli
