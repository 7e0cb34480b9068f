#include "report.hpp"

#include <cstdio>

namespace tosi::cli {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json index_set_json(const IndexSet& g) {
  Json a = Json::array();
  for (Index j : g) a.push_back(j + 1);
  return a;
}

Json test_result_json(const TestResult& r, const std::vector<std::string>& names) {
  Json j;
  j["mode"] = std::string(to_string(r.mode));
  j["selected_index"] = r.selected_index + 1;
  if (r.selected_index < names.size()) j["selected_name"] = names[r.selected_index];
  j["statistic"] = r.statistic;
  j["p_value"] = r.p_value;
  j["q"] = r.q;
  j["n_bar"] = r.n_bar;
  return j;
}

Json multi_split_json(const MultiSplitResult& r, const std::vector<std::string>& names) {
  Json j;
  j["mode"] = std::string(to_string(r.mode));
  j["alpha"] = r.alpha;
  j["L"] = r.splits.size();
  j["combined_p"] = r.combined_p;
  j["reject"] = r.reject;
  j["k_rejections"] = r.k_rejections;
  j["raw_p"] = r.raw_p;
  j["adjusted_p"] = r.adjusted_p;
  Json splits = Json::array();
  for (const auto& s : r.splits) splits.push_back(test_result_json(s, names));
  j["splits"] = std::move(splits);
  if (r.markov) {
    j["markov"] = {{"r", r.markov->r},
                   {"gamma", r.markov->gamma},
                   {"required", r.markov->required},
                   {"count", r.markov->count},
                   {"reject", r.markov->reject}};
  }
  return j;
}

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json tuning_outcome_json(const TuningOutcome& o) {
  Json j;
  j["status"] = std::string(to_string(o.status));
  j["lambda_star"] = optional_number(o.lambda_star);
  j["support"] = index_set_json(o.support);
  j["monotone"] = o.monotone;
  Json trace = Json::array();
  for (const auto& s : o.trace) {
    Json step;
    step["lambda"] = s.lambda;
    step["zero_count"] = s.zero_count;
    step["nonzero_count"] = s.nonzero_count;
    step["p_max"] = optional_number(s.p_max);
    step["p_min"] = optional_number(s.p_min);
    step["max_accepts"] = s.max_accepts;
    step["min_rejects"] = s.min_rejects;
    step["support"] = index_set_json(s.support);
    if (!s.note.empty()) step["note"] = s.note;
    trace.push_back(std::move(step));
  }
  j["trace"] = std::move(trace);
  return j;
}

Json sim_table_json(const SimTable& t) {
  const SimConfig& c = t.config;
  Json config;
  config["n"] = c.n;
  config["p"] = c.p;
  config["s"] = c.s;
  config["q"] = c.q;
  config["rho"] = c.rho;
  config["sigma_sq"] = c.sigma_sq;
  config["L"] = c.splits;
  config["alpha"] = c.alpha;
  config["reps"] = c.reps;
  config["seed"] = c.seed;
  config["gsets"] = c.gsets;
  config["by_comparator"] = c.by_comparator;
  if (c.experiment == Experiment::regression)
    config["node_constant"] = c.debias.node_constant;

  Json j;
  j["experiment"] = std::string(to_string(c.experiment));
  j["config"] = std::move(config);
  j["completed"] = t.completed;
  j["failed"] = t.failed;
  j["failures"] = t.failure_messages;
  Json cells = Json::array();
  for (const auto& cell : t.cells) {
    cells.push_back({{"gset", cell.gset},
                     {"method", cell.method},
                     {"L", cell.splits},
                     {"n", cell.n},
                     {"rate", cell.rate},
                     {"se", cell.se},
                     {"reps", cell.reps},
                     {"rejections", cell.rejections},
                     {"null", cell.null_hypothesis}});
  }
  j["cells"] = std::move(cells);
  return j;
}

Json qq_json(const SimTable& t) {
  const Index q = t.config.experiment == Experiment::factor ? t.config.q : 1;
  Json series = Json::array();
  for (const auto& [label, stats] : t.statistics) {
    Json s;
    s["gset"] = label;
    bool null_holds = false;
    std::string method;
    for (const auto& cell : t.cells) {
      if (cell.gset == label && cell.method != "BY") {
        null_holds = cell.null_hypothesis;
        method = cell.method;
        break;
      }
    }
    s["method"] = method;
    s["null"] = null_holds;
    Json pairs = Json::array();
    for (const auto& [theory, empirical] : qq_data(stats, q)) pairs.push_back({theory, empirical});
    s["pairs"] = std::move(pairs);
    series.push_back(std::move(s));
  }
  Json j;
  j["experiment"] = std::string(to_string(t.config.experiment));
  j["seed"] = t.config.seed;
  j["q"] = q;
  j["series"] = std::move(series);
  return j;
}

Json tuning_experiment_json(const TuningExperimentResult& r) {
  const TuningExperimentConfig& c = r.config;
  auto stats = [](const SelectionStats& s) { return Json{{"nv", s.nv}, {"in", s.in}, {"cs", s.cs}}; };
  Json j;
  j["experiment"] = "tuning";
  j["config"] = {{"n", c.n},
                 {"p", c.p},
                 {"s", c.s},
                 {"rho", c.rho},
                 {"extra", c.extra},
                 {"L", c.splits},
                 {"alpha", c.alpha},
                 {"reps", c.reps},
                 {"seed", c.seed},
                 {"grid_size", c.grid_size},
                 {"grid_ratio", c.grid_ratio},
                 {"cv_folds", c.cv_folds}};
  j["completed"] = r.completed;
  j["failed"] = r.failed;
  j["tosi"] = stats(r.tosi);
  j["cv"] = stats(r.cv);
  j["status_counts"] = {{"found", r.found},
                        {"boundary_low", r.boundary_low},
                        {"boundary_high", r.boundary_high}};
  j["path_contains_truth"] = r.path_contains_truth;
  return j;
}

}  // namespace tosi::cli
