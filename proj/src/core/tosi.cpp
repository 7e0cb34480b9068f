#include "tosi/core/tosi.hpp"

#include "tosi/error.hpp"
#include "tosi/numerics/chi2.hpp"
#include "tosi/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace tosi {

std::string_view to_string(Mode mode) { return mode == Mode::max ? "ToMax" : "ToMin"; }

Split make_split(Index n, const RngStream& stream, Index l) {
  if (n < 4) throw TooFewObservationsError("sample splitting needs at least 4 observations");
  RngEngine engine(stream.child("split", l));
  const auto perm = random_permutation(engine, n);
  const Index half = n / 2;
  Split s;
  s.first.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(half));
  s.second.assign(perm.begin() + static_cast<std::ptrdiff_t>(half), perm.end());
  std::sort(s.first.begin(), s.first.end());
  std::sort(s.second.begin(), s.second.end());
  return s;
}

SplitPlan make_split_plan(Index n, Index splits, const RngStream& stream) {
  if (n < 4) throw TooFewObservationsError("sample splitting needs at least 4 observations");
  if (splits < 1) throw DomainError("number of splits must be at least 1");
  SplitPlan plan;
  plan.n = n;
  plan.splits.reserve(splits);
  for (Index l = 0; l < splits; ++l) plan.splits.push_back(make_split(n, stream, l));
  return plan;
}

bool is_partition(const Split& split, Index n) {
  if (split.first.size() + split.second.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (const auto* half : {&split.first, &split.second})
    for (Index i : *half) {
      if (i >= n || seen[i]) return false;
      seen[i] = 1;
    }
  return true;
}

Index stage1_select(const EstimateSet& est, Mode mode) {
  if (est.empty()) throw DomainError("stage I selection over an empty index set");
  Index best = est.entries.front().index;
  double best_norm = whitened_norm(est.entries.front().sigma, est.entries.front().theta);
  for (std::size_t k = 1; k < est.entries.size(); ++k) {
    const auto& e = est.entries[k];
    const double norm = whitened_norm(e.sigma, e.theta);
    const bool better = mode == Mode::max ? norm > best_norm : norm < best_norm;
    if (better || (norm == best_norm && e.index < best)) {
      best = e.index;
      best_norm = norm;
    }
  }
  return best;
}

double wald_stat(const Vector& theta, const SpdMatrix& sigma, Index n_bar) {
  if (n_bar < 1) throw DomainError("wald_stat: n_bar must be at least 1");
  const double w = whitened_norm(sigma, theta);
  return static_cast<double>(n_bar) * w * w;
}

namespace {

TestResult stage2_test(Mode mode, Index j, const Estimate& est, Index q, Index n_bar) {
  TestResult r;
  r.mode = mode;
  r.selected_index = j;
  r.q = q;
  r.n_bar = n_bar;
  try {
    r.statistic = wald_stat(est.theta, est.sigma, n_bar);
  } catch (const SingularityError& e) {
    throw SingularityError(e.what(), j);
  }
  r.p_value = chi2_sf(r.statistic, static_cast<unsigned>(q));
  return r;
}

}  // namespace

TestResult two_stage_test(const FittedSample& stage1, const FittedSample& stage2,
                          const IndexSet& g, Mode mode) {
  if (g.empty()) throw DomainError("TOSI test over an empty index set");
  const Index j = stage1_select(stage1.estimates(g), mode);
  return stage2_test(mode, j, stage2.estimate(j), stage2.q(), stage2.n_used());
}

TestResult tosi_single(const DataMatrix& data, const IndexSet& g,
                       const EstimatorBackend& backend, Mode mode, const Split& split) {
  if (!is_partition(split, data.rows())) throw DomainError("split is not a partition of the rows");
  const Index p = backend.parameter_count(data);
  for (Index j : g)
    if (j >= p) throw DomainError("set index exceeds parameter count");
  const auto first = backend.fit(data, split.first);
  const auto second = backend.fit(data, split.second);
  return two_stage_test(*first, *second, g, mode);
}

namespace {

void check_probabilities(std::span<const double> p) {
  for (double v : p)
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("p-values must lie in [0, 1]");
}

std::vector<std::size_t> ascending_order(std::span<const double> p) {
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  return order;
}

}  // namespace

std::vector<double> holm_adjust(std::span<const double> p) {
  check_probabilities(p);
  const std::size_t m = p.size();
  const auto order = ascending_order(p);
  std::vector<double> adj(m);
  double running = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double scaled = std::min(1.0, static_cast<double>(m - k) * p[order[k]]);
    running = std::max(running, scaled);
    adj[order[k]] = running;
  }
  return adj;
}

std::vector<double> by_adjust(std::span<const double> p) {
  check_probabilities(p);
  const std::size_t m = p.size();
  double harmonic = 0.0;
  for (std::size_t i = 1; i <= m; ++i) harmonic += 1.0 / static_cast<double>(i);
  const auto order = ascending_order(p);
  std::vector<double> adj(m);
  double running = 1.0;
  for (std::size_t k = m; k-- > 0;) {
    const double scaled =
        harmonic * static_cast<double>(m) / static_cast<double>(k + 1) * p[order[k]];
    running = std::min(running, std::min(1.0, scaled));
    adj[order[k]] = running;
  }
  return adj;
}

MultiSplitResult aggregate_splits(std::vector<TestResult> splits, double alpha,
                                  std::optional<double> markov_r) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (splits.empty()) throw DomainError("no splits to aggregate");
  MultiSplitResult out;
  out.mode = splits.front().mode;
  out.alpha = alpha;
  out.raw_p.reserve(splits.size());
  for (const auto& s : splits) out.raw_p.push_back(s.p_value);
  out.adjusted_p = holm_adjust(out.raw_p);
  out.combined_p = *std::min_element(out.adjusted_p.begin(), out.adjusted_p.end());
  out.k_rejections = static_cast<Index>(
      std::count_if(out.adjusted_p.begin(), out.adjusted_p.end(), [&](double v) { return v < alpha; }));
  out.reject = out.k_rejections >= 1;
  if (markov_r) {
    const double r = *markov_r;
    if (!(r > 0.0 && r <= 1.0)) throw DomainError("Markov rule fraction r must lie in (0, 1]");
    MarkovDiagnostic d;
    d.r = r;
    d.gamma = alpha * r;
    d.required = static_cast<Index>(std::ceil(r * static_cast<double>(splits.size()) - 1e-12));
    d.required = std::max<Index>(d.required, 1);
    d.count = static_cast<Index>(
        std::count_if(out.raw_p.begin(), out.raw_p.end(), [&](double v) { return v <= d.gamma; }));
    d.reject = d.count >= d.required;
    out.markov = d;
  }
  out.splits = std::move(splits);
  return out;
}

std::vector<std::vector<TestResult>> run_split_tests(const DataMatrix& data,
                                                     const EstimatorBackend& backend,
                                                     const SplitPlan& plan,
                                                     std::span<const TestRequest> requests,
                                                     Execution exec) {
  const Index p = backend.parameter_count(data);
  std::vector<IndexSet> sets;
  for (const auto& req : requests) {
    if (req.g.empty()) throw DomainError("TOSI test over an empty index set");
    for (Index j : req.g)
      if (j >= p) throw DomainError("set index exceeds parameter count");
    sets.push_back(req.g);
  }
  const IndexSet all = set_union(sets);
  const std::size_t splits = plan.splits.size();
  std::vector<std::vector<TestResult>> out(requests.size(), std::vector<TestResult>(splits));

  for_each_index(exec, splits, [&](std::size_t l) {
    const Split& split = plan.splits[l];
    const auto first = backend.fit(data, split.first);
    const auto second = backend.fit(data, split.second);
    const EstimateSet stage1 = first->estimates(all);
    std::map<Index, Estimate> stage2;
    for (std::size_t r = 0; r < requests.size(); ++r) {
      const Index j = stage1_select(stage1.restrict_to(requests[r].g), requests[r].mode);
      auto it = stage2.find(j);
      if (it == stage2.end()) it = stage2.emplace(j, second->estimate(j)).first;
      const TestResult res =
          stage2_test(requests[r].mode, j, it->second, second->q(), second->n_used());
      out[r][l] = res;
    }
  });
  return out;
}

MultiSplitResult tosi_multi(const DataMatrix& data, const IndexSet& g,
                            const EstimatorBackend& backend, Mode mode, Index splits,
                            double alpha, const RngStream& stream, Execution exec,
                            std::optional<double> markov_r) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const SplitPlan plan = make_split_plan(data.rows(), splits, stream);
  const TestRequest req{g, mode};
  auto results = run_split_tests(data, backend, plan, std::span<const TestRequest>(&req, 1), exec);
  return aggregate_splits(std::move(results.front()), alpha, markov_r);
}

}  // namespace tosi
