#include "tosi/numerics/chi2.hpp"

#include "tosi/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tosi {
namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxTerms = 100000;

// log(x^a e^-x / Gamma(a)), the common prefactor.
double log_prefactor(double a, double x) {
  return a * std::log(x) - x - std::lgamma(a);
}

// P(a, x) by the power series; good for x < a + 1.
double lower_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

// Q(a, x) by the modified Lentz continued fraction; good for x >= a + 1.
double upper_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw DomainError("gamma shape must be positive");
  if (!(x >= 0.0)) throw DomainError("gamma argument must be nonnegative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - lower_series(a, x);
  return upper_fraction(a, x);
}

double chi2_sf(double x, unsigned q) {
  if (q == 0) throw DomainError("chi-square degrees of freedom must be positive");
  if (std::isnan(x) || x < 0.0) throw DomainError("chi-square statistic must be nonnegative");
  // q = 2 is exactly exponential; keep it exact.
  if (q == 2) return std::exp(-0.5 * x);
  const double p = regularized_gamma_q(0.5 * q, 0.5 * x);
  return std::clamp(p, 0.0, 1.0);
}

double chi2_quantile(double prob, unsigned q) {
  if (q == 0) throw DomainError("chi-square degrees of freedom must be positive");
  if (!(prob >= 0.0 && prob < 1.0)) throw DomainError("quantile level must lie in [0, 1)");
  if (prob == 0.0) return 0.0;
  const double target = 1.0 - prob;
  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(q));
  while (chi2_sf(hi, q) > target) hi *= 2.0;
  // Bisection to machine resolution; sf is monotone so this always converges.
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_sf(mid, q) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace tosi
