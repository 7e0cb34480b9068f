#pragma once

namespace tosi {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
/// Series for x < a + 1, Lentz continued fraction otherwise.
double regularized_gamma_q(double a, double x);

/// P(chi^2(q) > x). Throws DomainError for x < 0 or q == 0.
double chi2_sf(double x, unsigned q);

/// Lower-tail quantile: the x with P(chi^2(q) <= x) = prob, prob in [0, 1).
double chi2_quantile(double prob, unsigned q);

}  // namespace tosi
