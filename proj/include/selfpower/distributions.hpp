#pragma once

// Special functions needed for the chi-squared and normality machinery.

namespace selfpower::stats {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
/// Series expansion below x = a + 1, Lentz continued fraction above.
double regularized_gamma_q(double a, double x);

/// Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x).
double regularized_gamma_p(double a, double x);

/// Upper tail of the chi-squared distribution: Q(dof/2, stat/2).
/// Throws std::domain_error for stat < 0 or dof == 0.
double chi_squared_sf(double stat, unsigned dof);

/// Standard normal CDF.
double normal_cdf(double z);

/// Inverse of the standard normal CDF for p in (0, 1). Acklam's rational
/// approximation followed by one Halley step; absolute error well below
/// 1e-9. Throws std::domain_error outside (0, 1).
double normal_quantile(double p);

}  // namespace selfpower::stats
