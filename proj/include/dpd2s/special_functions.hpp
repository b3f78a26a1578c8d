#pragma once

namespace dpd2s {

/// Complementary error function.
double erfc(double x);

/// Standard normal distribution function.
double std_normal_cdf(double x);

/// Upper tail of the standard normal, accurate far into the tail.
double std_normal_sf(double x);

/// Standard normal quantile; p in (0, 1).
double std_normal_quantile(double p);

/// I_x(a, b), the regularized incomplete beta function. a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

/// P(chi^2_1 > s) = erfc(sqrt(s / 2)).
double chi2_1_sf(double s);

/// Upper alpha critical value of chi^2 with one degree of freedom.
double chi2_1_critical(double alpha);

/// Two-sided p-value P(|T| > t) for Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

/// Limiting Kolmogorov distribution tail P(K > lambda).
double kolmogorov_sf(double lambda);

}  // namespace dpd2s
