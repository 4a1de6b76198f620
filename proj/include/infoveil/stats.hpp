#pragma once

namespace infoveil {

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation (Lentz), accurate to ~1e-14 for moderate a, b.
double incomplete_beta(double a, double b, double x);

/// Student-t cumulative distribution with nu degrees of freedom.
double student_t_cdf(double t, double nu);

/// Student-t quantile: smallest t with CDF(t) >= p, accurate to 1e-10.
double student_t_quantile(double p, double nu);

/// Two-sided p-value for a t statistic.
double student_t_pvalue(double t, double nu);

/// Upper-tail probability P(F > f) for an F(d1, d2) statistic.
double f_survival(double f, double d1, double d2);

/// Standard normal quantile, Wichura's AS241 rational approximation
/// (absolute error below 1e-15 over (0, 1)).
double normal_quantile(double p);

/// Standard normal CDF.
double normal_cdf(double x);

} // namespace infoveil
