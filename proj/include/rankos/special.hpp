#pragma once

#include <cstddef>
#include <functional>

namespace rankos::special {

// P(chi^2_df > x), the upper tail of a chi-squared distribution, via the
// regularized incomplete gamma function. Absolute accuracy better than
// 1e-12 for df <= 500 (in practice near machine precision).
double chi2_tail(unsigned df, double x);

// Regularized incomplete gamma: lower P(a,x) and upper Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a,b) by continued fraction.
double incomplete_beta(double a, double b, double x);

// Student-t distribution function with k degrees of freedom.
double student_t_cdf(double x, double k);

// Chi-squared upper tail for large df via the Lugannani-Rice saddlepoint
// approximation; relative error O(1/df). Used only where df exceeds the
// range chi2_tail pins exactly.
double chi2_tail_saddlepoint(double df, double x);

// Standard normal CDF and its inverse. The quantile uses a rational
// approximation refined by one Halley step against erfc, accurate to a few
// ulps over (0,1).
double normal_cdf(double z);
double normal_quantile(double p);

// Adaptive Simpson quadrature on [a,b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10);

// Integral of f over the whole real line via the tan substitution.
double integrate_real_line(const std::function<double(double)>& f,
                           double tol = 1e-10);

inline constexpr double pi = 3.14159265358979323846;

}  // namespace rankos::special
