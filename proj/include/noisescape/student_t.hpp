#pragma once

namespace noisescape {

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
///
/// Evaluated with the continued fraction for I_x(a, b) (modified Lentz
/// iteration, relative tolerance 1e-15, at most 10000 terms), switching to
/// 1 - I_{1-x}(b, a) when x > (a + 1) / (a + b + 2) so the fraction always
/// converges quickly. The prefactor x^a (1-x)^b / (a B(a, b)) is formed in
/// log space via std::lgamma. Accuracy is ~1e-14 over the ranges used here.
double regularized_incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `dof` > 0 degrees of freedom.
double student_t_cdf(double t, double dof);

/// P(|T| >= |t|), the two-sided tail probability.
double student_t_two_sided_p(double t, double dof);

/// t such that P(T <= t) = p, by bracketing and bisection on the CDF.
double student_t_quantile(double p, double dof);

}  // namespace noisescape
