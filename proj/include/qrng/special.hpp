#pragma once

namespace qrng::special {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double lower_regularized_gamma(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double upper_regularized_gamma(double a, double x);

/// Chi-square survival function: Q(dof/2, statistic/2).
double chi_square_sf(double statistic, double dof);

/// Upper tail of the Kuiper statistic distribution,
/// 2 * sum_j (4 j^2 lambda^2 - 1) exp(-2 j^2 lambda^2), clamped to [0, 1].
/// Below lambda = 0.4 the series is useless and the tail is 1 to double
/// precision, so 1 is returned.
double kuiper_tail(double lambda);

}  // namespace qrng::special
