#pragma once

// Special-function kernels used by the closed-form Weibull moments and the
// information matrices.

namespace mlqe::special {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Digamma Ψ⁽⁰⁾(x). Recurrence up to x >= 10 followed by the asymptotic
/// series; reflection for negative non-integer arguments.
double digamma(double x);

/// Trigamma Ψ⁽¹⁾(x), same scheme as digamma.
double trigamma(double x);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), a > 0, x >= 0.
double gamma_q(double a, double x);

/// Upper incomplete gamma Γ(a, x). Γ(0, x) is defined as 0.
double upper_gamma(double a, double x);

/// e^x Γ(a, x) evaluated without forming e^x or Γ(a, x) separately, so it
/// stays finite for large x.
double upper_gamma_scaled(double a, double x);

/// Binomial coefficient C(n, k) as a double.
double binomial(int n, int k);

}  // namespace mlqe::special
