#include "mlqe/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mlqe::special {

namespace {

constexpr double kEps = 1e-15;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 100000;

bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

// Σ x^n / (a (a+1) ... (a+n)); P(a,x) = e^{-x} x^a / Γ(a) * series.
double lower_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) return sum;
    }
    throw std::runtime_error("incomplete gamma series did not converge");
}

// Modified Lentz continued fraction; Γ(a,x) = e^{-x} x^a * cf.
double upper_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete gamma continued fraction did not converge");
}

void check_args(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0) || !std::isfinite(a))
        throw std::domain_error("incomplete gamma requires a > 0 and x >= 0");
}

}  // namespace

double digamma(double x) {
    if (std::isnan(x) || is_nonpositive_integer(x)) return std::numeric_limits<double>::quiet_NaN();
    if (x < 0.0) return digamma(1.0 - x) - kPi / std::tan(kPi * x);
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double tail =
        inv2 * (1.0 / 12 -
                inv2 * (1.0 / 120 -
                        inv2 * (1.0 / 252 -
                                inv2 * (1.0 / 240 -
                                        inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12.0))))));
    return result + std::log(x) - 0.5 * inv - tail;
}

double trigamma(double x) {
    if (std::isnan(x) || is_nonpositive_integer(x)) return std::numeric_limits<double>::quiet_NaN();
    if (x < 0.0) {
        const double s = std::sin(kPi * x);
        return -trigamma(1.0 - x) + kPi * kPi / (s * s);
    }
    double result = 0.0;
    while (x < 10.0) {
        result += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // 1/x + 1/(2x^2) + Σ B_{2k} / x^{2k+1}
    const double tail =
        inv * inv2 *
        (1.0 / 6 -
         inv2 * (1.0 / 30 -
                 inv2 * (1.0 / 42 - inv2 * (1.0 / 30 - inv2 * (5.0 / 66 - inv2 * (691.0 / 2730 - inv2 * 7.0 / 6))))));
    return result + inv + 0.5 * inv2 + tail;
}

double gamma_p(double a, double x) {
    check_args(a, x);
    if (x == 0.0) return 0.0;
    const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) return std::exp(log_prefactor) * lower_series(a, x);
    return 1.0 - std::exp(log_prefactor) * upper_fraction(a, x);
}

double gamma_q(double a, double x) {
    check_args(a, x);
    if (x == 0.0) return 1.0;
    const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) return 1.0 - std::exp(log_prefactor) * lower_series(a, x);
    return std::exp(log_prefactor) * upper_fraction(a, x);
}

double upper_gamma(double a, double x) {
    if (a == 0.0) return 0.0;
    check_args(a, x);
    if (x == 0.0) return std::tgamma(a);
    if (x < a + 1.0) return std::tgamma(a) - std::exp(-x + a * std::log(x)) * lower_series(a, x);
    return std::exp(-x + a * std::log(x)) * upper_fraction(a, x);
}

double upper_gamma_scaled(double a, double x) {
    if (a == 0.0) return 0.0;
    check_args(a, x);
    if (x == 0.0) return std::tgamma(a);
    if (x < a + 1.0) return std::exp(x) * std::tgamma(a) - std::exp(a * std::log(x)) * lower_series(a, x);
    return std::exp(a * std::log(x)) * upper_fraction(a, x);
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::round(c);
}

}  // namespace mlqe::special
