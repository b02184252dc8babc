#include "mlqe/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mlqe/quadrature.hpp"
#include "mlqe/special.hpp"

namespace mlqe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonnegative(double x, const char* what) {
    if (!(x >= 0.0)) throw std::domain_error(std::string(what) + " must be non-negative");
}

// Common prefactor of the three weighted-moment tools:
// log of alpha^(r-1) beta^(s-r+1) r^(-z) Gamma(z), with z = 1 + zeta/alpha.
struct ToolTerms {
    double z;
    double log_scale;
    double log_shift;  // log(beta / r^(1/alpha))
};

ToolTerms tool_terms(double s, double r, const WeibullParams& theta) {
    const double a = theta.alpha;
    const double b = theta.beta;
    if (!(r > 0.0)) throw std::domain_error("weighted moment requires r > 0");
    const double zeta = s + (r - 1.0) * (a - 1.0);
    if (!(zeta > -a)) throw std::domain_error("weighted moment diverges: s + (r-1)(alpha-1) <= -alpha");
    const double z = 1.0 + zeta / a;
    const double log_r = std::log(r);
    const double log_scale = (r - 1.0) * std::log(a) + (s - r + 1.0) * std::log(b) - z * log_r + std::lgamma(z);
    return {z, log_scale, std::log(b) - log_r / a};
}

}  // namespace

WeibullParams::WeibullParams(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
    if (!(std::isfinite(alpha) && alpha > 0.0)) throw std::invalid_argument("Weibull shape must be finite and > 0");
    if (!(std::isfinite(beta) && beta > 0.0)) throw std::invalid_argument("Weibull scale must be finite and > 0");
}

UniformParams::UniformParams(double a_, double b_) : a(a_), b(b_) {
    if (!(std::isfinite(a) && std::isfinite(b) && a < b)) throw std::invalid_argument("uniform bounds need a < b");
}

BurrIIIParams::BurrIIIParams(double c_, double k_) : c(c_), k(k_) {
    if (!(std::isfinite(c) && c > 0.0 && std::isfinite(k) && k > 0.0))
        throw std::invalid_argument("BurrIII shapes must be finite and > 0");
}

double weibull_log_pdf(double x, const WeibullParams& theta) {
    require_nonnegative(x, "x");
    const double a = theta.alpha;
    if (x == 0.0) {
        if (a < 1.0) return kInf;
        if (a == 1.0) return -std::log(theta.beta);
        return -kInf;
    }
    const double l = std::log(x) - std::log(theta.beta);
    return std::log(a) - std::log(theta.beta) + (a - 1.0) * l - std::exp(a * l);
}

double weibull_pdf(double x, const WeibullParams& theta) { return std::exp(weibull_log_pdf(x, theta)); }

double weibull_cdf(double x, const WeibullParams& theta) {
    require_nonnegative(x, "x");
    return -std::expm1(-std::pow(x / theta.beta, theta.alpha));
}

double weibull_quantile(double u, const WeibullParams& theta) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("quantile requires 0 < u < 1");
    return theta.beta * std::pow(-std::log1p(-u), 1.0 / theta.alpha);
}

std::vector<double> weibull_sample(const WeibullParams& theta, std::size_t n, RandomStream& rng) {
    std::vector<double> out(n);
    for (auto& x : out) x = weibull_quantile(rng.uniform(), theta);
    return out;
}

double reliability(double t, const WeibullParams& theta) {
    require_nonnegative(t, "t");
    return std::exp(-std::pow(t / theta.beta, theta.alpha));
}

double hazard(double t, const WeibullParams& theta) {
    require_nonnegative(t, "t");
    if (t == 0.0 && theta.alpha < 1.0) throw std::domain_error("hazard is singular at 0 for alpha < 1");
    return theta.alpha / theta.beta * std::pow(t / theta.beta, theta.alpha - 1.0);
}

ShapeAnalysis shape_analysis(const WeibullParams& theta) {
    const double a = theta.alpha;
    const double b = theta.beta;
    ShapeAnalysis out;
    out.monotone_decreasing = a <= 1.0;
    if (a <= 1.0) return out;
    out.mode = b * std::pow((a - 1.0) / a, 1.0 / a);
    const double root = std::sqrt((a - 1.0) * (5.0 * a - 1.0));
    out.inflection_upper = b * std::pow((3.0 * (a - 1.0) + root) / (2.0 * a), 1.0 / a);
    if (a == 2.0) {
        out.inflection_lower = 0.0;
    } else if (a > 2.0) {
        out.inflection_lower = b * std::pow((3.0 * (a - 1.0) - root) / (2.0 * a), 1.0 / a);
    }
    return out;
}

double truncated_moment(double s, double t, const WeibullParams& theta) {
    require_nonnegative(s, "s");
    require_nonnegative(t, "t");
    // t^s e^{-w} + (s beta^s / alpha) Gamma(s/alpha, w) == beta^s Gamma(1 + s/alpha, w).
    const double w = std::pow(t / theta.beta, theta.alpha);
    return std::pow(theta.beta, s) * special::upper_gamma(1.0 + s / theta.alpha, w);
}

double residual_life_moment(int order, double t, const WeibullParams& theta) {
    if (order < 1) throw std::domain_error("residual life moment order must be >= 1");
    require_nonnegative(t, "t");
    const double w = std::pow(t / theta.beta, theta.alpha);
    double sum = 0.0;
    double largest = 0.0;
    for (int k = 0; k <= order; ++k) {
        const double term = special::binomial(order, k) * std::pow(-t, order - k) * std::pow(theta.beta, k) *
                            special::upper_gamma_scaled(1.0 + k / theta.alpha, w);
        sum += term;
        largest = std::max(largest, std::fabs(term));
    }
    if (std::fabs(sum) >= 1e-4 * largest) return sum;

    // Deep in the tail the alternating sum cancels. With x = beta (w + v)^(1/alpha),
    // E[(X - t)^n | X >= t] = integral over v > 0 of (x - t)^n e^(-v), and x - t
    // is formed without cancellation.
    const double t_root = theta.beta * std::pow(w, 1.0 / theta.alpha);
    auto integrand = [&](double v) {
        const double gap = t_root * std::expm1(std::log1p(v / w) / theta.alpha);
        return std::pow(gap, order) * std::exp(-v);
    };
    return quadrature::integrate(integrand, 0.0, kInf, {0.0, 1e-13, 4000}).value;
}

double weighted_moment(double s, double r, const WeibullParams& theta) {
    const ToolTerms tt = tool_terms(s, r, theta);
    return std::exp(tt.log_scale);
}

double weighted_log_moment(double s, double r, const WeibullParams& theta) {
    const ToolTerms tt = tool_terms(s, r, theta);
    return std::exp(tt.log_scale) * (tt.log_shift + special::digamma(tt.z) / theta.alpha);
}

double weighted_log2_moment(double s, double r, const WeibullParams& theta) {
    const ToolTerms tt = tool_terms(s, r, theta);
    const double a = theta.alpha;
    const double l = tt.log_shift;
    const double psi0 = special::digamma(tt.z);
    const double psi1 = special::trigamma(tt.z);
    return std::exp(tt.log_scale) * (l * l + 2.0 * l * psi0 / a + (psi0 * psi0 + psi1) / (a * a));
}

double raw_moment(double s, const WeibullParams& theta) {
    if (!(s > -theta.alpha)) throw std::domain_error("raw moment requires s > -alpha");
    return std::pow(theta.beta, s) * std::tgamma(1.0 + s / theta.alpha);
}

double tsallis_entropy(double q, const WeibullParams& theta) {
    if (q == 1.0) throw std::domain_error("Tsallis entropy requires q != 1");
    if (!(q > 0.0) || !(q * (theta.alpha - 1.0) > -1.0))
        throw std::domain_error("Tsallis entropy requires q > 0 and q(alpha-1) > -1");
    return (1.0 - weighted_moment(0.0, q, theta)) / (q - 1.0);
}

double quadratic_entropy(const WeibullParams& theta) {
    const double a = theta.alpha;
    if (!(a > 0.5)) throw std::domain_error("quadratic entropy requires alpha > 1/2");
    return std::log(theta.beta) - std::log(a) + (2.0 - 1.0 / a) * std::log(2.0) - std::lgamma(2.0 - 1.0 / a);
}

double shannon_entropy(const WeibullParams& theta) {
    const double a = theta.alpha;
    return 1.0 + std::log(theta.beta / a) + (1.0 - 1.0 / a) * special::kEulerGamma;
}

MgfResult mgf(double t, const WeibullParams& theta, int terms) {
    const double a = theta.alpha;
    const double b = theta.beta;
    if (t == 0.0) return {1.0, 0.0};
    if (a == 1.0) {
        if (!(std::fabs(t) < 1.0 / b)) throw std::domain_error("mgf requires |t| < 1/beta when alpha = 1");
        return {1.0 / (1.0 - b * t), 0.0};
    }
    if (a < 1.0) throw std::domain_error("mgf series is not available for alpha < 1");
    if (terms < 1) throw std::domain_error("mgf needs at least one term");

    // log|a_n| = n log|bt| + lgamma(1 + n/alpha) - lgamma(n + 1)
    const double log_bt = std::log(std::fabs(b * t));
    const double sign = t < 0.0 ? -1.0 : 1.0;
    auto log_term = [&](int n) { return n * log_bt + std::lgamma(1.0 + n / a) - std::lgamma(n + 1.0); };
    double sum = 0.0;
    for (int n = 0; n <= terms; ++n) sum += (n % 2 == 1 ? sign : 1.0) * std::exp(log_term(n));

    // The term ratio decreases eventually in n, so once it is below one the
    // tail is dominated by a geometric series.
    const double next = std::exp(log_term(terms + 1));
    const double ratio = std::exp(log_term(terms + 2) - log_term(terms + 1));
    const double bound = ratio < 1.0 ? next / (1.0 - ratio) : kInf;
    if (!(bound <= 1e-10))
        throw std::domain_error("mgf series remainder bound exceeds 1e-10; increase terms");
    return {sum, bound};
}

std::vector<double> uniform_sample(const UniformParams& params, std::size_t n, RandomStream& rng) {
    std::vector<double> out(n);
    for (auto& x : out) x = rng.uniform(params.a, params.b);
    return out;
}

double burr3_pdf(double x, const BurrIIIParams& p) {
    if (!(x > 0.0)) throw std::domain_error("BurrIII pdf requires x > 0");
    const double xc = std::pow(x, -p.c);
    return std::exp(std::log(p.c * p.k) - (p.c + 1.0) * std::log(x) - (p.k + 1.0) * std::log1p(xc));
}

double burr3_cdf(double x, const BurrIIIParams& p) {
    if (!(x > 0.0)) throw std::domain_error("BurrIII cdf requires x > 0");
    return std::exp(-p.k * std::log1p(std::pow(x, -p.c)));
}

double burr3_quantile(double u, const BurrIIIParams& p) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("quantile requires 0 < u < 1");
    return std::pow(std::expm1(-std::log(u) / p.k), -1.0 / p.c);
}

std::vector<double> burr3_sample(const BurrIIIParams& params, std::size_t n, RandomStream& rng) {
    std::vector<double> out(n);
    for (auto& x : out) x = burr3_quantile(rng.uniform(), params);
    return out;
}

}  // namespace mlqe
