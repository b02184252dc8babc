#include "mlqe/information.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mlqe/quadrature.hpp"
#include "mlqe/special.hpp"

namespace mlqe {

namespace {

constexpr double kClosedFormTolerance = 1e-5;

void require_q(const WeibullParams& theta, double q) {
    if (!(q > 0.0 && q < 2.0)) throw std::domain_error("q_fisher requires 0 < q < 2 so that r = 2 - q > 0");
    const double zeta = (1.0 - q) * (theta.alpha - 1.0);
    if (!(zeta > -theta.alpha))
        throw std::domain_error("q_fisher: element _qE_aa, l = 0 term: Gamma argument 1 + (1-q)(alpha-1)/alpha <= 0");
}

// E[X^l log^k X f^(1-q)] for k = 0, 1, 2.
struct Tools {
    const WeibullParams& theta;
    double r;
    double m(double l) const { return weighted_moment(l, r, theta); }
    double lm(double l) const { return weighted_log_moment(l, r, theta); }
    double llm(double l) const { return weighted_log2_moment(l, r, theta); }
};

double rel_gap(double a, double b, double scale) {
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), scale});
}

}  // namespace

InfoMatrix expected_hessian(const WeibullParams& theta, std::size_t n) {
    if (n < 1) throw std::domain_error("n must be >= 1");
    const double a = theta.alpha;
    const double b = theta.beta;
    const double g1 = 1.0 - special::kEulerGamma;
    const double nn = static_cast<double>(n);
    InfoMatrix m;
    m.e_aa = -nn * (special::kPi * special::kPi / 6.0 + g1 * g1) / (a * a);
    m.e_ab = nn * g1 / b;
    m.e_bb = -nn * a * a / (b * b);
    m.n = n;
    m.convention = InfoConvention::EXPECTED_HESSIAN;
    return m;
}

InfoMatrix fisher(const WeibullParams& theta, std::size_t n) {
    InfoMatrix m = expected_hessian(theta, n);
    m.e_aa = -m.e_aa;
    m.e_ab = -m.e_ab;
    m.e_bb = -m.e_bb;
    m.convention = InfoConvention::FISHER;
    if (!(m.e_aa > 0.0 && m.det() > 0.0)) throw std::domain_error("Fisher matrix is not positive definite");
    return m;
}

InfoMatrix q_fisher_quadrature(const WeibullParams& theta, double q, std::size_t n) {
    require_q(theta, q);
    const double a = theta.alpha;
    const double b = theta.beta;
    // Substituting u = (x/beta)^alpha: f^(2-q) dx = (alpha/beta)^(1-q) u^p e^{-(2-q)u} du
    // with p = (1-q)(alpha-1)/alpha, and Z_alpha = 1/alpha + (1-u) log(u)/alpha,
    // Z_beta = (alpha/beta)(u - 1).
    const double p = (1.0 - q) * (a - 1.0) / a;
    const double scale = std::pow(a / b, 1.0 - q);
    const double r = 2.0 - q;
    auto integrate_element = [&](int which) {
        auto g = [&](double u) {
            if (!(u > 0.0)) return 0.0;
            const double za = 1.0 / a + (1.0 - u) * std::log(u) / a;
            const double zb = a / b * (u - 1.0);
            const double zz = which == 0 ? za * za : which == 1 ? za * zb : zb * zb;
            return zz * std::exp(-r * u);
        };
        // On (0, 1) put u = v^m, m = 1/(p+1), which removes the u^p factor.
        const double m = 1.0 / (p + 1.0);
        const auto head = quadrature::integrate([&](double v) { return m * g(std::pow(v, m)); }, 0.0, 1.0);
        const auto tail = quadrature::integrate([&](double u) { return std::pow(u, p) * g(u); }, 1.0,
                                                std::numeric_limits<double>::infinity());
        return scale * (head.value + tail.value);
    };
    const double nn = static_cast<double>(n);
    InfoMatrix out;
    out.e_aa = nn * integrate_element(0);
    out.e_ab = nn * integrate_element(1);
    out.e_bb = nn * integrate_element(2);
    out.n = n;
    out.convention = InfoConvention::FISHER;
    out.used_quadrature = true;
    return out;
}

InfoMatrix q_fisher(const WeibullParams& theta, double q, std::size_t n) {
    require_q(theta, q);
    const double a = theta.alpha;
    const double b = theta.beta;
    const double lb = std::log(b);
    const double A = 1.0 / a - lb;
    const double ba = std::pow(b, -a);
    const double b2a = ba * ba;
    const Tools t{theta, 2.0 - q};

    // Z_alpha = A + log x + (log b / b^a) x^a - (1 / b^a) x^a log x
    const double e0 = A * A, ea = 2.0 * A * lb * ba, e2a = lb * lb * b2a;
    const double a0 = 2.0 * A, aa = -2.0 * ba * (A - lb), a2a = -2.0 * lb * b2a;
    const double t0 = 1.0, ta = -2.0 * ba, t2a = b2a;
    const double qaa = e0 * t.m(0) + ea * t.m(a) + e2a * t.m(2 * a) + a0 * t.lm(0) + aa * t.lm(a) +
                       a2a * t.lm(2 * a) + t0 * t.llm(0) + ta * t.llm(a) + t2a * t.llm(2 * a);

    // Z_beta = -a/b + (a / b^(a+1)) x^a
    const double b0 = (a / b) * (a / b);
    const double bA = -2.0 * a * a * std::pow(b, -(a + 2.0));
    const double b2A = a * a * std::pow(b, -2.0 * (a + 1.0));
    const double qbb = b0 * t.m(0) + bA * t.m(a) + b2A * t.m(2 * a);

    const double c0 = -a * A / b;
    const double cA = a * A / std::pow(b, a + 1.0) - a * lb / std::pow(b, a + 1.0);
    const double c2A = a * lb / std::pow(b, 2.0 * a + 1.0);
    const double d0 = -a / b;
    const double dA = 2.0 * a / std::pow(b, a + 1.0);
    const double d2A = -a / std::pow(b, 2.0 * a + 1.0);
    const double qab = c0 * t.m(0) + cA * t.m(a) + c2A * t.m(2 * a) + d0 * t.lm(0) + dA * t.lm(a) + d2A * t.lm(2 * a);

    const double nn = static_cast<double>(n);
    InfoMatrix out;
    out.e_aa = nn * qaa;
    out.e_ab = nn * qab;
    out.e_bb = nn * qbb;
    out.n = n;
    out.convention = InfoConvention::FISHER;

    // Cross-check against quadrature; keep the quadrature values on mismatch.
    const InfoMatrix check = q_fisher_quadrature(theta, q, n);
    const double scale = std::sqrt(std::fabs(check.e_aa * check.e_bb));
    const double gap = std::max({rel_gap(out.e_aa, check.e_aa, 0.0), rel_gap(out.e_ab, check.e_ab, scale),
                                 rel_gap(out.e_bb, check.e_bb, 0.0)});
    out.closed_form_discrepancy = gap;
    if (!(gap <= kClosedFormTolerance)) {
        InfoMatrix fallback = check;
        fallback.closed_form_discrepancy = gap;
        return fallback;
    }
    return out;
}

ConsistencyReport consistency_conditions(const WeibullParams& theta) {
    const double a = theta.alpha;
    const double b = theta.beta;
    if (!(b > 1.0)) throw std::domain_error("consistency conditions require beta > 1");
    ConsistencyReport rep;

    // (1) E[d/d beta log f] = -a/b + a/b^(a+1) E[X^a]
    const double r1 = -a / b + a / std::pow(b, a + 1.0) * raw_moment(a, theta);
    rep.mean_score_zero = {std::fabs(r1) < 1e-8, r1, "E[d log f / d beta]"};

    // (2) E[d^2/d beta^2 log f] = a/b^2 - a(a+1)/b^(a+2) E[X^a]
    const double e2 = a / (b * b) - a * (a + 1.0) / std::pow(b, a + 2.0) * raw_moment(a, theta);
    const double target = -a * a / (b * b);
    const double r2 = e2 - target;
    rep.curvature_negative = {std::fabs(r2) < 1e-8 * std::max(1.0, std::fabs(target)) && e2 < 0.0, r2,
                              "E[d^2 log f / d beta^2] + alpha^2/beta^2"};

    // (3) |d^3/d beta^3 log f| <= H(x) = 2a + a(a+1)(a+2) x^a for beta > 1, E[H] = M(beta).
    const double c3 = a * (a + 1.0) * (a + 2.0);
    rep.m_beta = 2.0 * a + c3 * std::pow(b, a);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 200; ++i) {
        const double u = (i + 0.5) / 200.0;
        const double x = weibull_quantile(u, theta);
        const double third = -2.0 * a / (b * b * b) + c3 * std::pow(x, a) / std::pow(b, a + 3.0);
        const double h = 2.0 * a + c3 * std::pow(x, a);
        worst = std::max(worst, std::fabs(third) - h);
    }
    rep.third_derivative = {std::isfinite(rep.m_beta) && worst <= 0.0, worst, "max(|d^3 log f| - H(x)) over grid"};
    return rep;
}

}  // namespace mlqe
