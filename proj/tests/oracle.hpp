#pragma once

// Independent numerical oracles for the tests. Everything here is built on
// Boost.Math and restates the Weibull formulas locally instead of calling
// the library kernels.

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

inline double weibull_log_pdf(double x, double a, double b) {
    return std::log(a / b) + (a - 1.0) * std::log(x / b) - std::pow(x / b, a);
}

inline double weibull_pdf(double x, double a, double b) { return std::exp(weibull_log_pdf(x, a, b)); }

/// Integral over (lo, hi) of g(x) with x = b u^(1/a): the power singularity
/// of Weibull-type integrands at 0 moves to a tanh-sinh friendly form.
/// Pass hi = infinity for the full half line.
inline double weibull_integral(const std::function<double(double)>& g, double a, double b, double lo = 0.0,
                               double hi = INFINITY) {
    auto h = [&](double u) {
        if (!(u > 0.0)) return 0.0;
        const double x = b * std::pow(u, 1.0 / a);
        if (!(x > 0.0) || !std::isfinite(x)) return 0.0;
        const double jac = b / a * std::pow(u, 1.0 / a - 1.0);
        const double v = g(x) * jac;
        return std::isfinite(v) ? v : 0.0;
    };
    const double ulo = std::pow(lo / b, a);
    const double uhi = std::isinf(hi) ? INFINITY : std::pow(hi / b, a);
    const double split = std::max(ulo, std::min(1.0, uhi));
    double total = 0.0;
    if (split > ulo) {
        boost::math::quadrature::tanh_sinh<double> ts;
        total += ts.integrate(h, ulo, split);
    }
    if (uhi > split) {
        if (std::isinf(uhi)) {
            boost::math::quadrature::exp_sinh<double> es;
            total += es.integrate([&](double t) { return h(split + t); }, 0.0, INFINITY);
        } else {
            boost::math::quadrature::tanh_sinh<double> ts;
            total += ts.integrate(h, split, uhi);
        }
    }
    return total;
}

/// Same but integrating |g|, used as a magnitude scale for relative tests.
inline double weibull_abs_integral(const std::function<double(double)>& g, double a, double b) {
    return weibull_integral([&](double x) { return std::fabs(g(x)); }, a, b);
}

/// Relative error with a floor on the scale.
inline double rel_err(double got, double want, double scale = 0.0) {
    const double s = std::max({std::fabs(want), scale, 1e-300});
    return std::fabs(got - want) / s;
}

}  // namespace oracle

namespace oracle {

enum class Trend { ZERO, PLUS_INF, MINUS_INF, FINITE };

/// Classifies the limit of a function from two probes; `outer` is the one
/// nearer the limit point. Zero when the magnitude shrinks toward the limit,
/// divergent when it grows, finite when it is stable to 5%.
inline Trend classify_trend(double inner, double outer) {
    if (outer == 0.0) return Trend::ZERO;
    if (!std::isfinite(outer)) return outer > 0 ? Trend::PLUS_INF : Trend::MINUS_INF;
    const double r = std::fabs(outer) / std::fabs(inner);
    if (std::fabs(r - 1.0) < 0.05) return Trend::FINITE;
    if (r < 1.0) return Trend::ZERO;
    return outer > 0 ? Trend::PLUS_INF : Trend::MINUS_INF;
}

}  // namespace oracle
