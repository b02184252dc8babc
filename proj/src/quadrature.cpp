#include "mlqe/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace mlqe::quadrature {

namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kGauss = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& g, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = g(center);
    double kronrod = fc * kKronrod[7];
    double gauss = fc * kGauss[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kNodes[j];
        const double sum = g(center - dx) + g(center + dx);
        kronrod += kKronrod[j] * sum;
        if (j % 2 == 1) gauss += kGauss[j / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {lo, hi, kronrod, std::fabs(kronrod - gauss)};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, const Options& options) {
    if (std::isnan(a) || std::isnan(b)) throw std::invalid_argument("integration limits must not be NaN");
    if (a == b) return {};
    if (a > b) {
        Result r = integrate(f, b, a, options);
        r.value = -r.value;
        return r;
    }

    // Map infinite ranges onto (-1, 1) or [0, 1).
    std::function<double(double)> g;
    double lo = a;
    double hi = b;
    const bool lower_inf = std::isinf(a);
    const bool upper_inf = std::isinf(b);
    if (lower_inf && upper_inf) {
        g = [&f](double t) {
            const double d = 1.0 - t * t;
            return f(t / d) * (1.0 + t * t) / (d * d);
        };
        lo = -1.0;
        hi = 1.0;
    } else if (upper_inf) {
        g = [&f, a](double t) {
            const double d = 1.0 - t;
            return f(a + t / d) / (d * d);
        };
        lo = 0.0;
        hi = 1.0;
    } else if (lower_inf) {
        g = [&f, b](double t) {
            const double d = 1.0 - t;
            return f(b - t / d) / (d * d);
        };
        lo = 0.0;
        hi = 1.0;
    } else {
        g = f;
    }

    std::priority_queue<Segment> queue;
    Segment first = gauss_kronrod(g, lo, hi);
    double total = first.value;
    double total_error = first.error;
    queue.push(first);
    int intervals = 1;

    while (total_error > std::max(options.abs_tol, options.rel_tol * std::fabs(total)) &&
           intervals < options.max_intervals) {
        const Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (mid <= worst.lo || mid >= worst.hi) {
            queue.push(worst);
            break;
        }
        const Segment left = gauss_kronrod(g, worst.lo, mid);
        const Segment right = gauss_kronrod(g, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++intervals;
    }

    // Re-sum to shed drift from the incremental updates.
    double value = 0.0;
    double error = 0.0;
    while (!queue.empty()) {
        value += queue.top().value;
        error += queue.top().error;
        queue.pop();
    }
    if (!std::isfinite(value)) throw std::domain_error("integrand produced a non-finite value");
    return {value, error, intervals};
}

}  // namespace mlqe::quadrature
