#pragma once

#include <functional>

namespace mlqe::quadrature {

struct Result {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_intervals = 4000;
};

/// Globally adaptive 15-point Gauss-Kronrod integration over [a, b].
/// Either limit may be infinite; infinite ranges are mapped onto a finite
/// interval before subdivision. Endpoints are never evaluated.
Result integrate(const std::function<double(double)>& f, double a, double b, const Options& options = {});

}  // namespace mlqe::quadrature
