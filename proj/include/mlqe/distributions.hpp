#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mlqe/random.hpp"

namespace mlqe {

/// Two-parameter Weibull, shape alpha and scale beta.
struct WeibullParams {
    double alpha;
    double beta;

    WeibullParams(double alpha, double beta);
};

struct UniformParams {
    double a;
    double b;

    UniformParams(double a, double b);
};

/// Burr type III with cdf (1 + x^-c)^-k.
struct BurrIIIParams {
    double c;
    double k;

    BurrIIIParams(double c, double k);
};

struct ShapeAnalysis {
    std::optional<double> mode;
    std::optional<double> inflection_lower;
    std::optional<double> inflection_upper;
    bool monotone_decreasing = false;
};

struct MgfResult {
    double value;
    double remainder_bound;
};

// Weibull density and related functions. All throw std::domain_error for
// arguments outside their support.

double weibull_pdf(double x, const WeibullParams& theta);
double weibull_log_pdf(double x, const WeibullParams& theta);
double weibull_cdf(double x, const WeibullParams& theta);
double weibull_quantile(double u, const WeibullParams& theta);
std::vector<double> weibull_sample(const WeibullParams& theta, std::size_t n, RandomStream& rng);

double reliability(double t, const WeibullParams& theta);
double hazard(double t, const WeibullParams& theta);
ShapeAnalysis shape_analysis(const WeibullParams& theta);

/// E[1{X >= t} X^s].
double truncated_moment(double s, double t, const WeibullParams& theta);

/// E[(X - t)^order | X >= t].
double residual_life_moment(int order, double t, const WeibullParams& theta);

/// E[X^s f(X)^(r-1)]; requires r > 0 and s + (r-1)(alpha-1) > -alpha.
double weighted_moment(double s, double r, const WeibullParams& theta);

/// E[X^s log(X) f(X)^(r-1)].
double weighted_log_moment(double s, double r, const WeibullParams& theta);

/// E[X^s log(X)^2 f(X)^(r-1)].
double weighted_log2_moment(double s, double r, const WeibullParams& theta);

/// E[X^s], s > -alpha.
double raw_moment(double s, const WeibullParams& theta);

double tsallis_entropy(double q, const WeibullParams& theta);
double quadratic_entropy(const WeibullParams& theta);
double shannon_entropy(const WeibullParams& theta);

/// Moment generating function. For alpha > 1 the power series is summed
/// to `terms` and the tail bounded by a ratio test; throws if the bound
/// exceeds 1e-10.
MgfResult mgf(double t, const WeibullParams& theta, int terms = 60);

std::vector<double> uniform_sample(const UniformParams& params, std::size_t n, RandomStream& rng);

double burr3_pdf(double x, const BurrIIIParams& params);
double burr3_cdf(double x, const BurrIIIParams& params);
double burr3_quantile(double u, const BurrIIIParams& params);
std::vector<double> burr3_sample(const BurrIIIParams& params, std::size_t n, RandomStream& rng);

}  // namespace mlqe
