#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mlqe/distributions.hpp"

namespace mlqe {

enum class ObjectiveKind { LOG, LOG_Q, LOG_KAPPA, LOG_SHIFT, DPD };

/// Objective family Λ and its tuning constant: q for LOG_Q (q != 1),
/// kappa for LOG_KAPPA, the shift for LOG_SHIFT (>= 0), gamma for DPD (> 0).
/// LOG ignores the tuning value.
struct ObjectiveSpec {
    ObjectiveKind kind;
    double tuning;

    ObjectiveSpec(ObjectiveKind kind, double tuning = 0.0);

    static ObjectiveSpec log() { return {ObjectiveKind::LOG}; }
    static ObjectiveSpec log_q(double q) { return {ObjectiveKind::LOG_Q, q}; }
    static ObjectiveSpec log_kappa(double kappa) { return {ObjectiveKind::LOG_KAPPA, kappa}; }
    static ObjectiveSpec log_shift(double shift) { return {ObjectiveKind::LOG_SHIFT, shift}; }
    static ObjectiveSpec dpd(double gamma) { return {ObjectiveKind::DPD, gamma}; }
};

struct ScoreVector {
    double d_alpha = 0.0;
    double d_beta = 0.0;
};

/// Symmetric 2x2 matrix over (alpha, beta).
struct Matrix2 {
    double aa = 0.0;
    double ab = 0.0;
    double bb = 0.0;
};

/// Objective value with a flag set when some density evaluation fell below
/// the numerical floor and was clamped.
struct Evaluation {
    double value = 0.0;
    bool cliffed = false;
};

/// Smallest density the optimizer-facing objectives will use.
inline constexpr double kDensityFloor = 1e-300;

double deformed_log(double z, const ObjectiveSpec& spec);

double loglik(const WeibullParams& theta, std::span<const double> data);
ScoreVector grad_loglik(const WeibullParams& theta, std::span<const double> data);
Matrix2 hessian_loglik(const WeibullParams& theta, std::span<const double> data);

double logq_lik(const WeibullParams& theta, std::span<const double> data, double q);
ScoreVector grad_logq_lik(const WeibullParams& theta, std::span<const double> data, double q);

/// Unweighted score of log f, (d/dalpha, d/dbeta) log f(x).
ScoreVector score_z(double x, const WeibullParams& theta);

/// f^(1-q) times score_z.
ScoreVector score_psi(double x, const WeibullParams& theta, double q);

double weight(double x, const WeibullParams& theta, const ObjectiveSpec& spec);

/// Left-hand side of the estimating equations for the chosen objective.
/// For DPD this is (1/n) sum f^gamma Z - integral Z f^(1+gamma).
ScoreVector ee_residual(const WeibullParams& theta, std::span<const double> data, const ObjectiveSpec& spec);

/// integral f^(1+gamma) - (1 + 1/gamma) (1/n) sum f^gamma(x_i). Minimized.
double dpd_objective(const WeibullParams& theta, std::span<const double> data, double gamma);

/// Sample with cached logarithms, used by the optimizer-facing objectives.
class PreparedSample {
public:
    explicit PreparedSample(std::span<const double> data);

    std::size_t size() const { return x_.size(); }
    const std::vector<double>& values() const { return x_; }
    const std::vector<double>& logs() const { return log_x_; }

private:
    std::vector<double> x_;
    std::vector<double> log_x_;
};

/// loglik with log f floored at log(kDensityFloor).
Evaluation loglik_evaluation(double alpha, double beta, const PreparedSample& sample);

/// logq_lik with f floored at kDensityFloor when q > 1.
Evaluation logq_evaluation(double alpha, double beta, const PreparedSample& sample, double q);

enum class LimitTag { ZERO, PLUS_INF, MINUS_INF, FINITE_NONZERO };

struct ScoreLimits {
    std::pair<LimitTag, LimitTag> at_zero;      // (psi_alpha, psi_beta) as x -> 0+
    std::pair<LimitTag, LimitTag> at_infinity;  // (psi_alpha, psi_beta) as x -> infinity
};

/// Limits of (psi_alpha, psi_beta) at the ends of the support.
ScoreLimits score_limit_class(const WeibullParams& theta, double q);

const char* to_string(LimitTag tag);

/// Compares DPD with gamma = 1 - q against the affine image of the
/// log_q likelihood on a parameter grid. Reports the largest deviation
/// from the best affine fit; zero would mean the two are affinely equivalent.
struct AffineDiagnostic {
    double slope;
    double intercept;
    double max_abs_residual;
    std::size_t points;
};

AffineDiagnostic dpd_logq_affine_diagnostic(std::span<const double> data, double q,
                                            std::span<const WeibullParams> grid);

}  // namespace mlqe
