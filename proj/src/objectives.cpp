#include "mlqe/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mlqe {

namespace {

const double kLogFloor = std::log(kDensityFloor);

void require_data(std::span<const double> data) {
    if (data.empty()) throw std::domain_error("data must not be empty");
    for (double x : data)
        if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("observations must be finite and > 0");
}

// exp((1-q) log z) - 1, divided by (1-q). Accurate as q -> 1.
double log_q_of_log(double log_z, double q) { return std::expm1((1.0 - q) * log_z) / (1.0 - q); }

}  // namespace

ObjectiveSpec::ObjectiveSpec(ObjectiveKind kind_, double tuning_) : kind(kind_), tuning(tuning_) {
    switch (kind) {
        case ObjectiveKind::LOG:
            break;
        case ObjectiveKind::LOG_Q:
            if (!std::isfinite(tuning) || tuning == 1.0)
                throw std::invalid_argument("LOG_Q needs a finite q != 1; use LOG for q = 1");
            break;
        case ObjectiveKind::LOG_KAPPA:
            if (!std::isfinite(tuning)) throw std::invalid_argument("LOG_KAPPA needs a finite kappa");
            break;
        case ObjectiveKind::LOG_SHIFT:
            if (!(tuning >= 0.0) || !std::isfinite(tuning)) throw std::invalid_argument("LOG_SHIFT needs a shift >= 0");
            break;
        case ObjectiveKind::DPD:
            if (!(tuning > 0.0) || !std::isfinite(tuning)) throw std::invalid_argument("DPD needs gamma > 0");
            break;
    }
}

double deformed_log(double z, const ObjectiveSpec& spec) {
    if (spec.kind == ObjectiveKind::LOG_SHIFT) {
        if (!(z >= 0.0) || (z == 0.0 && spec.tuning == 0.0))
            throw std::domain_error("log(shift + z) needs shift + z > 0");
        return std::log(spec.tuning + z);
    }
    if (!(z > 0.0)) throw std::domain_error("deformed log requires z > 0");
    const double lz = std::log(z);
    switch (spec.kind) {
        case ObjectiveKind::LOG:
            return lz;
        case ObjectiveKind::LOG_Q:
            return log_q_of_log(lz, spec.tuning);
        case ObjectiveKind::LOG_KAPPA:
            return spec.tuning == 0.0 ? lz : std::sinh(spec.tuning * lz) / spec.tuning;
        case ObjectiveKind::DPD:
            // Per-point term of the DPD criterion, (z^gamma - 1) / gamma.
            return std::expm1(spec.tuning * lz) / spec.tuning;
        case ObjectiveKind::LOG_SHIFT:
            break;
    }
    return lz;
}

double loglik(const WeibullParams& theta, std::span<const double> data) {
    require_data(data);
    double sum = 0.0;
    for (double x : data) sum += weibull_log_pdf(x, theta);
    return sum;
}

ScoreVector grad_loglik(const WeibullParams& theta, std::span<const double> data) {
    require_data(data);
    const double a = theta.alpha;
    const double b = theta.beta;
    const double n = static_cast<double>(data.size());
    double sum_l = 0.0;
    double sum_w = 0.0;
    double sum_wl = 0.0;
    for (double x : data) {
        const double l = std::log(x / b);
        const double w = std::exp(a * l);
        sum_l += l;
        sum_w += w;
        sum_wl += w * l;
    }
    return {n / a + sum_l - sum_wl, -n * a / b + a / b * sum_w};
}

Matrix2 hessian_loglik(const WeibullParams& theta, std::span<const double> data) {
    require_data(data);
    const double a = theta.alpha;
    const double b = theta.beta;
    const double n = static_cast<double>(data.size());
    double sum_w = 0.0;
    double sum_wl = 0.0;
    double sum_wll = 0.0;
    for (double x : data) {
        const double l = std::log(x / b);
        const double w = std::exp(a * l);
        sum_w += w;
        sum_wl += w * l;
        sum_wll += w * l * l;
    }
    Matrix2 h;
    h.aa = -n / (a * a) - sum_wll;
    h.ab = -n / b + a / b * sum_wl + sum_w / b;
    h.bb = n * a / (b * b) - a * (a + 1.0) / (b * b) * sum_w;
    return h;
}

double logq_lik(const WeibullParams& theta, std::span<const double> data, double q) {
    if (q == 1.0) throw std::domain_error("logq_lik requires q != 1");
    require_data(data);
    double sum = 0.0;
    for (double x : data) sum += log_q_of_log(weibull_log_pdf(x, theta), q);
    return sum;
}

ScoreVector score_z(double x, const WeibullParams& theta) {
    if (!(x > 0.0)) throw std::domain_error("score requires x > 0");
    const double a = theta.alpha;
    const double b = theta.beta;
    const double l = std::log(x / b);
    const double w = std::exp(a * l);
    return {1.0 / a + (1.0 - w) * l, a / b * (w - 1.0)};
}

ScoreVector score_psi(double x, const WeibullParams& theta, double q) {
    const ScoreVector z = score_z(x, theta);
    const double wq = std::exp((1.0 - q) * weibull_log_pdf(x, theta));
    return {wq * z.d_alpha, wq * z.d_beta};
}

ScoreVector grad_logq_lik(const WeibullParams& theta, std::span<const double> data, double q) {
    if (q == 1.0) throw std::domain_error("grad_logq_lik requires q != 1");
    require_data(data);
    ScoreVector g;
    for (double x : data) {
        const ScoreVector p = score_psi(x, theta, q);
        g.d_alpha += p.d_alpha;
        g.d_beta += p.d_beta;
    }
    return g;
}

double weight(double x, const WeibullParams& theta, const ObjectiveSpec& spec) {
    if (!(x > 0.0)) throw std::domain_error("weight requires x > 0");
    const double lf = weibull_log_pdf(x, theta);
    switch (spec.kind) {
        case ObjectiveKind::LOG:
            return 1.0;
        case ObjectiveKind::LOG_Q:
            return std::exp((1.0 - spec.tuning) * lf);
        case ObjectiveKind::LOG_KAPPA:
            return std::cosh(spec.tuning * lf);
        case ObjectiveKind::LOG_SHIFT: {
            const double f = std::exp(lf);
            if (spec.tuning == 0.0) return f > 0.0 ? 1.0 : 0.0;
            return f / (spec.tuning + f);
        }
        case ObjectiveKind::DPD:
            return std::exp(spec.tuning * lf);
    }
    return 1.0;
}

namespace {

// integral of Z f^(1+gamma) dx through the weighted-moment tools.
ScoreVector dpd_integral(const WeibullParams& theta, double gamma) {
    const double a = theta.alpha;
    const double b = theta.beta;
    const double r = 1.0 + gamma;
    const double log_b = std::log(b);
    const double b_pow = std::pow(b, -a);
    const double m0 = weighted_moment(0.0, r, theta);
    const double ma = weighted_moment(a, r, theta);
    const double lm0 = weighted_log_moment(0.0, r, theta);
    const double lma = weighted_log_moment(a, r, theta);
    ScoreVector i;
    i.d_alpha = (1.0 / a - log_b) * m0 + lm0 - b_pow * lma + b_pow * log_b * ma;
    i.d_beta = -a / b * m0 + a / b * b_pow * ma;
    return i;
}

}  // namespace

ScoreVector ee_residual(const WeibullParams& theta, std::span<const double> data, const ObjectiveSpec& spec) {
    switch (spec.kind) {
        case ObjectiveKind::LOG:
            return grad_loglik(theta, data);
        case ObjectiveKind::LOG_Q:
            return grad_logq_lik(theta, data, spec.tuning);
        case ObjectiveKind::LOG_KAPPA:
        case ObjectiveKind::LOG_SHIFT: {
            require_data(data);
            ScoreVector g;
            for (double x : data) {
                const double w = weight(x, theta, spec);
                const ScoreVector z = score_z(x, theta);
                g.d_alpha += w * z.d_alpha;
                g.d_beta += w * z.d_beta;
            }
            return g;
        }
        case ObjectiveKind::DPD: {
            require_data(data);
            const ScoreVector integral = dpd_integral(theta, spec.tuning);
            ScoreVector g;
            for (double x : data) {
                const double w = weight(x, theta, spec);
                const ScoreVector z = score_z(x, theta);
                g.d_alpha += w * z.d_alpha;
                g.d_beta += w * z.d_beta;
            }
            const double n = static_cast<double>(data.size());
            return {g.d_alpha / n - integral.d_alpha, g.d_beta / n - integral.d_beta};
        }
    }
    return {};
}

double dpd_objective(const WeibullParams& theta, std::span<const double> data, double gamma) {
    if (!(gamma > 0.0)) throw std::domain_error("DPD requires gamma > 0");
    require_data(data);
    const double integral = weighted_moment(0.0, 1.0 + gamma, theta);
    double sum = 0.0;
    for (double x : data) sum += std::exp(gamma * weibull_log_pdf(x, theta));
    return integral - (1.0 + 1.0 / gamma) * sum / static_cast<double>(data.size());
}

PreparedSample::PreparedSample(std::span<const double> data) : x_(data.begin(), data.end()) {
    require_data(data);
    log_x_.reserve(x_.size());
    for (double x : x_) log_x_.push_back(std::log(x));
}

Evaluation loglik_evaluation(double alpha, double beta, const PreparedSample& sample) {
    const double la = std::log(alpha);
    const double lb = std::log(beta);
    Evaluation e;
    double sum = 0.0;
    for (double lx : sample.logs()) {
        const double l = lx - lb;
        double lf = la - lb + (alpha - 1.0) * l - std::exp(alpha * l);
        if (!(lf >= kLogFloor)) {
            lf = kLogFloor;
            e.cliffed = true;
        }
        sum += lf;
    }
    e.value = sum;
    return e;
}

Evaluation logq_evaluation(double alpha, double beta, const PreparedSample& sample, double q) {
    const double la = std::log(alpha);
    const double lb = std::log(beta);
    const double saturated = -1.0 / (1.0 - q);
    Evaluation e;
    double sum = 0.0;
    for (double lx : sample.logs()) {
        const double l = lx - lb;
        double lf = la - lb + (alpha - 1.0) * l - std::exp(alpha * l);
        if (!(lf >= kLogFloor)) {
            if (q < 1.0) {
                // f^(1-q) has already underflowed; use the exact limit.
                sum += saturated;
                continue;
            }
            lf = kLogFloor;
            e.cliffed = true;
        }
        sum += log_q_of_log(lf, q);
    }
    e.value = sum;
    return e;
}

ScoreLimits score_limit_class(const WeibullParams& theta, double q) {
    if (!(q > 0.0) || q == 1.0) throw std::domain_error("score limits need q > 0, q != 1");
    const double a = theta.alpha;
    ScoreLimits out;
    // Near zero, f^(1-q) ~ x^((1-q)(alpha-1)) while the psi_alpha bracket ~ log x.
    const double e = (1.0 - q) * (a - 1.0);
    if (a == 1.0)
        out.at_zero = {LimitTag::MINUS_INF, LimitTag::FINITE_NONZERO};
    else if (e > 0.0)
        out.at_zero = {LimitTag::ZERO, LimitTag::ZERO};
    else
        out.at_zero = {LimitTag::MINUS_INF, LimitTag::MINUS_INF};
    // Near infinity, f^(1-q) decays (q < 1) or explodes (q > 1) like exp(+-(x/beta)^alpha).
    if (q < 1.0)
        out.at_infinity = {LimitTag::ZERO, LimitTag::ZERO};
    else
        out.at_infinity = {LimitTag::MINUS_INF, LimitTag::PLUS_INF};
    return out;
}

const char* to_string(LimitTag tag) {
    switch (tag) {
        case LimitTag::ZERO:
            return "0";
        case LimitTag::PLUS_INF:
            return "+inf";
        case LimitTag::MINUS_INF:
            return "-inf";
        case LimitTag::FINITE_NONZERO:
            return "finite";
    }
    return "?";
}

AffineDiagnostic dpd_logq_affine_diagnostic(std::span<const double> data, double q,
                                            std::span<const WeibullParams> grid) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("diagnostic needs 0 < q < 1 so that gamma = 1 - q > 0");
    if (grid.size() < 2) throw std::invalid_argument("diagnostic needs at least two grid points");
    std::vector<double> lq;
    std::vector<double> dpd;
    for (const auto& theta : grid) {
        lq.push_back(logq_lik(theta, data, q));
        // DPD is minimized; negate so both sides are maximized.
        dpd.push_back(-dpd_objective(theta, data, 1.0 - q));
    }
    const double m = static_cast<double>(grid.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        mx += lq[i];
        my += dpd[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        sxx += (lq[i] - mx) * (lq[i] - mx);
        sxy += (lq[i] - mx) * (dpd[i] - my);
    }
    AffineDiagnostic d{};
    d.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    d.intercept = my - d.slope * mx;
    d.points = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i)
        d.max_abs_residual = std::max(d.max_abs_residual, std::fabs(dpd[i] - (d.slope * lq[i] + d.intercept)));
    return d;
}

}  // namespace mlqe
