#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "mlqe/distributions.hpp"

namespace mlqe {

enum class InfoConvention { EXPECTED_HESSIAN, FISHER };

/// Symmetric 2x2 information-type matrix over (alpha, beta), already
/// multiplied by the sample size n.
struct InfoMatrix {
    double e_aa = 0.0;
    double e_ab = 0.0;
    double e_bb = 0.0;
    std::size_t n = 1;
    InfoConvention convention = InfoConvention::EXPECTED_HESSIAN;

    // Set by q_fisher: largest relative gap between the closed form and the
    // quadrature cross-check, and whether the quadrature values were used.
    double closed_form_discrepancy = 0.0;
    bool used_quadrature = false;

    double det() const { return e_aa * e_bb - e_ab * e_ab; }
};

/// n E[Hessian of log f]. Entries are negative on the diagonal.
InfoMatrix expected_hessian(const WeibullParams& theta, std::size_t n);

/// Negated expected Hessian. Throws std::domain_error if it is not
/// positive definite.
InfoMatrix fisher(const WeibullParams& theta, std::size_t n);

/// n E[Z Z^T f^(1-q)], Z the score of log f, evaluated in closed form from
/// the weighted-moment tools with r = 2 - q. Requires 0 < q < 2 and
/// (1-q)(alpha-1) > -alpha.
InfoMatrix q_fisher(const WeibullParams& theta, double q, std::size_t n);

/// The same matrix by one-dimensional quadrature.
InfoMatrix q_fisher_quadrature(const WeibullParams& theta, double q, std::size_t n);

struct ConditionCheck {
    bool passed = false;
    double residual = 0.0;
    std::string detail;
};

struct ConsistencyReport {
    ConditionCheck mean_score_zero;    // E[d log f / d beta] = 0
    ConditionCheck curvature_negative; // E[d^2 log f / d beta^2] = -alpha^2/beta^2 < 0
    ConditionCheck third_derivative;   // |d^3 log f / d beta^3| <= H(x), E[H] = M(beta) finite
    double m_beta = 0.0;

    bool all_passed() const {
        return mean_score_zero.passed && curvature_negative.passed && third_derivative.passed;
    }
};

/// Numeric checks of the three conditions for a consistent root of the
/// beta likelihood equation with alpha known. Requires beta > 1.
ConsistencyReport consistency_conditions(const WeibullParams& theta);

}  // namespace mlqe
