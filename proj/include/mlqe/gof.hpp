#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlqe/distributions.hpp"
#include "mlqe/optimize.hpp"

namespace mlqe {

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

/// Kolmogorov-Smirnov distance between the empirical cdf of `data` and `cdf`.
double ks_statistic(std::span<const double> data, const std::function<double(double)>& cdf);

/// Asymptotic p-value with the finite-n correction
/// lambda = (sqrt(n) + 0.12 + 0.11/sqrt(n)) D.
double ks_pvalue(double statistic, std::size_t n);

/// One-sample test against a Weibull cdf.
KsResult ks_test(std::span<const double> data, const WeibullParams& theta);

struct QSelectionRow {
    double q = 0.0;
    std::optional<FitResult> fit;
    KsResult ks;
    std::string error;  // set when the fit for this q failed
};

struct QSelection {
    double q_star = 0.0;
    FitResult best_fit;
    KsResult best_ks;
    std::vector<QSelectionRow> table;
};

/// Fits MLqE for every q, tests each fit with KS, and returns the q with the
/// largest p-value. Ties go to the q nearest 1. Throws FitError if no q fits.
QSelection select_q_by_ks(std::span<const double> data, const std::vector<double>& grid, const GaConfig& config = {});

/// CSV with header q,alpha_hat,beta_hat,D,p_value. Failed rows have empty fields.
std::string selection_to_csv(const QSelection& selection);

}  // namespace mlqe
