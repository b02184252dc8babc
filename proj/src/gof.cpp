#include "mlqe/gof.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "mlqe/special.hpp"

namespace mlqe {

namespace {

constexpr double kSeriesCutoff = 1e-12;

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

double ks_statistic(std::span<const double> data, const std::function<double(double)>& cdf) {
    if (data.empty()) throw std::invalid_argument("KS statistic needs at least one observation");
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        if (!std::isfinite(f)) throw std::domain_error("cdf returned a non-finite value");
        const double above = static_cast<double>(i + 1) / n - f;
        const double below = f - static_cast<double>(i) / n;
        d = std::max({d, above, below});
    }
    return std::min(d, 1.0);
}

double ks_pvalue(double statistic, std::size_t n) {
    if (n < 1) throw std::invalid_argument("KS p-value needs n >= 1");
    if (!(statistic > 0.0)) return 1.0;
    const double rn = std::sqrt(static_cast<double>(n));
    const double lambda = (rn + 0.12 + 0.11 / rn) * statistic;
    double p;
    if (lambda < 1.18) {
        // Jacobi theta form of the same distribution; the alternating series
        // converges slowly for small lambda.
        const double c = special::kPi * special::kPi / (8.0 * lambda * lambda);
        double sum = 0.0;
        for (int k = 1; k < 1000; ++k) {
            const double term = std::exp(-(2.0 * k - 1.0) * (2.0 * k - 1.0) * c);
            sum += term;
            if (term < kSeriesCutoff) break;
        }
        p = 1.0 - std::sqrt(2.0 * special::kPi) / lambda * sum;
    } else {
        double sum = 0.0;
        for (int k = 1; k < 1000; ++k) {
            const double term = std::exp(-2.0 * k * k * lambda * lambda);
            sum += (k % 2 == 1 ? term : -term);
            if (term < kSeriesCutoff) break;
        }
        p = 2.0 * sum;
    }
    return std::clamp(p, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> data, const WeibullParams& theta) {
    const double d = ks_statistic(data, [&](double x) { return weibull_cdf(x, theta); });
    return {d, ks_pvalue(d, data.size()), data.size()};
}

QSelection select_q_by_ks(std::span<const double> data, const std::vector<double>& grid, const GaConfig& config) {
    if (grid.empty()) throw std::invalid_argument("q grid is empty");
    QSelection out{0.0, {WeibullParams(1.0, 1.0), 0.0, 0, false, false, {}}, {}, {}};
    std::optional<std::size_t> best;
    for (double q : grid) {
        QSelectionRow row;
        row.q = q;
        try {
            row.fit = fit_mlqe(data, q, config);
            row.ks = ks_test(data, row.fit->theta_hat);
        } catch (const std::exception& e) {
            row.fit.reset();
            row.error = e.what();
        }
        out.table.push_back(row);
        if (!row.fit) continue;
        const std::size_t idx = out.table.size() - 1;
        if (!best) {
            best = idx;
            continue;
        }
        const auto& incumbent = out.table[*best];
        const bool higher = row.ks.p_value > incumbent.ks.p_value;
        const bool tie_nearer = row.ks.p_value == incumbent.ks.p_value &&
                                std::fabs(row.q - 1.0) < std::fabs(incumbent.q - 1.0);
        if (higher || tie_nearer) best = idx;
    }
    if (!best) throw FitError("no q in the grid produced a fit");
    const auto& row = out.table[*best];
    out.q_star = row.q;
    out.best_fit = *row.fit;
    out.best_ks = row.ks;
    return out;
}

std::string selection_to_csv(const QSelection& selection) {
    std::ostringstream os;
    os << "q,alpha_hat,beta_hat,D,p_value\n";
    for (const auto& row : selection.table) {
        os << format_number(row.q) << ',';
        if (row.fit)
            os << format_number(row.fit->theta_hat.alpha) << ',' << format_number(row.fit->theta_hat.beta) << ','
               << format_number(row.ks.statistic) << ',' << format_number(row.ks.p_value);
        else
            os << ",,,";
        os << '\n';
    }
    return os.str();
}

}  // namespace mlqe
