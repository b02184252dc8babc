#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mlqe/distributions.hpp"
#include "mlqe/errors.hpp"
#include "mlqe/objectives.hpp"

namespace mlqe {

enum class Crossover { SINGLE_POINT };

struct GaConfig {
    std::size_t population_size = 100;
    std::size_t generations = 200;
    Crossover crossover = Crossover::SINGLE_POINT;
    double crossover_rate = 0.8;
    double mutation_sigma_fraction = 0.05;
    std::size_t elite_count = 2;
    std::size_t tournament_size = 2;
    // For ga_maximize these are the search box. The Weibull fits read them as
    // (alpha, beta) bounds and search over their logarithms.
    std::vector<double> bounds_lo{1e-6, 1e-6};
    std::vector<double> bounds_hi{1e10, 1e10};
    std::uint64_t seed = 1;
    bool polish = true;
    double polish_tolerance = 1e-10;
    // Stop early once the best value has not improved by more than
    // stall_tolerance * (1 + |best|) for this many generations. 0 disables.
    std::size_t stall_generations = 50;
    double stall_tolerance = 1e-8;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;

    /// One key=value pair per line.
    std::string to_text() const;

    /// Parses key=value pairs separated by newlines or commas, applied on top
    /// of `base`. Vector values use ':' between components.
    static GaConfig from_text(const std::string& text, const GaConfig& base);
    static GaConfig from_text(const std::string& text);
};

struct GaResult {
    std::vector<double> best;
    double value = 0.0;
    std::size_t evaluations = 0;
    std::size_t generations_run = 0;
    bool converged = false;
    bool polish_applied = false;
    std::vector<double> best_history;  // best value after each generation
};

using Objective = std::function<Evaluation(std::span<const double>)>;

/// Maximizes `objective` over the box in `config`. Cliffed evaluations rank
/// below every non-cliffed one. `initial` rows seed the first population.
GaResult ga_maximize(const Objective& objective, const GaConfig& config,
                     const std::vector<std::vector<double>>& initial = {});

/// Nelder-Mead maximization inside a box, used as the GA polish step.
struct SimplexResult {
    std::vector<double> best;
    Evaluation value;
    std::size_t evaluations = 0;
    bool converged = false;
};

SimplexResult simplex_maximize(const Objective& objective, std::vector<double> start, const std::vector<double>& lo,
                               const std::vector<double>& hi, double step, double tolerance,
                               std::size_t max_evaluations = 4000);

struct FitResult {
    WeibullParams theta_hat;
    double objective_value;
    std::size_t evaluations;
    bool converged;
    bool polish_applied;
    ScoreVector residual;  // estimating-equation residual at theta_hat
};

/// Maximum likelihood fit. Needs at least two distinct observations.
FitResult fit_mle(std::span<const double> data, const GaConfig& config = {});

/// Maximum log_q likelihood fit, q > 0 and q != 1.
FitResult fit_mlqe(std::span<const double> data, double q, const GaConfig& config = {});

/// Start point from the moments of log x: sd(log X) = pi / (sqrt(6) alpha).
WeibullParams log_moment_start(std::span<const double> data);

}  // namespace mlqe
