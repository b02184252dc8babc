#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mlqe/distributions.hpp"
#include "mlqe/optimize.hpp"
#include "mlqe/random.hpp"

namespace mlqe {

using Contaminant = std::variant<WeibullParams, UniformParams, BurrIIIParams>;

/// Mixture (1 - epsilon) f0 + epsilon f1 realized with a fixed split:
/// n1 = round(epsilon n) draws from f1 and n - n1 from f0.
struct ContaminationDesign {
    WeibullParams f0;
    Contaminant f1;
    double epsilon;
    std::size_t n;

    void validate() const;
    std::size_t n1() const;
    std::size_t n0() const { return n - n1(); }
};

enum class Method { MLE, MLQE };

struct MethodSpec {
    Method method = Method::MLE;
    double q = 1.0;

    static MethodSpec mle() { return {Method::MLE, 1.0}; }
    static MethodSpec mlqe(double q) { return {Method::MLQE, q}; }
    std::string label() const;
};

struct SimSummary {
    MethodSpec method;
    double mean_alpha = 0.0;
    double mean_beta = 0.0;
    double var_alpha = 0.0;
    double var_beta = 0.0;
    double mse_alpha = 0.0;
    double mse_beta = 0.0;
    std::size_t replications = 0;
    std::size_t failures = 0;
};

/// Draws n0 values from f0 and n1 from f1, then shuffles.
std::vector<double> contaminated_sample(const ContaminationDesign& design, RandomStream& rng);

/// Mean, variance (divisor R) and MSE against `truth` of a set of estimates.
SimSummary summarize(const std::vector<WeibullParams>& estimates, const WeibullParams& truth, const MethodSpec& method);

/// Seeds used by replicate `index`: one for the data, one for the GA.
struct ReplicateSeeds {
    std::uint64_t data;
    std::uint64_t ga;
};
ReplicateSeeds replicate_seeds(std::uint64_t base_seed, std::size_t index);

/// Fits every replicate and summarizes against design.f0. Replicate i uses
/// seeds derived from base_seed + i, so MLE and MLqE runs with the same
/// base seed see identical samples. `threads` = 0 uses the hardware count.
SimSummary monte_carlo(const ContaminationDesign& design, const MethodSpec& method, std::size_t replications,
                       std::uint64_t base_seed, const GaConfig& ga = {}, std::size_t threads = 0);

struct QGridResult {
    double q_star = 0.0;
    std::vector<SimSummary> table;
};

/// Runs monte_carlo for every q and returns the q minimizing mse_alpha + mse_beta.
QGridResult q_grid_search(const ContaminationDesign& design, const std::vector<double>& grid,
                          std::size_t replications, std::uint64_t base_seed, const GaConfig& ga = {},
                          std::size_t threads = 0);

/// 0.60, 0.61, ..., 0.98 followed by 1.02, ..., 1.15.
std::vector<double> default_q_grid();

/// CSV with header method,q,alpha_hat,beta_hat,var_alpha,var_beta,mse_alpha,mse_beta,replications.
std::string summaries_to_csv(const std::vector<SimSummary>& rows);

}  // namespace mlqe
