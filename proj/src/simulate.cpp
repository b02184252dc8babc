#include "mlqe/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <type_traits>

namespace mlqe {

namespace {

// Kahan-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double y = x - carry_;
        const double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

std::vector<double> draw_contaminant(const Contaminant& f1, std::size_t n, RandomStream& rng) {
    return std::visit(
        [&](const auto& p) -> std::vector<double> {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, WeibullParams>) return weibull_sample(p, n, rng);
            else if constexpr (std::is_same_v<T, UniformParams>) return uniform_sample(p, n, rng);
            else return burr3_sample(p, n, rng);
        },
        f1);
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

void ContaminationDesign::validate() const {
    if (n < 2) throw std::invalid_argument("design needs n >= 2");
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::invalid_argument("design needs 0 <= epsilon < 1");
    if (const auto* u = std::get_if<UniformParams>(&f1); u && !(u->a > 0.0))
        throw std::invalid_argument("uniform contaminant must have a > 0 so samples stay positive");
    if (n0() < 1) throw std::invalid_argument("design leaves no draws from f0");
}

std::size_t ContaminationDesign::n1() const {
    return static_cast<std::size_t>(std::llround(epsilon * static_cast<double>(n)));
}

std::string MethodSpec::label() const { return method == Method::MLE ? "MLE" : "MLqE"; }

std::vector<double> contaminated_sample(const ContaminationDesign& design, RandomStream& rng) {
    design.validate();
    std::vector<double> out = weibull_sample(design.f0, design.n0(), rng);
    const std::vector<double> extra = draw_contaminant(design.f1, design.n1(), rng);
    out.insert(out.end(), extra.begin(), extra.end());
    // Fisher-Yates with the stream's own bounded integers, for portability.
    for (std::size_t i = out.size(); i > 1; --i) std::swap(out[i - 1], out[rng.below(i)]);
    return out;
}

SimSummary summarize(const std::vector<WeibullParams>& estimates, const WeibullParams& truth,
                     const MethodSpec& method) {
    if (estimates.empty()) throw std::invalid_argument("no estimates to summarize");
    const double r = static_cast<double>(estimates.size());
    CompensatedSum sa, sb;
    for (const auto& e : estimates) {
        sa.add(e.alpha);
        sb.add(e.beta);
    }
    SimSummary s;
    s.method = method;
    s.replications = estimates.size();
    s.mean_alpha = sa.value() / r;
    s.mean_beta = sb.value() / r;
    CompensatedSum va, vb;
    for (const auto& e : estimates) {
        va.add((e.alpha - s.mean_alpha) * (e.alpha - s.mean_alpha));
        vb.add((e.beta - s.mean_beta) * (e.beta - s.mean_beta));
    }
    s.var_alpha = va.value() / r;
    s.var_beta = vb.value() / r;
    const double bias_a = s.mean_alpha - truth.alpha;
    const double bias_b = s.mean_beta - truth.beta;
    s.mse_alpha = s.var_alpha + bias_a * bias_a;
    s.mse_beta = s.var_beta + bias_b * bias_b;
    return s;
}

ReplicateSeeds replicate_seeds(std::uint64_t base_seed, std::size_t index) {
    const std::uint64_t s = base_seed + index;
    const std::uint64_t data = mix_seed(s);
    return {data, mix_seed(data)};
}

SimSummary monte_carlo(const ContaminationDesign& design, const MethodSpec& method, std::size_t replications,
                       std::uint64_t base_seed, const GaConfig& ga, std::size_t threads) {
    design.validate();
    if (replications < 2) throw std::invalid_argument("monte_carlo needs at least two replications");
    if (method.method == Method::MLQE && (!(method.q > 0.0) || method.q == 1.0))
        throw std::invalid_argument("MLqE needs q > 0 and q != 1");

    std::vector<std::optional<WeibullParams>> results(replications);
    std::vector<std::string> errors(replications);

    auto run_one = [&](std::size_t i) {
        const ReplicateSeeds seeds = replicate_seeds(base_seed, i);
        RandomStream rng(seeds.data);
        const std::vector<double> sample = contaminated_sample(design, rng);
        GaConfig config = ga;
        for (int attempt = 0; attempt < 2; ++attempt) {
            config.seed = attempt == 0 ? seeds.ga : mix_seed(seeds.ga ^ 0xa5a5a5a5a5a5a5a5ULL);
            try {
                const FitResult fit =
                    method.method == Method::MLE ? fit_mle(sample, config) : fit_mlqe(sample, method.q, config);
                results[i] = fit.theta_hat;
                return;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    std::size_t workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = std::min(workers, replications);
    if (workers <= 1) {
        for (std::size_t i = 0; i < replications; ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < replications; i = next++) run_one(i);
            });
        for (auto& t : pool) t.join();
    }

    // Aggregate in replicate order so the summary is independent of scheduling.
    std::vector<WeibullParams> estimates;
    estimates.reserve(replications);
    std::size_t failures = 0;
    std::string first_error;
    for (std::size_t i = 0; i < replications; ++i) {
        if (results[i]) {
            estimates.push_back(*results[i]);
        } else {
            if (failures == 0) first_error = "replicate " + std::to_string(i) + ": " + errors[i];
            ++failures;
        }
    }
    if (static_cast<double>(failures) > 0.01 * static_cast<double>(replications))
        throw FitError(std::to_string(failures) + " of " + std::to_string(replications) +
                       " replicates failed; first failure " + first_error);
    SimSummary s = summarize(estimates, design.f0, method);
    s.failures = failures;
    return s;
}

QGridResult q_grid_search(const ContaminationDesign& design, const std::vector<double>& grid,
                          std::size_t replications, std::uint64_t base_seed, const GaConfig& ga, std::size_t threads) {
    if (grid.empty()) throw std::invalid_argument("q grid is empty");
    QGridResult out;
    double best = std::numeric_limits<double>::infinity();
    for (double q : grid) {
        const SimSummary s = monte_carlo(design, MethodSpec::mlqe(q), replications, base_seed, ga, threads);
        const double total = s.mse_alpha + s.mse_beta;
        if (total < best) {
            best = total;
            out.q_star = q;
        }
        out.table.push_back(s);
    }
    return out;
}

std::vector<double> default_q_grid() {
    std::vector<double> grid;
    for (int k = 60; k <= 98; ++k) grid.push_back(k / 100.0);
    for (int k = 102; k <= 115; ++k) grid.push_back(k / 100.0);
    return grid;
}

std::string summaries_to_csv(const std::vector<SimSummary>& rows) {
    std::ostringstream os;
    os << "method,q,alpha_hat,beta_hat,var_alpha,var_beta,mse_alpha,mse_beta,replications\n";
    for (const auto& s : rows) {
        os << s.method.label() << ',' << (s.method.method == Method::MLE ? "" : format_number(s.method.q)) << ','
           << format_number(s.mean_alpha) << ',' << format_number(s.mean_beta) << ',' << format_number(s.var_alpha)
           << ',' << format_number(s.var_beta) << ',' << format_number(s.mse_alpha) << ','
           << format_number(s.mse_beta) << ',' << s.replications << '\n';
    }
    return os.str();
}

}  // namespace mlqe
