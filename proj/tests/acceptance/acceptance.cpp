// Acceptance checks. Run with a criterion number (1-8) or with no argument
// to run them all. Prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "mlqe/cli.hpp"
#include "mlqe/distributions.hpp"
#include "mlqe/gof.hpp"
#include "mlqe/information.hpp"
#include "mlqe/objectives.hpp"
#include "mlqe/optimize.hpp"
#include "mlqe/simulate.hpp"
#include "oracle.hpp"

using namespace mlqe;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
    bool passed;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// 1. Closed forms against quadrature.
Outcome closed_forms() {
    struct Point {
        double s, r, a, b;
    };
    std::vector<Point> grid;
    for (double s : {0.0, 0.5, 1.3, 2.0})
        for (double r : {0.7, 1.0, 1.6})
            for (auto [a, b] : {std::pair{0.8, 1.2}, {2.5, 3.0}, {6.0, 0.7}}) grid.push_back({s, r, a, b});

    double worst = 0.0;
    std::size_t checks = 0;
    auto record = [&](double got, double want, double scale) {
        worst = std::max(worst, oracle::rel_err(got, want, scale));
        ++checks;
    };
    for (const auto& p : grid) {
        const WeibullParams th{p.a, p.b};
        for (int k = 0; k < 3; ++k) {
            auto g = [&](double x) {
                const double v = std::pow(x, p.s) * std::pow(oracle::weibull_pdf(x, p.a, p.b), p.r);
                const double l = std::log(x);
                return k == 0 ? v : (k == 1 ? v * l : v * l * l);
            };
            const double got = k == 0 ? weighted_moment(p.s, p.r, th)
                                      : (k == 1 ? weighted_log_moment(p.s, p.r, th) : weighted_log2_moment(p.s, p.r, th));
            record(got, oracle::weibull_integral(g, p.a, p.b), oracle::weibull_abs_integral(g, p.a, p.b));
        }
    }

    std::vector<std::pair<double, double>> thetas;
    for (double a : {0.6, 1.0, 2.0, 3.5, 8.0})
        for (double b : {0.5, 1.0, 2.5, 6.0}) thetas.emplace_back(a, b);
    for (auto [a, b] : thetas) {
        const WeibullParams th{a, b};
        for (double q : {0.6, 1.5}) {
            const double i = oracle::weibull_integral([&](double x) { return std::pow(oracle::weibull_pdf(x, a, b), q); }, a, b);
            record(tsallis_entropy(q, th), (1.0 - i) / (q - 1.0), std::fabs(1.0 / (q - 1.0)) * i);
        }
        const double i2 = oracle::weibull_integral([&](double x) { return std::pow(oracle::weibull_pdf(x, a, b), 2.0); }, a, b);
        record(quadratic_entropy(th), -std::log(i2), 1.0);
        auto ent = [&](double x) { return oracle::weibull_pdf(x, a, b) * oracle::weibull_log_pdf(x, a, b); };
        record(shannon_entropy(th), -oracle::weibull_integral(ent, a, b), oracle::weibull_abs_integral(ent, a, b));

        for (double t : {0.3 * b, b, 1.8 * b}) {
            for (double s : {0.0, 0.7, 2.0}) {
                auto g = [&](double x) { return std::pow(x, s) * oracle::weibull_pdf(x, a, b); };
                record(truncated_moment(s, t, th), oracle::weibull_integral(g, a, b, t), 0.0);
            }
            const double rel = std::exp(-std::pow(t / b, a));
            for (int order : {1, 2, 3}) {
                auto g = [&](double x) { return std::pow(x - t, order) * oracle::weibull_pdf(x, a, b); };
                record(residual_life_moment(order, t, th), oracle::weibull_integral(g, a, b, t) / rel, 0.0);
            }
        }
    }
    return {worst < 1e-7, std::to_string(checks) + " checks over " + std::to_string(grid.size()) + "+" +
                              std::to_string(thetas.size()) + " grid points, worst relative error " + fmt("%.2e", worst)};
}

// 2. Expected Hessian by Monte Carlo; q-Fisher by quadrature.
Outcome information_matrices() {
    bool ok = true;
    double worst_z = 0.0, worst_q = 0.0;
    const std::size_t draws = 1000000;
    std::uint64_t seed = 2024;
    for (auto [a, b] : {std::pair{0.8, 1.5}, {2.0, 1.0}, {4.0, 3.0}}) {
        const WeibullParams th{a, b};
        RandomStream rng(seed++);
        double s[3] = {0, 0, 0}, s2[3] = {0, 0, 0};
        for (std::size_t i = 0; i < draws; ++i) {
            const double x = weibull_quantile(rng.uniform(), th);
            const double l = std::log(x / b), p = std::pow(x / b, a);
            // Per-observation second partials of log f, restated here.
            const double h[3] = {-1.0 / (a * a) - p * l * l, -1.0 / b + p * (1.0 + a * l) / b,
                                 a / (b * b) - a * (a + 1.0) / (b * b) * p};
            for (int k = 0; k < 3; ++k) {
                s[k] += h[k];
                s2[k] += h[k] * h[k];
            }
        }
        const InfoMatrix e = expected_hessian(th, 1);
        const double closed[3] = {e.e_aa, e.e_ab, e.e_bb};
        for (int k = 0; k < 3; ++k) {
            const double mean = s[k] / draws;
            const double se = std::sqrt((s2[k] / draws - mean * mean) / draws);
            const double z = std::fabs(mean - closed[k]) / se;
            worst_z = std::max(worst_z, z);
            ok = ok && z < 3.0;
        }
    }
    for (auto [a, b] : {std::pair{0.8, 0.7}, {2.0, 1.5}, {3.5, 2.0}})
        for (double q : {0.6, 0.8, 0.95, 1.1}) {
            const WeibullParams th{a, b};
            const InfoMatrix m = q_fisher(th, q, 1);
            auto entry = [&](int k) {
                return oracle::weibull_integral(
                    [&](double x) {
                        const double l = std::log(x / b), p = std::pow(x / b, a);
                        const double za = 1.0 / a + l - p * l, zb = -a / b + a / b * p;
                        const double w = std::pow(oracle::weibull_pdf(x, a, b), 2.0 - q);
                        return (k == 0 ? za * za : (k == 1 ? za * zb : zb * zb)) * w;
                    },
                    a, b);
            };
            const double diag = std::max(std::fabs(m.e_aa), std::fabs(m.e_bb));
            const double got[3] = {m.e_aa, m.e_ab, m.e_bb};
            for (int k = 0; k < 3; ++k) {
                // The off-diagonal may pass near zero; measure it against the diagonal.
                const double r = oracle::rel_err(got[k], entry(k), k == 1 ? 1e-3 * diag : 0.0);
                worst_q = std::max(worst_q, r);
                ok = ok && r < 1e-5;
            }
        }
    return {ok, "expected Hessian worst |z| " + fmt("%.2f", worst_z) + " (1e6 draws, 3 thetas); q-Fisher worst relative " +
                    fmt("%.2e", worst_q) + " on 12 (theta, q) points"};
}

// 3. Gradients against central finite differences.
Outcome gradients() {
    RandomStream rng(99);
    double worst = 0.0;
    auto compare = [&](ScoreVector g, ScoreVector fd) {
        const double scale = std::max({std::fabs(fd.d_alpha), std::fabs(fd.d_beta), 1e-12});
        worst = std::max({worst, std::fabs(g.d_alpha - fd.d_alpha) / scale, std::fabs(g.d_beta - fd.d_beta) / scale});
    };
    auto fd = [](auto f, const WeibullParams& th) {
        const double ha = 1e-6 * th.alpha, hb = 1e-6 * th.beta;
        return ScoreVector{(f(WeibullParams{th.alpha + ha, th.beta}) - f(WeibullParams{th.alpha - ha, th.beta})) / (2 * ha),
                           (f(WeibullParams{th.alpha, th.beta + hb}) - f(WeibullParams{th.alpha, th.beta - hb})) / (2 * hb)};
    };
    for (int i = 0; i < 50; ++i) {
        const WeibullParams gen{rng.uniform(0.6, 5.0), rng.uniform(0.5, 4.0)};
        const WeibullParams th{gen.alpha * rng.uniform(0.7, 1.3), gen.beta * rng.uniform(0.7, 1.3)};
        const auto data = weibull_sample(gen, 20, rng);
        const double q = rng.uniform(0.6, 1.4);
        const double gamma = rng.uniform(0.1, 0.8);

        compare(grad_loglik(th, data), fd([&](const WeibullParams& p) { return loglik(p, data); }, th));
        if (std::fabs(q - 1.0) > 1e-3)
            compare(grad_logq_lik(th, data, q), fd([&](const WeibullParams& p) { return logq_lik(p, data, q); }, th));
        const double x = data[0];
        compare(score_psi(x, th, q), fd(
                                         [&](const WeibullParams& p) {
                                             const double f = oracle::weibull_pdf(x, p.alpha, p.beta);
                                             return std::fabs(q - 1.0) < 1e-12 ? std::log(f)
                                                                              : (std::pow(f, 1.0 - q) - 1.0) / (1.0 - q);
                                         },
                                         th));
        // d/dtheta DPD = -(1 + gamma) times the DPD estimating-equation residual.
        const ScoreVector r = ee_residual(th, data, ObjectiveSpec::dpd(gamma));
        compare({-(1 + gamma) * r.d_alpha, -(1 + gamma) * r.d_beta},
                fd([&](const WeibullParams& p) { return dpd_objective(p, data, gamma); }, th));
    }
    return {worst < 1e-4, "50 instances x 4 gradients, worst relative error " + fmt("%.2e", worst)};
}

// 4. Glass-fibre data.
Outcome real_data() {
    const auto data = load_data(std::string(MLQE_DATA_DIR) + "/glass_fibre.txt");
    const FitResult mle = fit_mle(data);
    const FitResult mlqe = fit_mlqe(data, 0.8);
    const double p_mle = ks_test(data, mle.theta_hat).p_value;
    const double p_mlqe = ks_test(data, mlqe.theta_hat).p_value;
    RandomStream rng(1);
    const auto dirty = inject_contamination(data, ContaminationMode::OUTLIERS, {}, rng);
    const double a_mle_out = fit_mle(dirty).theta_hat.alpha;
    const double a_mlqe_out = fit_mlqe(dirty, 0.8).theta_hat.alpha;

    const bool ok = data.size() == 63 && std::fabs(mle.theta_hat.alpha - 5.7762) <= 1e-2 &&
                    std::fabs(mle.theta_hat.beta - 1.6275) <= 1e-2 && std::fabs(mlqe.theta_hat.alpha - 7.5423) <= 0.10 &&
                    std::fabs(mlqe.theta_hat.beta - 1.6401) <= 0.01 && std::fabs(p_mle - 0.0936) <= 0.02 &&
                    std::fabs(p_mlqe - 0.7283) <= 0.05 && std::fabs(a_mle_out - 1.46) <= 0.05 &&
                    std::fabs(a_mlqe_out - 7.51) <= 0.15;
    return {ok, "MLE (" + fmt("%.4f", mle.theta_hat.alpha) + ", " + fmt("%.4f", mle.theta_hat.beta) + ") p=" +
                    fmt("%.4f", p_mle) + "; MLqE(0.8) (" + fmt("%.4f", mlqe.theta_hat.alpha) + ", " +
                    fmt("%.4f", mlqe.theta_hat.beta) + ") p=" + fmt("%.4f", p_mlqe) + "; with outliers alpha MLE " +
                    fmt("%.4f", a_mle_out) + ", MLqE " + fmt("%.4f", a_mlqe_out)};
}

// 5. Monte Carlo at 1000 replications.
Outcome monte_carlo_tables() {
    const ContaminationDesign case1{{4, 2}, WeibullParams{1, 5}, 0.1, 100};
    const SimSummary q = monte_carlo(case1, MethodSpec::mlqe(0.84), 1000, 1);
    const SimSummary m = monte_carlo(case1, MethodSpec::mle(), 1000, 1);
    const ContaminationDesign wu4{{3, 5}, UniformParams{3, 5}, 0.1, 50};
    const SimSummary uq = monte_carlo(wu4, MethodSpec::mlqe(1.07), 1000, 1);
    const SimSummary um = monte_carlo(wu4, MethodSpec::mle(), 1000, 1);

    const bool ok = std::fabs(q.mean_alpha - 3.94) <= 0.10 && std::fabs(q.mean_beta - 2.00) <= 0.02 &&
                    std::fabs(q.mse_alpha - 0.18) <= 0.05 && std::fabs(m.mean_alpha - 1.60) <= 0.10 &&
                    std::fabs(m.mse_alpha - 5.86) <= 0.60 && uq.mse_alpha < um.mse_alpha;
    return {ok, "W+W case 1: MLqE mean (" + fmt("%.4f", q.mean_alpha) + ", " + fmt("%.4f", q.mean_beta) + ") MSE_a " +
                    fmt("%.4f", q.mse_alpha) + "; MLE mean_a " + fmt("%.4f", m.mean_alpha) + " MSE_a " +
                    fmt("%.4f", m.mse_alpha) + "; W+U case 4 (n=50, q=1.07) MSE_a MLqE " + fmt("%.4f", uq.mse_alpha) +
                    " vs MLE " + fmt("%.4f", um.mse_alpha)};
}

// 6. Robustness orderings at 500 replications.
Outcome orderings() {
    struct Row {
        const char* name;
        ContaminationDesign design;
        double q;
    };
    const std::vector<Row> rows{
        {"W+W case 1", {{4, 2}, WeibullParams{1, 5}, 0.1, 100}, 0.84},
        {"W+W case 7", {{5, 1}, WeibullParams{2, 8}, 0.1, 100}, 0.87},
        {"W+U case 2", {{3, 5}, UniformParams{5, 15}, 0.1, 100}, 0.75},
        {"W+B case 3", {{5, 1}, BurrIIIParams{2, 20}, 0.1, 100}, 0.88},
    };
    bool ok = true;
    std::string detail;
    for (const auto& r : rows) {
        const double mq = monte_carlo(r.design, MethodSpec::mlqe(r.q), 500, 1).mse_alpha;
        const double mm = monte_carlo(r.design, MethodSpec::mle(), 500, 1).mse_alpha;
        ok = ok && mq < mm;
        detail += std::string(r.name) + " " + fmt("%.4f", mq) + "<" + fmt("%.4f", mm) + "; ";
    }
    const ContaminationDesign clean{{4, 2}, WeibullParams{4, 2}, 0.0, 100};
    const SimSummary cm = monte_carlo(clean, MethodSpec::mle(), 500, 1);
    const SimSummary cq = monte_carlo(clean, MethodSpec::mlqe(0.8), 500, 1);
    const bool control = cm.mse_alpha <= cq.mse_alpha && cm.mse_beta <= cq.mse_beta;
    ok = ok && control;
    detail += "clean MLE MSE (" + fmt("%.4f", cm.mse_alpha) + ", " + fmt("%.5f", cm.mse_beta) + ") <= MLqE(0.8) (" +
              fmt("%.4f", cq.mse_alpha) + ", " + fmt("%.5f", cq.mse_beta) + ")";
    return {ok, detail};
}

// 7. Reference limit classes of psi near 0 and infinity.
Outcome limit_tables() {
    using T = oracle::Trend;
    auto name = [](T t) {
        switch (t) {
            case T::ZERO: return "0";
            case T::PLUS_INF: return "+inf";
            case T::MINUS_INF: return "-inf";
            default: return "finite";
        }
    };
    struct Cell {
        double alpha, q;
        T zero_a, zero_b, inf_a, inf_b;
    };
    // Rows alpha >= 1 and 0 < alpha < 1; columns q > 1 and 0 < q < 1.
    const std::vector<Cell> table{
        {2.0, 1.2, T::PLUS_INF, T::MINUS_INF, T::MINUS_INF, T::PLUS_INF},
        {2.0, 0.8, T::ZERO, T::ZERO, T::ZERO, T::ZERO},
        {0.5, 1.2, T::ZERO, T::ZERO, T::MINUS_INF, T::PLUS_INF},
        {0.5, 0.8, T::PLUS_INF, T::MINUS_INF, T::ZERO, T::ZERO},
    };
    bool ok = true;
    std::string detail;
    const double beta = 1.5;
    for (const auto& c : table) {
        const WeibullParams th{c.alpha, beta};
        const auto z4 = score_psi(1e-4 * beta, th, c.q), z8 = score_psi(1e-8 * beta, th, c.q);
        const auto i4 = score_psi(1e4 * beta, th, c.q), i8 = score_psi(1e8 * beta, th, c.q);
        const T got[4] = {oracle::classify_trend(z4.d_alpha, z8.d_alpha), oracle::classify_trend(z4.d_beta, z8.d_beta),
                          oracle::classify_trend(i4.d_alpha, i8.d_alpha), oracle::classify_trend(i4.d_beta, i8.d_beta)};
        const T want[4] = {c.zero_a, c.zero_b, c.inf_a, c.inf_b};
        bool cell_ok = true;
        for (int k = 0; k < 4; ++k) cell_ok = cell_ok && got[k] == want[k];
        ok = ok && cell_ok;
        detail += std::string("alpha=") + fmt("%g", c.alpha) + ",q=" + fmt("%g", c.q) + ": x->0 (" + name(got[0]) + "," +
                  name(got[1]) + ") table (" + name(want[0]) + "," + name(want[1]) + "), x->inf (" + name(got[2]) + "," +
                  name(got[3]) + ") table (" + name(want[2]) + "," + name(want[3]) + ")" + (cell_ok ? "" : " MISMATCH") +
                  "; ";
    }
    return {ok, detail};
}

// 8. GA on Rastrigin.
Outcome optimizer() {
    auto rastrigin = [](std::span<const double> v) {
        double s = 20.0;
        for (double x : v) s += x * x - 10.0 * std::cos(2.0 * std::numbers::pi * x);
        return Evaluation{-s, false};
    };
    GaConfig cfg;
    cfg.bounds_lo = {-5.12, -5.12};
    cfg.bounds_hi = {5.12, 5.12};
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        cfg.seed = seed;
        const GaResult r = ga_maximize(rastrigin, cfg);
        if (std::fabs(r.best[0]) <= 1e-2 && std::fabs(r.best[1]) <= 1e-2 && -r.value <= 1e-2) ++hits;
    }
    cfg.seed = 17;
    const GaResult a = ga_maximize(rastrigin, cfg);
    const GaResult b = ga_maximize(rastrigin, cfg);
    const bool same = a.best == b.best && a.value == b.value && a.best_history == b.best_history &&
                      a.evaluations == b.evaluations;
    return {hits >= 95 && same,
            std::to_string(hits) + "/100 seeds within 1e-2 of the optimum; repeat run bit-identical: " + (same ? "yes" : "no")};
}

struct Criterion {
    const char* title;
    std::function<Outcome()> run;
    double budget_s;  // 0: no runtime budget
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {"closed forms agree with quadrature", closed_forms, 10},
        {"expected Hessian and q-Fisher", information_matrices, 60},
        {"gradients agree with finite differences", gradients, 5},
        {"glass-fibre data", real_data, 120},
        {"Monte Carlo tables at 1000 replications", monte_carlo_tables, 1200},
        {"robustness orderings at 500 replications", orderings, 0},
        {"score limit tables", limit_tables, 1},
        {"GA on Rastrigin and seed determinism", optimizer, 0},
    };
    std::vector<int> which;
    if (argc > 1) {
        const int k = std::atoi(argv[1]);
        if (k < 1 || k > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], criteria.size());
            return 2;
        }
        which.push_back(k);
    } else {
        for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) which.push_back(k);
    }

    bool all = true;
    for (int k : which) {
        const Criterion& c = criteria[k - 1];
        const auto start = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double t = seconds_since(start);
        const bool in_time = c.budget_s == 0 || t < c.budget_s;
        const bool pass = o.passed && in_time;
        all = all && pass;
        std::printf("%s criterion %d: %s | %s | %.2f s%s\n", pass ? "PASS" : "FAIL", k, c.title, o.detail.c_str(), t,
                    in_time ? "" : " (over budget)");
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
