#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mlqe/simulate.hpp"

using namespace mlqe;
using Catch::Approx;

namespace {

GaConfig quick_ga() {
    GaConfig c;
    c.population_size = 40;
    c.generations = 60;
    return c;
}

}  // namespace

TEST_CASE("design validation and split") {
    ContaminationDesign d{{4, 2}, WeibullParams{1, 5}, 0.1, 100};
    CHECK(d.n1() == 10);
    CHECK(d.n0() == 90);
    d.epsilon = 0.0;
    CHECK(d.n1() == 0);
    d.epsilon = 1.0;
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
    ContaminationDesign u{{4, 2}, UniformParams{0, 1}, 0.1, 100};
    CHECK_THROWS_AS(u.validate(), std::invalid_argument);
}

TEST_CASE("contaminated samples") {
    RandomStream rng(1);
    const ContaminationDesign pure{{4, 2}, WeibullParams{1, 5}, 0.0, 100};
    CHECK(contaminated_sample(pure, rng).size() == 100);

    const ContaminationDesign u{{10, 1}, UniformParams{50, 60}, 0.1, 100};
    const auto xs = contaminated_sample(u, rng);
    CHECK(std::count_if(xs.begin(), xs.end(), [](double x) { return x >= 50.0; }) == 10);

    // Mixture mean: (1 - eps) mean(f0) + eps mean(f1) within a 3 sigma band over many samples.
    const ContaminationDesign d{{4, 2}, WeibullParams{1, 5}, 0.2, 50};
    const double m0 = 2.0 * std::tgamma(1.25), m1 = 5.0;
    const double want = 0.8 * m0 + 0.2 * m1;
    double sum = 0.0, sum2 = 0.0;
    const int reps = 4000;
    for (int r = 0; r < reps; ++r) {
        const auto s = contaminated_sample(d, rng);
        double m = 0.0;
        for (double x : s) m += x;
        m /= s.size();
        sum += m;
        sum2 += m * m;
    }
    const double mean = sum / reps;
    const double sd = std::sqrt(sum2 / reps - mean * mean);
    CHECK(std::fabs(mean - want) < 3.0 * sd / std::sqrt(double(reps)));
}

TEST_CASE("summary arithmetic") {
    const std::vector<WeibullParams> e{{1, 1}, {2, 2}, {3, 3}};
    const auto s = summarize(e, {2, 2}, MethodSpec::mle());
    CHECK(s.mean_alpha == Approx(2.0));
    CHECK(s.var_alpha == Approx(2.0 / 3.0));
    CHECK(s.mse_alpha == Approx(2.0 / 3.0));
    const auto t = summarize(e, {1, 2}, MethodSpec::mle());
    CHECK(t.mse_alpha == Approx(2.0 / 3.0 + 1.0));
    CHECK_THROWS(summarize({}, {1, 1}, MethodSpec::mle()));
}

TEST_CASE("replicate seeds are shared between methods") {
    CHECK(replicate_seeds(5, 3).data == replicate_seeds(6, 2).data);
    CHECK(replicate_seeds(5, 3).data != replicate_seeds(5, 4).data);
    CHECK(replicate_seeds(5, 3).ga != replicate_seeds(5, 3).data);
}

TEST_CASE("monte carlo is deterministic and thread-count independent") {
    const ContaminationDesign d{{4, 2}, WeibullParams{1, 5}, 0.1, 50};
    const auto a = monte_carlo(d, MethodSpec::mlqe(0.84), 12, 7, quick_ga(), 1);
    const auto b = monte_carlo(d, MethodSpec::mlqe(0.84), 12, 7, quick_ga(), 3);
    CHECK(a.mean_alpha == b.mean_alpha);
    CHECK(a.mse_beta == b.mse_beta);
    CHECK(a.replications == 12);
    CHECK(summaries_to_csv({a}) == summaries_to_csv({b}));
    CHECK_THROWS_AS(monte_carlo(d, MethodSpec::mlqe(1.0), 12, 7), std::invalid_argument);
}

TEST_CASE("MLqE beats MLE on a contaminated design") {
    const ContaminationDesign d{{4, 2}, WeibullParams{1, 5}, 0.1, 100};
    const auto mle = monte_carlo(d, MethodSpec::mle(), 40, 1, quick_ga());
    const auto mlqe = monte_carlo(d, MethodSpec::mlqe(0.84), 40, 1, quick_ga());
    CHECK(mlqe.mse_alpha < mle.mse_alpha);
}

TEST_CASE("q grid search") {
    const ContaminationDesign d{{4, 2}, WeibullParams{1, 5}, 0.1, 50};
    const auto r = q_grid_search(d, {0.84}, 5, 1, quick_ga());
    CHECK(r.q_star == 0.84);
    CHECK(r.table.size() == 1);
    CHECK_THROWS(q_grid_search(d, {}, 5, 1));

    const auto g = default_q_grid();
    CHECK(g.front() == Approx(0.60));
    CHECK(g.back() == Approx(1.15));
    CHECK(std::none_of(g.begin(), g.end(), [](double q) { return std::fabs(q - 1.0) < 0.015; }));
}

TEST_CASE("summary CSV") {
    SimSummary s;
    s.method = MethodSpec::mlqe(0.84);
    s.replications = 3;
    const std::string csv = summaries_to_csv({s});
    CHECK(csv.rfind("method,q,alpha_hat,beta_hat,var_alpha,var_beta,mse_alpha,mse_beta,replications\n", 0) == 0);
    CHECK(csv.find("MLqE,0.84,") != std::string::npos);
    s.method = MethodSpec::mle();
    CHECK(summaries_to_csv({s}).find("MLE,,") != std::string::npos);
}
