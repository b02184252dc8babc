#include "mlqe/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mlqe/random.hpp"
#include "mlqe/special.hpp"

namespace mlqe {

namespace {

struct Scored {
    std::vector<double> x;
    Evaluation eval;
};

Evaluation sanitize(Evaluation e) {
    if (!std::isfinite(e.value)) {
        e.value = -std::numeric_limits<double>::infinity();
        e.cliffed = true;
    }
    return e;
}

// Non-cliffed beats cliffed, then larger value, then lexicographically smaller point.
bool better(const Scored& a, const Scored& b) {
    if (a.eval.cliffed != b.eval.cliffed) return !a.eval.cliffed;
    if (a.eval.value != b.eval.value) return a.eval.value > b.eval.value;
    return std::lexicographical_compare(a.x.begin(), a.x.end(), b.x.begin(), b.x.end());
}

void clamp_to_box(std::vector<double>& x, const std::vector<double>& lo, const std::vector<double>& hi) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
}

// Reflect once off the violated bound, then clamp.
double reflect(double v, double lo, double hi) {
    if (v < lo) v = lo + (lo - v);
    if (v > hi) v = hi - (v - hi);
    return std::clamp(v, lo, hi);
}

std::string join(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ":" : "") << v[i];
    return os.str();
}

std::vector<double> parse_vector(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument("GA config: bad number in " + key + ": '" + item + "'");
        }
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    const auto v = parse_vector(key, value);
    if (v.size() != 1) throw std::invalid_argument("GA config: " + key + " expects one number");
    return v[0];
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size() || value.find('-') != std::string::npos) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("GA config: " + key + " expects a non-negative integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("GA config: " + key + " expects true or false");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void GaConfig::validate() const {
    if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
    if (elite_count >= population_size) throw std::invalid_argument("elite_count must be < population_size");
    if (tournament_size < 1) throw std::invalid_argument("tournament_size must be >= 1");
    if (!(crossover_rate > 0.0 && crossover_rate <= 1.0)) throw std::invalid_argument("crossover_rate must be in (0, 1]");
    if (!(mutation_sigma_fraction >= 0.0)) throw std::invalid_argument("mutation_sigma_fraction must be >= 0");
    if (bounds_lo.empty() || bounds_lo.size() != bounds_hi.size())
        throw std::invalid_argument("bounds_lo and bounds_hi must be non-empty and the same length");
    for (std::size_t i = 0; i < bounds_lo.size(); ++i)
        if (!(bounds_lo[i] < bounds_hi[i]) || !std::isfinite(bounds_lo[i]) || !std::isfinite(bounds_hi[i]))
            throw std::invalid_argument("bounds_lo must be below bounds_hi in every dimension");
    if (!(polish_tolerance > 0.0)) throw std::invalid_argument("polish_tolerance must be > 0");
    if (!(stall_tolerance >= 0.0)) throw std::invalid_argument("stall_tolerance must be >= 0");
}

std::string GaConfig::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "population_size=" << population_size << '\n'
       << "generations=" << generations << '\n'
       << "crossover=single_point\n"
       << "crossover_rate=" << crossover_rate << '\n'
       << "mutation_sigma_fraction=" << mutation_sigma_fraction << '\n'
       << "elite_count=" << elite_count << '\n'
       << "tournament_size=" << tournament_size << '\n'
       << "bounds_lo=" << join(bounds_lo) << '\n'
       << "bounds_hi=" << join(bounds_hi) << '\n'
       << "seed=" << seed << '\n'
       << "polish=" << (polish ? "true" : "false") << '\n'
       << "polish_tolerance=" << polish_tolerance << '\n'
       << "stall_generations=" << stall_generations << '\n'
       << "stall_tolerance=" << stall_tolerance << '\n';
    return os.str();
}

GaConfig GaConfig::from_text(const std::string& text, const GaConfig& base) {
    GaConfig c = base;
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', '\n');
    std::stringstream ss(normalized);
    std::string line;
    while (std::getline(ss, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("GA config: expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "population_size") c.population_size = parse_count(key, value);
        else if (key == "generations") c.generations = parse_count(key, value);
        else if (key == "crossover") {
            if (value != "single_point") throw std::invalid_argument("GA config: only crossover=single_point is supported");
            c.crossover = Crossover::SINGLE_POINT;
        } else if (key == "crossover_rate") c.crossover_rate = parse_double(key, value);
        else if (key == "mutation_sigma_fraction") c.mutation_sigma_fraction = parse_double(key, value);
        else if (key == "elite_count") c.elite_count = parse_count(key, value);
        else if (key == "tournament_size") c.tournament_size = parse_count(key, value);
        else if (key == "bounds_lo") c.bounds_lo = parse_vector(key, value);
        else if (key == "bounds_hi") c.bounds_hi = parse_vector(key, value);
        else if (key == "seed") c.seed = parse_count(key, value);
        else if (key == "polish") c.polish = parse_bool(key, value);
        else if (key == "polish_tolerance") c.polish_tolerance = parse_double(key, value);
        else if (key == "stall_generations") c.stall_generations = parse_count(key, value);
        else if (key == "stall_tolerance") c.stall_tolerance = parse_double(key, value);
        else throw std::invalid_argument("GA config: unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

GaConfig GaConfig::from_text(const std::string& text) { return from_text(text, GaConfig{}); }

SimplexResult simplex_maximize(const Objective& objective, std::vector<double> start, const std::vector<double>& lo,
                               const std::vector<double>& hi, double step, double tolerance,
                               std::size_t max_evaluations) {
    const std::size_t d = start.size();
    SimplexResult out;
    auto eval = [&](std::vector<double> x) {
        clamp_to_box(x, lo, hi);
        ++out.evaluations;
        return Scored{x, sanitize(objective(x))};
    };

    clamp_to_box(start, lo, hi);
    std::vector<Scored> simplex;
    simplex.push_back(eval(start));
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> v = start;
        // Step inward if the vertex would leave the box.
        v[i] = v[i] + step <= hi[i] ? v[i] + step : v[i] - step;
        simplex.push_back(eval(v));
    }

    while (out.evaluations < max_evaluations) {
        std::sort(simplex.begin(), simplex.end(), better);
        const Scored& best = simplex.front();
        const Scored& worst = simplex.back();

        double x_spread = 0.0;
        double x_scale = 0.0;
        for (std::size_t i = 1; i <= d; ++i)
            for (std::size_t j = 0; j < d; ++j) x_spread = std::max(x_spread, std::fabs(simplex[i].x[j] - best.x[j]));
        for (double v : best.x) x_scale = std::max(x_scale, std::fabs(v));
        const bool flat = !worst.eval.cliffed &&
                          std::fabs(best.eval.value - worst.eval.value) <= tolerance * (1.0 + std::fabs(best.eval.value));
        if (flat && x_spread <= tolerance * (1.0 + x_scale)) {
            out.converged = true;
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i].x[j] / static_cast<double>(d);
        auto along = [&](double t) {
            std::vector<double> p(d);
            for (std::size_t j = 0; j < d; ++j) p[j] = centroid[j] + t * (worst.x[j] - centroid[j]);
            return p;
        };

        const Scored reflected = eval(along(-1.0));
        if (better(reflected, simplex[d - 1]) && !better(reflected, best)) {
            simplex.back() = reflected;
            continue;
        }
        if (better(reflected, best)) {
            const Scored expanded = eval(along(-2.0));
            simplex.back() = better(expanded, reflected) ? expanded : reflected;
            continue;
        }
        const bool outside = better(reflected, worst);
        const Scored contracted = eval(along(outside ? -0.5 : 0.5));
        if (better(contracted, outside ? reflected : worst)) {
            simplex.back() = contracted;
            continue;
        }
        for (std::size_t i = 1; i <= d; ++i) {
            std::vector<double> p(d);
            for (std::size_t j = 0; j < d; ++j) p[j] = simplex[0].x[j] + 0.5 * (simplex[i].x[j] - simplex[0].x[j]);
            simplex[i] = eval(p);
        }
    }
    std::sort(simplex.begin(), simplex.end(), better);
    out.best = simplex.front().x;
    out.value = simplex.front().eval;
    return out;
}

GaResult ga_maximize(const Objective& objective, const GaConfig& config,
                     const std::vector<std::vector<double>>& initial) {
    config.validate();
    const std::size_t d = config.bounds_lo.size();
    const auto& lo = config.bounds_lo;
    const auto& hi = config.bounds_hi;
    const std::size_t pop_size = config.population_size;
    RandomStream rng(config.seed);

    GaResult result;
    bool any_feasible = false;
    auto evaluate = [&](std::vector<double> x) {
        Scored s{std::move(x), {}};
        ++result.evaluations;
        s.eval = sanitize(objective(s.x));
        if (!s.eval.cliffed) any_feasible = true;
        return s;
    };

    std::vector<Scored> population;
    population.reserve(pop_size);
    for (const auto& row : initial) {
        if (population.size() == pop_size) break;
        if (row.size() != d) throw std::invalid_argument("initial population row has wrong dimension");
        std::vector<double> x = row;
        clamp_to_box(x, lo, hi);
        population.push_back(evaluate(std::move(x)));
    }
    while (population.size() < pop_size) {
        std::vector<double> x(d);
        for (std::size_t j = 0; j < d; ++j) x[j] = rng.uniform(lo[j], hi[j]);
        population.push_back(evaluate(std::move(x)));
    }
    std::sort(population.begin(), population.end(), better);
    Scored best = population.front();

    auto tournament = [&]() -> const Scored& {
        std::size_t pick = rng.below(pop_size);
        for (std::size_t k = 1; k < config.tournament_size; ++k) {
            const std::size_t other = rng.below(pop_size);
            if (better(population[other], population[pick])) pick = other;
        }
        return population[pick];
    };

    std::size_t stall = 0;
    for (std::size_t gen = 0; gen < config.generations; ++gen) {
        const double shrink = 1.0 - static_cast<double>(gen) / static_cast<double>(config.generations);
        std::vector<Scored> next;
        next.reserve(pop_size);
        for (std::size_t e = 0; e < config.elite_count; ++e) next.push_back(population[e]);
        while (next.size() < pop_size) {
            const Scored& p1 = tournament();
            std::vector<double> child;
            if (rng.uniform() < config.crossover_rate) {
                const Scored& p2 = tournament();
                child = p1.x;
                if (d > 1) {
                    const std::size_t cut = 1 + rng.below(d - 1);
                    for (std::size_t j = cut; j < d; ++j) child[j] = p2.x[j];
                } else if (rng.uniform() < 0.5) {
                    child = p2.x;
                }
            } else {
                child = p1.x;
                for (std::size_t j = 0; j < d; ++j) {
                    const double sigma = config.mutation_sigma_fraction * (hi[j] - lo[j]) * shrink;
                    child[j] = reflect(child[j] + sigma * rng.normal(), lo[j], hi[j]);
                }
            }
            next.push_back(evaluate(std::move(child)));
        }
        population = std::move(next);
        std::sort(population.begin(), population.end(), better);

        const Scored& gen_best = population.front();
        const bool improved =
            better(gen_best, best) &&
            (best.eval.cliffed != gen_best.eval.cliffed ||
             gen_best.eval.value - best.eval.value > config.stall_tolerance * (1.0 + std::fabs(best.eval.value)));
        if (better(gen_best, best)) best = gen_best;
        result.best_history.push_back(best.eval.value);
        result.generations_run = gen + 1;
        stall = improved ? 0 : stall + 1;
        if (config.stall_generations > 0 && stall >= config.stall_generations) {
            result.converged = true;
            break;
        }
    }

    if (!any_feasible) throw FitError("every evaluated point hit the numerical floor");

    if (config.polish) {
        double step = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < d; ++j) step = std::min(step, 0.01 * (hi[j] - lo[j]));
        const SimplexResult polished =
            simplex_maximize(objective, best.x, lo, hi, step, config.polish_tolerance);
        result.evaluations += polished.evaluations;
        const Scored candidate{polished.best, polished.value};
        if (!better(best, candidate)) {
            result.polish_applied = candidate.x != best.x;
            best = candidate;
        }
        result.converged = polished.converged;
    }

    result.best = best.x;
    result.value = best.eval.value;
    return result;
}

WeibullParams log_moment_start(std::span<const double> data) {
    if (data.size() < 2) throw DataError("at least two observations are needed");
    double mean = 0.0;
    for (double x : data) {
        if (!(x > 0.0) || !std::isfinite(x)) throw DataError("observations must be finite and > 0");
        mean += std::log(x);
    }
    mean /= static_cast<double>(data.size());
    double var = 0.0;
    for (double x : data) var += (std::log(x) - mean) * (std::log(x) - mean);
    var /= static_cast<double>(data.size() - 1);
    if (!(var > 0.0)) throw DataError("all observations are equal; the Weibull fit is degenerate");
    const double alpha = special::kPi / std::sqrt(6.0 * var);
    return {alpha, std::exp(mean + special::kEulerGamma / alpha)};
}

namespace {

template <typename Eval>
FitResult fit_weibull(std::span<const double> data, const GaConfig& config, Eval&& evaluate,
                      const ObjectiveSpec& spec) {
    const WeibullParams start = log_moment_start(data);
    if (config.bounds_lo.size() != 2 || config.bounds_hi.size() != 2)
        throw std::invalid_argument("Weibull fits need two-dimensional bounds");
    if (!(config.bounds_lo[0] > 0.0 && config.bounds_lo[1] > 0.0))
        throw std::invalid_argument("Weibull fit bounds must be positive");

    const PreparedSample sample(data);
    GaConfig log_config = config;
    for (std::size_t j = 0; j < 2; ++j) {
        log_config.bounds_lo[j] = std::log(config.bounds_lo[j]);
        log_config.bounds_hi[j] = std::log(config.bounds_hi[j]);
    }
    const Objective objective = [&](std::span<const double> g) {
        return evaluate(std::exp(g[0]), std::exp(g[1]), sample);
    };
    const std::vector<std::vector<double>> seeds{{std::log(start.alpha), std::log(start.beta)}};
    const GaResult ga = ga_maximize(objective, log_config, seeds);

    const WeibullParams theta(std::exp(ga.best[0]), std::exp(ga.best[1]));
    ScoreVector residual;
    try {
        residual = ee_residual(theta, data, spec);
    } catch (const std::exception&) {
        residual = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    }
    return {theta, ga.value, ga.evaluations, ga.converged, ga.polish_applied, residual};
}

}  // namespace

FitResult fit_mle(std::span<const double> data, const GaConfig& config) {
    return fit_weibull(
        data, config, [](double a, double b, const PreparedSample& s) { return loglik_evaluation(a, b, s); },
        ObjectiveSpec::log());
}

FitResult fit_mlqe(std::span<const double> data, double q, const GaConfig& config) {
    if (!(q > 0.0) || q == 1.0 || !std::isfinite(q)) throw std::invalid_argument("MLqE needs q > 0 and q != 1");
    return fit_weibull(
        data, config, [q](double a, double b, const PreparedSample& s) { return logq_evaluation(a, b, s, q); },
        ObjectiveSpec::log_q(q));
}

}  // namespace mlqe
