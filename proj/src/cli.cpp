#include "mlqe/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace mlqe {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::optional<double> parse_full_double(const std::string& token) {
    const std::string t = trim(token);
    if (t.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) return std::nullopt;
    return v;
}

double require_double(const std::string& token, const std::string& what) {
    const auto v = parse_full_double(token);
    if (!v || !std::isfinite(*v)) throw UsageError(what + ": expected a number, got '" + token + "'");
    return *v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double check_value(double v, std::size_t line) {
    if (!std::isfinite(v)) throw DataError("line " + std::to_string(line) + ": value is not finite");
    if (!(v > 0.0))
        throw DataError("line " + std::to_string(line) + ": value " + shortest(v) +
                        " is not positive (Weibull support is x > 0)");
    return v;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw UsageError("cannot open output file '" + path + "'");
    return f;
}

// Type-7 sample quantile of sorted data.
double quantile_sorted(const std::vector<double>& s, double p) {
    const double h = (static_cast<double>(s.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

}  // namespace

FormatSpec parse_format(const std::string& text) {
    if (text == "lines") return {DataFormat::LINES, {}};
    if (text.rfind("csv:", 0) == 0 && text.size() > 4) return {DataFormat::CSV, text.substr(4)};
    throw UsageError("--format must be 'lines' or 'csv:COLUMN', got '" + text + "'");
}

std::vector<double> parse_data(std::istream& in, const FormatSpec& format) {
    std::vector<double> out;
    std::string line;
    std::size_t line_no = 0;
    if (format.kind == DataFormat::LINES) {
        while (std::getline(in, line)) {
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            std::string token;
            while (ls >> token) {
                const auto v = parse_full_double(token);
                if (!v) throw DataError("line " + std::to_string(line_no) + ": cannot parse '" + token + "'");
                out.push_back(check_value(*v, line_no));
            }
        }
    } else {
        std::optional<std::size_t> column;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            auto fields = split(line, ',');
            for (auto& f : fields) {
                f = trim(f);
                if (f.size() >= 2 && f.front() == '"' && f.back() == '"') f = f.substr(1, f.size() - 2);
            }
            if (!column) {
                const auto it = std::find(fields.begin(), fields.end(), format.column);
                if (it == fields.end()) throw DataError("CSV header has no column '" + format.column + "'");
                column = static_cast<std::size_t>(it - fields.begin());
                continue;
            }
            if (*column >= fields.size())
                throw DataError("line " + std::to_string(line_no) + ": missing column '" + format.column + "'");
            const auto v = parse_full_double(fields[*column]);
            if (!v) throw DataError("line " + std::to_string(line_no) + ": cannot parse '" + fields[*column] + "'");
            out.push_back(check_value(*v, line_no));
        }
        if (!column) throw DataError("CSV input has no header line");
    }
    if (out.empty()) throw DataError("no observations found");
    return out;
}

std::vector<double> load_data(const std::string& path, const FormatSpec& format) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open data file '" + path + "'");
    return parse_data(in, format);
}

ContaminationMode parse_contamination(const std::string& text) {
    if (text == "none") return ContaminationMode::NONE;
    if (text == "inliers") return ContaminationMode::INLIERS;
    if (text == "outliers") return ContaminationMode::OUTLIERS;
    if (text == "both") return ContaminationMode::BOTH;
    throw UsageError("--contaminate must be none, inliers, outliers or both");
}

InlierRange default_inlier_range(std::span<const double> data) {
    if (data.empty()) throw DataError("no observations to contaminate");
    const auto [mn, mx] = std::minmax_element(data.begin(), data.end());
    return {*mn + 0.5, *mx - 0.5, 10};
}

InlierRange inlier_preset_uniform_5_10() { return {5.0, 10.0, 100}; }

InlierRange parse_inlier_range(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw UsageError("--inlier-range expects A,B,COUNT");
    const double a = require_double(parts[0], "--inlier-range");
    const double b = require_double(parts[1], "--inlier-range");
    const double c = require_double(parts[2], "--inlier-range");
    if (!(c >= 1.0) || c != std::floor(c)) throw UsageError("--inlier-range COUNT must be a positive integer");
    return {a, b, static_cast<std::size_t>(c)};
}

std::vector<double> inject_contamination(std::span<const double> data, ContaminationMode mode,
                                         const InlierRange& inliers, RandomStream& rng) {
    if (data.empty()) throw DataError("no observations to contaminate");
    std::vector<double> out(data.begin(), data.end());
    const double mx = *std::max_element(data.begin(), data.end());
    if (mode == ContaminationMode::OUTLIERS || mode == ContaminationMode::BOTH)
        for (int k = 2; k <= 5; ++k) out.push_back(k * mx);
    if (mode == ContaminationMode::INLIERS || mode == ContaminationMode::BOTH) {
        if (!(inliers.a < inliers.b) || inliers.count < 1)
            throw UsageError("inlier range needs A < B and COUNT >= 1");
        if (!(inliers.a > 0.0)) throw UsageError("inlier range must lie in x > 0");
        const auto extra = uniform_sample(UniformParams(inliers.a, inliers.b), inliers.count, rng);
        out.insert(out.end(), extra.begin(), extra.end());
    }
    return out;
}

double round_sig6(double v) {
    if (!std::isfinite(v) || v == 0.0) return v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::strtod(buf, nullptr);
}

FitReport rounded(const FitReport& r) {
    FitReport o = r;
    if (o.q) o.q = round_sig6(*o.q);
    o.alpha_hat = round_sig6(o.alpha_hat);
    o.beta_hat = round_sig6(o.beta_hat);
    o.objective_value = round_sig6(o.objective_value);
    o.ks_statistic = round_sig6(o.ks_statistic);
    o.ks_p_value = round_sig6(o.ks_p_value);
    o.timing_ms = round_sig6(o.timing_ms);
    return o;
}

std::string to_json(const FitReport& report) {
    const FitReport r = rounded(report);
    nlohmann::ordered_json j;
    j["method"] = r.method;
    j["q"] = r.q ? nlohmann::ordered_json(*r.q) : nlohmann::ordered_json(nullptr);
    j["alpha_hat"] = r.alpha_hat;
    j["beta_hat"] = r.beta_hat;
    j["objective_value"] = r.objective_value;
    j["ks_statistic"] = r.ks_statistic;
    j["ks_p_value"] = r.ks_p_value;
    j["n"] = r.n;
    j["seed"] = r.seed;
    j["timing_ms"] = r.timing_ms;
    return j.dump();
}

FitReport fit_report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("report is not valid JSON: ") + e.what());
    }
    try {
        FitReport r;
        r.method = j.at("method").get<std::string>();
        if (!j.at("q").is_null()) r.q = j.at("q").get<double>();
        r.alpha_hat = j.at("alpha_hat").get<double>();
        r.beta_hat = j.at("beta_hat").get<double>();
        r.objective_value = j.at("objective_value").get<double>();
        r.ks_statistic = j.at("ks_statistic").get<double>();
        r.ks_p_value = j.at("ks_p_value").get<double>();
        r.n = j.at("n").get<std::size_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.timing_ms = j.at("timing_ms").get<double>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("report is missing a field: ") + e.what());
    }
}

std::vector<double> parse_q_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("q grid must be LO:HI:STEP");
    const double lo = require_double(parts[0], "q grid");
    const double hi = require_double(parts[1], "q grid");
    const double step = require_double(parts[2], "q grid");
    if (!(step > 0.0) || hi < lo) throw UsageError("q grid needs STEP > 0 and LO <= HI");
    std::vector<double> grid;
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= count; ++k) {
        // Round to 12 digits so 0.7 + 3 * 0.01 prints as 0.73.
        const double q = std::round((lo + k * step) * 1e12) / 1e12;
        if (q == 1.0) continue;
        if (!(q > 0.0)) throw UsageError("q grid values must be > 0");
        grid.push_back(q);
    }
    if (grid.empty()) throw UsageError("q grid is empty");
    return grid;
}

namespace {

WeibullParams parse_weibull(const std::vector<std::string>& w, const std::string& key) {
    if (w.size() != 3) throw UsageError("design: " + key + " = weibull ALPHA BETA");
    return {require_double(w[1], key), require_double(w[2], key)};
}

}  // namespace

DesignFile parse_design(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("design line " + std::to_string(line_no) + ": expected key = value");
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        kv[trim(line.substr(0, eq))] = value;
    }
    auto words = [](const std::string& s) {
        std::istringstream ss(s);
        std::vector<std::string> out;
        std::string w;
        while (ss >> w) out.push_back(lower(w));
        return out;
    };
    auto take = [&](const std::string& key) -> std::optional<std::string> {
        const auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    const auto f0_text = take("f0");
    if (!f0_text) throw UsageError("design: f0 is required");
    const auto f0w = words(*f0_text);
    if (f0w.empty() || f0w[0] != "weibull") throw UsageError("design: f0 must be a weibull distribution");
    const WeibullParams f0 = parse_weibull(f0w, "f0");

    Contaminant f1 = f0;
    double epsilon = 0.0;
    if (const auto f1_text = take("f1")) {
        const auto w = words(*f1_text);
        if (w.empty()) throw UsageError("design: f1 is empty");
        if (w[0] == "weibull") f1 = parse_weibull(w, "f1");
        else if (w[0] == "uniform" && w.size() == 3) f1 = UniformParams(require_double(w[1], "f1"), require_double(w[2], "f1"));
        else if ((w[0] == "burr3" || w[0] == "burriii") && w.size() == 3)
            f1 = BurrIIIParams(require_double(w[1], "f1"), require_double(w[2], "f1"));
        else if (w[0] != "none") throw UsageError("design: f1 must be weibull A B, uniform A B, burr3 C K or none");
    }
    if (const auto e = take("epsilon")) epsilon = require_double(*e, "epsilon");
    std::size_t n = 100;
    if (const auto v = take("n")) n = static_cast<std::size_t>(require_double(*v, "n"));

    DesignFile out{ContaminationDesign{f0, f1, epsilon, n}, {}, {}, 1000, 1};
    try {
        out.design.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("design: ") + e.what());
    }
    if (const auto v = take("replications")) out.replications = static_cast<std::size_t>(require_double(*v, "replications"));
    if (const auto v = take("seed")) out.seed = static_cast<std::uint64_t>(require_double(*v, "seed"));
    std::optional<double> q;
    if (const auto v = take("q")) q = require_double(*v, "q");
    if (const auto v = take("q_grid")) out.q_grid = parse_q_grid(*v);
    const std::string method = lower(take("method").value_or(q ? "both" : "mle"));
    if (method == "mle" || method == "both") out.methods.push_back(MethodSpec::mle());
    if (method == "mlqe" || method == "both") {
        if (!q && out.q_grid.empty()) throw UsageError("design: method " + method + " needs q or q_grid");
        if (q) out.methods.push_back(MethodSpec::mlqe(*q));
    } else if (method != "mle") {
        throw UsageError("design: method must be mle, mlqe or both");
    }
    if (!kv.empty()) throw UsageError("design: unknown key '" + kv.begin()->first + "'");
    return out;
}

DesignFile load_design(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open design file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_design(ss.str());
}

std::string plot_data_csv(std::span<const double> data, const WeibullParams& mle, const WeibullParams& mlqe) {
    if (data.empty()) throw DataError("no observations to plot");
    std::vector<double> s(data.begin(), data.end());
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    std::ostringstream os;
    os << "section,x,empirical_cdf,fitted_cdf_mle,fitted_cdf_mlqe,bin_lo,bin_hi,density,fitted_pdf_mle,fitted_pdf_mlqe\n";
    for (std::size_t i = 0; i < n; ++i) {
        // Report each distinct x once, at the top of its step.
        if (i + 1 < n && s[i + 1] == s[i]) continue;
        os << "cdf," << shortest(s[i]) << ',' << shortest(static_cast<double>(i + 1) / static_cast<double>(n)) << ','
           << shortest(weibull_cdf(s[i], mle)) << ',' << shortest(weibull_cdf(s[i], mlqe)) << ",,,,,\n";
    }

    const double range = s.back() - s.front();
    std::size_t bins = 1;
    if (range > 0.0) {
        const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
        const double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
        bins = width > 0.0 ? static_cast<std::size_t>(std::ceil(range / width))
                           : static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n)) + 1.0));
        bins = std::clamp<std::size_t>(bins, 1, 1000);
    }
    const double lo = s.front();
    const double width = range > 0.0 ? range / static_cast<double>(bins) : 1.0;
    std::vector<std::size_t> counts(bins, 0);
    for (double x : s) {
        auto k = range > 0.0 ? static_cast<std::size_t>((x - lo) / width) : 0;
        counts[std::min(k, bins - 1)]++;
    }
    for (std::size_t k = 0; k < bins; ++k) {
        const double a = lo + width * static_cast<double>(k);
        const double b = k + 1 == bins && range > 0.0 ? s.back() : a + width;
        const double mid = 0.5 * (a + b);
        const double density = static_cast<double>(counts[k]) / (static_cast<double>(n) * (b - a));
        os << "hist,,,,," << shortest(a) << ',' << shortest(b) << ',' << shortest(density) << ','
           << shortest(weibull_pdf(mid, mle)) << ',' << shortest(weibull_pdf(mid, mlqe)) << '\n';
    }
    return os.str();
}

GaConfig ga_config_from_args(const CliArgs& args) {
    GaConfig base;
    base.seed = args.seed.value_or(1);
    if (!args.ga) return base;
    try {
        return GaConfig::from_text(*args.ga, base);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--ga: ") + e.what());
    }
}

namespace {

std::vector<double> load_with_contamination(const CliArgs& args) {
    if (args.data_path.empty()) throw UsageError("--data is required");
    const auto data = load_data(args.data_path, parse_format(args.format));
    const ContaminationMode mode = parse_contamination(args.contaminate);
    if (mode == ContaminationMode::NONE) {
        if (args.inlier_range) throw UsageError("--inlier-range needs --contaminate inliers or both");
        return data;
    }
    const InlierRange range = args.inlier_range ? parse_inlier_range(*args.inlier_range) : default_inlier_range(data);
    RandomStream rng(mix_seed(args.seed.value_or(1)));
    return inject_contamination(data, mode, range, rng);
}

FitReport make_report(const std::string& method, std::optional<double> q, const FitResult& fit,
                      std::span<const double> data, std::uint64_t seed, double ms) {
    const KsResult ks = ks_test(data, fit.theta_hat);
    FitReport r;
    r.method = method;
    r.q = q;
    r.alpha_hat = fit.theta_hat.alpha;
    r.beta_hat = fit.theta_hat.beta;
    r.objective_value = fit.objective_value;
    r.ks_statistic = ks.statistic;
    r.ks_p_value = ks.p_value;
    r.n = data.size();
    r.seed = seed;
    r.timing_ms = ms;
    return r;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

void write_primary(const CliArgs& args, std::ostream& out, const std::string& text) {
    if (args.out_path.empty()) {
        out << text;
        return;
    }
    auto f = open_output(args.out_path);
    f << text;
}

void write_plot_data(const CliArgs& args, std::span<const double> data, const WeibullParams& mle,
                     const WeibullParams& mlqe) {
    auto f = open_output(args.plot_data_path);
    f << plot_data_csv(data, mle, mlqe);
}

}  // namespace

FitReport run_fit(const CliArgs& args, std::ostream& out, std::ostream&) {
    if (args.mle && args.q) throw UsageError("--mle and --q are mutually exclusive");
    if (args.q && (!(*args.q > 0.0) || *args.q == 1.0)) throw UsageError("--q must be > 0 and != 1 (use --mle for q = 1)");
    const auto data = load_with_contamination(args);
    const GaConfig ga = ga_config_from_args(args);

    const auto start = std::chrono::steady_clock::now();
    const FitResult fit = args.q ? fit_mlqe(data, *args.q, ga) : fit_mle(data, ga);
    const double ms = elapsed_ms(start);
    const FitReport report = make_report(args.q ? "MLqE" : "MLE", args.q, fit, data, ga.seed, ms);
    write_primary(args, out, to_json(report) + "\n");

    if (!args.plot_data_path.empty()) {
        // The plot compares both estimators; MLqE uses --q, or 0.8 when fitting by MLE.
        const FitResult other = args.q ? fit_mle(data, ga) : fit_mlqe(data, 0.8, ga);
        const WeibullParams& mle = args.q ? other.theta_hat : fit.theta_hat;
        const WeibullParams& mlqe = args.q ? fit.theta_hat : other.theta_hat;
        write_plot_data(args, data, mle, mlqe);
    }
    return report;
}

std::vector<SimSummary> run_simulate(const CliArgs& args, std::ostream& out, std::ostream& err) {
    if (args.design_path.empty()) throw UsageError("--design is required");
    if (args.mle && args.q) throw UsageError("--mle and --q are mutually exclusive");
    DesignFile design = load_design(args.design_path);
    if (args.reps) design.replications = *args.reps;
    if (args.seed) design.seed = *args.seed;
    if (args.mle) {
        design.methods = {MethodSpec::mle()};
        design.q_grid.clear();
    }
    if (args.q) {
        if (!(*args.q > 0.0) || *args.q == 1.0) throw UsageError("--q must be > 0 and != 1");
        design.methods = {MethodSpec::mle(), MethodSpec::mlqe(*args.q)};
        design.q_grid.clear();
    }
    if (args.q_grid) design.q_grid = parse_q_grid(*args.q_grid);
    if (design.replications < 2) throw UsageError("--reps must be >= 2");

    GaConfig ga;
    if (args.ga) {
        try {
            ga = GaConfig::from_text(*args.ga, ga);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--ga: ") + e.what());
        }
    }

    std::vector<SimSummary> rows;
    for (const auto& m : design.methods)
        rows.push_back(monte_carlo(design.design, m, design.replications, design.seed, ga, args.threads));
    if (!design.q_grid.empty()) {
        const QGridResult grid =
            q_grid_search(design.design, design.q_grid, design.replications, design.seed, ga, args.threads);
        rows.insert(rows.end(), grid.table.begin(), grid.table.end());
        err << "{\"q_star\":" << shortest(grid.q_star) << "}\n";
    }
    write_primary(args, out, summaries_to_csv(rows));
    return rows;
}

FitReport run_select_q(const CliArgs& args, std::ostream& out, std::ostream& err) {
    if (args.mle) throw UsageError("select-q does not take --mle");
    if (args.q) throw UsageError("select-q takes --q-grid, not --q");
    const auto data = load_with_contamination(args);
    const GaConfig ga = ga_config_from_args(args);
    const std::vector<double> grid = args.q_grid ? parse_q_grid(*args.q_grid) : default_q_grid();

    const auto start = std::chrono::steady_clock::now();
    const QSelection sel = select_q_by_ks(data, grid, ga);
    const double ms = elapsed_ms(start);
    const FitReport report = make_report("MLqE", sel.q_star, sel.best_fit, data, ga.seed, ms);

    write_primary(args, out, selection_to_csv(sel));
    (args.out_path.empty() ? err : out) << to_json(report) << '\n';

    if (!args.plot_data_path.empty()) {
        const FitResult mle = fit_mle(data, ga);
        write_plot_data(args, data, mle.theta_hat, sel.best_fit.theta_hat);
    }
    return report;
}

std::vector<double> run_inject(const CliArgs& args, std::ostream& out, std::ostream&) {
    if (!args.out_path.empty() && !args.data_path.empty()) {
        std::error_code ec;
        if (std::filesystem::equivalent(args.out_path, args.data_path, ec))
            throw UsageError("--out must differ from --data; the input file is never modified");
    }
    const auto data = load_with_contamination(args);
    std::ostringstream os;
    for (double x : data) os << shortest(x) << '\n';
    write_primary(args, out, os.str());
    return data;
}

}  // namespace mlqe
