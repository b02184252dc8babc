#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlqe/distributions.hpp"
#include "mlqe/errors.hpp"
#include "mlqe/gof.hpp"
#include "mlqe/optimize.hpp"
#include "mlqe/random.hpp"
#include "mlqe/simulate.hpp"

namespace mlqe {

enum class DataFormat { LINES, CSV };

struct FormatSpec {
    DataFormat kind = DataFormat::LINES;
    std::string column;  // CSV header name
};

/// "lines" or "csv:COLUMN".
FormatSpec parse_format(const std::string& text);

/// Reads positive reals. LINES accepts any whitespace-separated numbers and
/// '#' comments. Throws DataError naming the offending line.
std::vector<double> load_data(const std::string& path, const FormatSpec& format = {});
std::vector<double> parse_data(std::istream& in, const FormatSpec& format = {});

enum class ContaminationMode { NONE, INLIERS, OUTLIERS, BOTH };

ContaminationMode parse_contamination(const std::string& text);

struct InlierRange {
    double a;
    double b;
    std::size_t count;
};

/// (min + 0.5, max - 0.5, 10).
InlierRange default_inlier_range(std::span<const double> data);

/// 100 draws from Uniform[5, 10].
InlierRange inlier_preset_uniform_5_10();

/// "A,B,COUNT".
InlierRange parse_inlier_range(const std::string& text);

/// OUTLIERS appends 2, 3, 4 and 5 times the maximum. INLIERS appends
/// `count` Uniform[a, b] draws. BOTH appends the outliers, then the inliers.
/// The input is never modified.
std::vector<double> inject_contamination(std::span<const double> data, ContaminationMode mode,
                                         const InlierRange& inliers, RandomStream& rng);

struct FitReport {
    std::string method;  // "MLE" or "MLqE"
    std::optional<double> q;
    double alpha_hat = 0.0;
    double beta_hat = 0.0;
    double objective_value = 0.0;
    double ks_statistic = 0.0;
    double ks_p_value = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double timing_ms = 0.0;

    bool operator==(const FitReport&) const = default;
};

/// Round to six significant digits, the precision of the report schema.
double round_sig6(double v);
FitReport rounded(const FitReport& report);

/// Flat JSON object keyed by the FitReport field names; numbers carry six
/// significant digits, q is null for MLE.
std::string to_json(const FitReport& report);
FitReport fit_report_from_json(const std::string& text);

/// Simulation design read from a key=value file.
struct DesignFile {
    ContaminationDesign design;
    std::vector<MethodSpec> methods;   // fixed-q runs
    std::vector<double> q_grid;        // non-empty: run a q grid search
    std::size_t replications = 1000;
    std::uint64_t seed = 1;
};

DesignFile parse_design(const std::string& text);
DesignFile load_design(const std::string& path);

/// "LO:HI:STEP" inclusive of HI up to rounding.
std::vector<double> parse_q_grid(const std::string& text);

/// Long-format CSV with a `section` column: cdf rows (x, empirical_cdf,
/// fitted_cdf_mle, fitted_cdf_mlqe) and hist rows (bin_lo, bin_hi, density,
/// fitted_pdf_mle, fitted_pdf_mlqe). Bins follow the Freedman-Diaconis rule.
std::string plot_data_csv(std::span<const double> data, const WeibullParams& mle, const WeibullParams& mlqe);

/// Parsed command-line options shared by the subcommands.
struct CliArgs {
    std::string data_path;
    std::string format = "lines";
    bool mle = false;
    std::optional<double> q;
    std::optional<std::string> q_grid;
    std::string contaminate = "none";
    std::optional<std::string> inlier_range;
    std::string design_path;
    std::optional<std::size_t> reps;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string plot_data_path;
    std::optional<std::string> ga;
    std::size_t threads = 0;
};

GaConfig ga_config_from_args(const CliArgs& args);

// Subcommand bodies. Primary output goes to `out` unless --out is set;
// secondary output (reports next to a CSV, progress) goes to `err`.
FitReport run_fit(const CliArgs& args, std::ostream& out, std::ostream& err);
std::vector<SimSummary> run_simulate(const CliArgs& args, std::ostream& out, std::ostream& err);
FitReport run_select_q(const CliArgs& args, std::ostream& out, std::ostream& err);
std::vector<double> run_inject(const CliArgs& args, std::ostream& out, std::ostream& err);

}  // namespace mlqe
