#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracstef/stefan.hpp"

namespace fracstef {

enum class Mode { SolveStefan, SolveMbp, Convergence, Monotonicity, Opcheck };

Mode parse_mode(const std::string& s);
std::string mode_name(Mode m);

struct RunConfig {
    std::optional<Mode> mode;
    StefanParams params;
    StefanOptions stefan;
    std::string init = "cap";   ///< zero | cap | custom
    double theta = 1.0;         ///< scale of the cap profile
    std::string samples_file;   ///< custom initial data, one value per line on the reference grid
    double front_speed = -1.0;  ///< solve-mbp: prescribed constant front speed, default M/2
    std::vector<double> thetas{0.5, 1.0};                  ///< monotonicity
    std::vector<std::size_t> ns{65, 129, 257, 513};        ///< opcheck
    int levels = 2;             ///< convergence: (n, dt), (2n, dt/2), ...
    double flux_tol = 1e-6;     ///< relative to M, upper side of the flux band
    double flux_band = 0.05;    ///< relative to M, lower side beyond -M/2
    std::size_t field_points = 33;  ///< spatial samples per time row in field.csv
    std::size_t field_times = 51;   ///< time rows in field.csv
    std::vector<std::pair<std::string, std::string>> echo;  ///< key/value pairs as read
};

/// Parse a flat key = value file with '#' comments. Throws ConfigError (parse
/// problems, with line number) or ValidationError (bad values, naming the field).
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

/// Initial data on the reference grid for the configured family.
GridFunction initial_data(const RunConfig& cfg, double theta);

struct Flag {
    std::string name;
    bool pass = true;
    double margin = 0.0;  ///< positive means satisfied by that much
    std::string detail;
};

struct RunReport {
    Mode mode = Mode::SolveStefan;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<Flag> flags;
    std::vector<std::pair<std::string, double>> values;  ///< informational measurements
    std::vector<std::vector<double>> residual_histories;
    std::string error_class;
    std::string error_message;
    double seconds = 0.0;
    int exit_code = 0;

    bool all_pass() const;
};

/// Execute the configured mode. When out_dir is set, writes front.csv,
/// field.csv and report.txt (plus mode tables) there.
RunReport run(const RunConfig& cfg, const std::optional<std::filesystem::path>& out_dir);

struct GrowthFit {
    double beta = 0.0;
    double c = 0.0;
    double r2 = 0.0;
};

/// Least-squares fit of log(s - b) against log t over samples with t in [t0, t1].
GrowthFit fit_growth(const BoundaryTrajectory& front, double t0, double t1);

/// Slope of log(err) against log(1/(n-1)), the empirical order over a refinement sequence.
double empirical_order(const std::vector<std::size_t>& ns, const std::vector<double>& errors);

/// Worker count: FRACSTEF_THREADS if set and positive, else the hardware concurrency.
unsigned worker_count();

/// 17 significant digits.
std::string fmt_double(double x);

}  // namespace fracstef
