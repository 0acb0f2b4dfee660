#include "fracstef/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "fracstef/resolvent.hpp"

namespace fracstef {

namespace {

const std::map<std::string, Mode>& mode_table() {
    static const std::map<std::string, Mode> t = {{"solve-stefan", Mode::SolveStefan},
                                                  {"solve-mbp", Mode::SolveMbp},
                                                  {"convergence", Mode::Convergence},
                                                  {"monotonicity", Mode::Monotonicity},
                                                  {"opcheck", Mode::Opcheck}};
    return t;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x))
        throw ValidationError(key + ": expected a number, got '" + v + "'");
    return x;
}

long to_int(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size()) throw ValidationError(key + ": expected an integer, got '" + v + "'");
    return x;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

Mode parse_mode(const std::string& s) {
    const auto it = mode_table().find(s);
    if (it == mode_table().end()) throw ValidationError("mode: unknown mode '" + s + "'");
    return it->second;
}

std::string mode_name(Mode m) {
    for (const auto& [k, v] : mode_table())
        if (v == m) return k;
    return "unknown";
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    bool have_alpha = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (seen.count(key))
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "' (first on line " +
                              std::to_string(seen[key]) + ")");
        seen[key] = lineno;
        cfg.echo.emplace_back(key, val);

        if (key == "mode") cfg.mode = parse_mode(val);
        else if (key == "alpha") { cfg.params.alpha = to_double(key, val); have_alpha = true; }
        else if (key == "b") cfg.params.b = to_double(key, val);
        else if (key == "M") cfg.params.M = to_double(key, val);
        else if (key == "T") cfg.params.T = to_double(key, val);
        else if (key == "n") {
            const long n = to_int(key, val);
            if (n < 5) throw ValidationError("n: needs at least 5 nodes");
            cfg.params.n = static_cast<std::size_t>(n);
        }
        else if (key == "dt") cfg.params.dt = to_double(key, val);
        else if (key == "init") cfg.init = val;
        else if (key == "theta") cfg.theta = to_double(key, val);
        else if (key == "samples_file") cfg.samples_file = val;
        else if (key == "front_speed") cfg.front_speed = to_double(key, val);
        else if (key == "thetas") {
            cfg.thetas.clear();
            for (const auto& s : split_list(val)) cfg.thetas.push_back(to_double(key, s));
        }
        else if (key == "ns") {
            cfg.ns.clear();
            for (const auto& s : split_list(val)) {
                const long n = to_int(key, s);
                if (n < 5) throw ValidationError("ns: every entry needs at least 5 nodes");
                cfg.ns.push_back(static_cast<std::size_t>(n));
            }
        }
        else if (key == "levels") cfg.levels = static_cast<int>(to_int(key, val));
        else if (key == "tol") cfg.stefan.tol_rel = to_double(key, val);
        else if (key == "max_iters") cfg.stefan.max_iters = static_cast<int>(to_int(key, val));
        else if (key == "omega") cfg.stefan.omega = to_double(key, val);
        else if (key == "windows") cfg.stefan.windows = static_cast<int>(to_int(key, val));
        else if (key == "flux_tol") cfg.flux_tol = to_double(key, val);
        else if (key == "flux_band") cfg.flux_band = to_double(key, val);
        else if (key == "field_points") cfg.field_points = static_cast<std::size_t>(std::max(2L, to_int(key, val)));
        else if (key == "field_times") cfg.field_times = static_cast<std::size_t>(std::max(2L, to_int(key, val)));
        else throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }

    if (!have_alpha) throw ValidationError("alpha: missing");
    cfg.params.validate();
    if (!(cfg.theta > 0.0 && cfg.theta <= 1.0)) throw ValidationError("theta out of (0,1]");
    for (double t : cfg.thetas)
        if (!(t > 0.0 && t <= 1.0)) throw ValidationError("thetas: theta out of (0,1]");
    if (cfg.thetas.empty()) throw ValidationError("thetas: empty list");
    if (cfg.ns.size() < 2) throw ValidationError("ns: need at least two resolutions");
    if (cfg.init != "zero" && cfg.init != "cap" && cfg.init != "custom")
        throw ValidationError("init: expected zero, cap or custom");
    if (cfg.init == "custom" && cfg.samples_file.empty()) throw ValidationError("samples_file: required for init = custom");
    if (cfg.levels < 2) throw ValidationError("levels: need at least 2");
    if (!(cfg.stefan.tol_rel > 0.0)) throw ValidationError("tol: must be positive");
    if (cfg.stefan.max_iters < 1) throw ValidationError("max_iters: must be at least 1");
    if (!(cfg.stefan.omega > 0.0 && cfg.stefan.omega <= 1.0)) throw ValidationError("omega: must lie in (0,1]");
    if (cfg.stefan.windows < 0) throw ValidationError("windows: must be >= 0");
    if (cfg.front_speed > cfg.params.M) throw ValidationError("front_speed: exceeds M");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

GridFunction initial_data(const RunConfig& cfg, double theta) {
    const Grid grid(cfg.params.n);
    if (cfg.init == "zero") return GridFunction(grid);
    if (cfg.init == "cap") return scaled_cap(grid, cfg.params.alpha, cfg.params.b, cfg.params.M, theta);
    std::ifstream in(cfg.samples_file);
    if (!in) throw ConfigError("cannot read samples file '" + cfg.samples_file + "'");
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        v.push_back(to_double("samples_file", line));
    }
    if (v.size() != grid.n())
        throw ValidationError("samples_file: expected " + std::to_string(grid.n()) + " values, got " + std::to_string(v.size()));
    for (double& x : v) x *= theta;
    return GridFunction(grid, std::move(v));
}

bool RunReport::all_pass() const {
    return std::all_of(flags.begin(), flags.end(), [](const Flag& f) { return f.pass; });
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

unsigned worker_count() {
    if (const char* env = std::getenv("FRACSTEF_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

GrowthFit fit_growth(const BoundaryTrajectory& front, double t0, double t1) {
    const double b = front.s.front();
    std::vector<double> x, y;
    for (std::size_t k = 0; k < front.size(); ++k) {
        const double t = front.times[k];
        const double d = front.s[k] - b;
        if (t >= t0 && t <= t1 && t > 0.0 && d > 0.0) {
            x.push_back(std::log(t));
            y.push_back(std::log(d));
        }
    }
    if (x.size() < 2) throw DomainError("fit error: fewer than two usable samples in the window");
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("fit error: degenerate time window");
    GrowthFit f;
    f.beta = sxy / sxx;
    f.c = std::exp(my - f.beta * mx);
    f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

double empirical_order(const std::vector<std::size_t>& ns, const std::vector<double>& errors) {
    if (ns.size() != errors.size() || ns.size() < 2) throw DomainError("empirical_order: need matching sequences of length >= 2");
    double sx = 0, sy = 0;
    const double m = static_cast<double>(ns.size());
    std::vector<double> x(ns.size()), y(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        x[i] = std::log(1.0 / static_cast<double>(ns[i] - 1));
        y[i] = std::log(errors[i]);
        sx += x[i];
        sy += y[i];
    }
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        sxx += (x[i] - sx / m) * (x[i] - sx / m);
        sxy += (x[i] - sx / m) * (y[i] - sy / m);
    }
    return sxy / sxx;
}

namespace {

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max<std::size_t>(count, 1)));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void add_flag(RunReport& r, std::string name, bool pass, double margin, std::string detail = {}) {
    r.flags.push_back({std::move(name), pass, margin, std::move(detail)});
}

void write_front_csv(const std::filesystem::path& path, const BoundaryTrajectory& tr, const std::vector<double>& flux,
                     const std::vector<double>& residual) {
    std::ofstream out(path);
    out << "t,s,sdot,flux,integral_residual\n";
    for (std::size_t k = 0; k < tr.size(); ++k)
        out << fmt_double(tr.times[k]) << ',' << fmt_double(tr.s[k]) << ',' << fmt_double(tr.sdot[k]) << ','
            << fmt_double(flux[k]) << ',' << fmt_double(residual[k]) << '\n';
}

std::vector<std::size_t> subsample(std::size_t total, std::size_t want) {
    std::vector<std::size_t> idx;
    if (want >= total) {
        for (std::size_t i = 0; i < total; ++i) idx.push_back(i);
        return idx;
    }
    for (std::size_t j = 0; j < want; ++j) {
        const std::size_t i = (j * (total - 1) + (want - 1) / 2) / (want - 1);
        if (idx.empty() || idx.back() != i) idx.push_back(i);
    }
    return idx;
}

void write_field_csv(const std::filesystem::path& path, const SolutionField& f, std::size_t points, std::size_t times) {
    std::ofstream out(path);
    out << "t,x_physical,u\n";
    const Grid& g = f.v.front().grid();
    for (std::size_t k : subsample(f.v.size(), times)) {
        const double s = f.trajectory.s[k];
        for (std::size_t i : subsample(g.n(), points))
            out << fmt_double(f.trajectory.times[k]) << ',' << fmt_double(s * g.x(i)) << ',' << fmt_double(f.v[k][i]) << '\n';
    }
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

void flux_band_flag(RunReport& r, const RunConfig& cfg, const std::vector<double>& flux) {
    const double M = cfg.params.M;
    const double hi = cfg.flux_tol * M;
    const double lo = -0.5 * M - cfg.flux_band * M;
    double margin = std::numeric_limits<double>::infinity();
    for (double f : flux) margin = std::min({margin, hi - f, f - lo});
    add_flag(r, "flux_band", margin >= 0.0, margin, "front flux within [-M/2 - band*M, flux_tol*M]");
}

void field_flags(RunReport& r, const MbpDiagnostics& d) {
    const double scale = std::max(d.data_scale, std::numeric_limits<double>::min());
    const double m_lo = d.min_value + d.tolerance * scale;
    const double m_hi = d.data_scale + d.tolerance * scale - d.max_interior;
    add_flag(r, "max_principle", d.max_principle_ok, std::min(m_lo, m_hi), "extrema on the parabolic boundary");
    if (d.bound_checked) add_flag(r, "cap_bound", d.bound_ok, 0.0 - d.bound_excess, "u <= M/(2 Gamma(1+a)) (s^a - x^a)");
}

void stefan_flags(RunReport& r, const RunConfig& cfg, const StefanSolution& sol) {
    double conv_margin = std::numeric_limits<double>::infinity();
    double slope = 0.0;
    for (const auto& w : sol.windows) {
        conv_margin = std::min(conv_margin, cfg.stefan.tol_rel * w.b - w.history.back());
        slope = std::max(slope, w.max_slope_violation);
    }
    add_flag(r, "fixed_point_converged", conv_margin >= 0.0, conv_margin);
    add_flag(r, "sigma_self_map", slope <= 1e-10, 1e-10 - slope, "iterate slopes in [0, M]");
    const double adm = sol.front.admissibility_violation(cfg.params.b, cfg.params.M);
    add_flag(r, "front_bounds", adm <= 1e-10, 1e-10 - adm, "b <= s <= b + M t, 0 <= sdot <= M");
    flux_band_flag(r, cfg, sol.field.front_flux);
    field_flags(r, sol.field.diagnostics);
    r.values.emplace_back("iterations", sol.iterations);
    r.values.emplace_back("windows", static_cast<double>(sol.windows.size()));
    r.values.emplace_back("max_integral_residual", max_abs(sol.integral_residual));
    r.values.emplace_back("s_T", sol.front.s.back());
    for (const auto& w : sol.windows) r.residual_histories.push_back(w.history);
    try {
        const GrowthFit g = fit_growth(sol.front, 0.1 * cfg.params.T, cfg.params.T);
        r.values.emplace_back("growth_beta", g.beta);
        r.values.emplace_back("growth_c", g.c);
        r.values.emplace_back("growth_r2", g.r2);
    } catch (const DomainError&) {
    }
}

void run_solve_stefan(const RunConfig& cfg, RunReport& r, const std::optional<std::filesystem::path>& out) {
    const GridFunction u0 = initial_data(cfg, cfg.theta);
    const StefanSolution sol = solve_stefan(cfg.params, u0, cfg.stefan);
    stefan_flags(r, cfg, sol);
    if (out) {
        write_front_csv(*out / "front.csv", sol.front, sol.field.front_flux, sol.integral_residual);
        write_field_csv(*out / "field.csv", sol.field, cfg.field_points, cfg.field_times);
    }
}

void run_solve_mbp(const RunConfig& cfg, RunReport& r, const std::optional<std::filesystem::path>& out) {
    const GridFunction u0 = initial_data(cfg, cfg.theta);
    const double speed = cfg.front_speed >= 0.0 ? cfg.front_speed : 0.5 * cfg.params.M;
    const BoundaryTrajectory tr = BoundaryTrajectory::linear(cfg.params.b, speed, cfg.params.T, cfg.params.steps());
    const SolutionField f = solve_mbp(cfg.params, tr, u0);
    field_flags(r, f.diagnostics);
    if (f.diagnostics.bound_checked) flux_band_flag(r, cfg, f.front_flux);
    const std::vector<double> res = integral_condition_residual(f, u0);
    r.values.emplace_back("max_integral_residual", max_abs(res));
    if (out) {
        write_front_csv(*out / "front.csv", tr, f.front_flux, res);
        write_field_csv(*out / "field.csv", f, cfg.field_points, cfg.field_times);
    }
}

void run_convergence(const RunConfig& cfg, RunReport& r, const std::optional<std::filesystem::path>& out) {
    const std::size_t L = static_cast<std::size_t>(cfg.levels);
    std::vector<RunConfig> level(L, cfg);
    for (std::size_t l = 0; l < L; ++l) {
        level[l].params.n = (cfg.params.n - 1) * (std::size_t{1} << l) + 1;
        level[l].params.dt = cfg.params.dt / static_cast<double>(std::size_t{1} << l);
    }
    std::vector<std::optional<StefanSolution>> sols(L);
    parallel_for(L, [&](std::size_t l) {
        sols[l] = solve_stefan(level[l].params, initial_data(level[l], cfg.theta), cfg.stefan);
    });
    std::vector<double> res(L);
    for (std::size_t l = 0; l < L; ++l) res[l] = max_abs(sols[l]->integral_residual);
    for (std::size_t l = 1; l < L; ++l) {
        const double ratio = res[l - 1] / res[l];
        add_flag(r, "residual_ratio_level" + std::to_string(l), ratio >= 1.8, ratio - 1.8,
                 "max integral residual shrinks by >= 1.8 per refinement");
    }
    for (std::size_t l = 0; l < L; ++l) r.residual_histories.push_back(sols[l]->residual_history);
    if (out) {
        std::ofstream t(*out / "convergence.csv");
        t << "level,n,dt,max_integral_residual,ratio,s_T\n";
        for (std::size_t l = 0; l < L; ++l)
            t << l << ',' << level[l].params.n << ',' << fmt_double(level[l].params.dt) << ',' << fmt_double(res[l]) << ','
              << (l ? fmt_double(res[l - 1] / res[l]) : std::string("")) << ',' << fmt_double(sols[l]->front.s.back()) << '\n';
        const StefanSolution& fine = *sols.back();
        write_front_csv(*out / "front.csv", fine.front, fine.field.front_flux, fine.integral_residual);
        write_field_csv(*out / "field.csv", fine.field, cfg.field_points, cfg.field_times);
    }
}

void run_monotonicity(const RunConfig& cfg, RunReport& r, const std::optional<std::filesystem::path>& out) {
    std::vector<double> th = cfg.thetas;
    std::sort(th.begin(), th.end());
    std::vector<std::optional<StefanSolution>> sols(th.size());
    parallel_for(th.size(), [&](std::size_t i) { sols[i] = solve_stefan(cfg.params, initial_data(cfg, th[i]), cfg.stefan); });
    std::ofstream t;
    if (out) {
        t.open(*out / "monotonicity.csv");
        t << "theta_low,theta_high,delta,tolerance,max_difference,pass\n";
    }
    for (std::size_t i = 0; i < th.size(); ++i)
        for (std::size_t j = i + 1; j < th.size(); ++j) {
            const GridFunction& lo = sols[i]->u0;
            const GridFunction& hi = sols[j]->u0;
            double delta = 0.0;
            for (std::size_t k = 0; k < lo.size(); ++k) delta = std::max(delta, std::abs(hi[k] - lo[k]));
            const double tol = gronwall_tolerance(cfg.params.alpha, cfg.params.b, cfg.params.M, cfg.params.T, delta);
            const MonotoneReport rep = monotone_dependence_check(*sols[i], *sols[j], tol);
            add_flag(r, "ordered_" + fmt_double(th[i]) + "_" + fmt_double(th[j]), rep.pass, tol - rep.max_difference,
                     "max_t (s_low - s_high) <= Gronwall budget");
            if (out)
                t << fmt_double(th[i]) << ',' << fmt_double(th[j]) << ',' << fmt_double(delta) << ',' << fmt_double(tol) << ','
                  << fmt_double(rep.max_difference) << ',' << (rep.pass ? 1 : 0) << '\n';
        }
    for (std::size_t i = 0; i < th.size(); ++i) {
        stefan_flags(r, cfg, *sols[i]);
        for (std::size_t f = r.flags.size(); f-- > 0;)
            if (r.flags[f].name.find('@') == std::string::npos && r.flags[f].name.rfind("ordered_", 0) != 0)
                r.flags[f].name += "@theta=" + fmt_double(th[i]);
        if (out)
            write_front_csv(*out / ("front_theta" + fmt_double(th[i]) + ".csv"), sols[i]->front, sols[i]->field.front_flux,
                            sols[i]->integral_residual);
    }
}

void run_opcheck(const RunConfig& cfg, RunReport& r, const std::optional<std::filesystem::path>& out) {
    const double a = cfg.params.alpha;
    const FracOrder ord(a);
    const std::vector<std::size_t>& ns = cfg.ns;
    std::ofstream t;
    if (out) {
        t.open(*out / "opcheck.csv");
        t << "quantity,beta,n,error,order\n";
    }
    auto report = [&](const std::string& q, double beta, const std::vector<double>& err, double need) {
        const double order = empirical_order(ns, err);
        const bool exact = *std::max_element(err.begin(), err.end()) <= 1e-10;
        bool decreasing = true;
        for (std::size_t i = 1; i < err.size(); ++i) decreasing = decreasing && err[i] < err[i - 1];
        const bool pass = exact || (decreasing && order >= need);
        add_flag(r, q + "_order_beta" + fmt_double(beta), pass, exact ? 0.0 : order - need,
                 exact ? "exact to roundoff at every n" : "least-squares order " + fmt_double(order));
        if (out)
            for (std::size_t i = 0; i < ns.size(); ++i)
                t << q << ',' << fmt_double(beta) << ',' << ns[i] << ',' << fmt_double(err[i]) << ','
                  << (i ? fmt_double(std::log(err[i - 1] / err[i]) / std::log(double(ns[i] - 1) / double(ns[i - 1] - 1))) : std::string(""))
                  << '\n';
    };
    for (double beta : {1.0, 2.0, 3.0}) {
        std::vector<double> ei, ec;
        for (std::size_t n : ns) {
            const Grid g(n);
            const GridFunction f = GridFunction::sample(g, [&](double x) { return std::pow(x, beta); });
            const GridFunction I = frac_integral(f, ord);
            const GridFunction D = caputo(f, ord);
            double mi = 0.0, mc = 0.0;
            for (std::size_t i = 1; i < n; ++i) {
                const double x = g.x(i);
                mi = std::max(mi, std::abs(I[i] - gamma(beta + 1) / gamma(a + beta + 1) * std::pow(x, a + beta)));
                mc = std::max(mc, std::abs(D[i] - gamma(beta + 1) / gamma(beta + 1 - a) * std::pow(x, beta - a)));
            }
            ei.push_back(mi);
            ec.push_back(mc);
        }
        report("frac_integral", beta, ei, 1.5);
        report("caputo", beta, ec, 2.0 - a - 0.1);
    }
    std::vector<double> ek;
    for (std::size_t n : ns) {
        const Grid g(n);
        const OperatorMatrix A = assemble_operator(ord, g);
        ek.push_back(A.apply_full(GridFunction::sample(g, [&](double x) { return std::pow(x, a); })).cwiseAbs().maxCoeff());
    }
    report("operator_kernel", a, ek, 0.0);
}

void write_report(const std::filesystem::path& path, const RunReport& r) {
    std::ofstream out(path);
    out << "mode: " << mode_name(r.mode) << '\n';
    out << "config:\n";
    for (const auto& [k, v] : r.config) out << "  " << k << " = " << v << '\n';
    out << "flags:\n";
    for (const auto& f : r.flags)
        out << "  " << (f.pass ? "PASS " : "FAIL ") << f.name << " margin=" << fmt_double(f.margin)
            << (f.detail.empty() ? "" : "  # " + f.detail) << '\n';
    out << "values:\n";
    for (const auto& [k, v] : r.values) out << "  " << k << " = " << fmt_double(v) << '\n';
    out << "residual_histories:\n";
    for (const auto& h : r.residual_histories) {
        out << " ";
        for (double x : h) out << ' ' << fmt_double(x);
        out << '\n';
    }
    out << "error_class: " << (r.error_class.empty() ? "none" : r.error_class) << '\n';
    if (!r.error_message.empty()) out << "error: " << r.error_message << '\n';
    out << "exit_code: " << r.exit_code << '\n';
    out << "seconds: " << fmt_double(r.seconds) << '\n';
}

}  // namespace

RunReport run(const RunConfig& cfg, const std::optional<std::filesystem::path>& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    RunReport r;
    r.config = cfg.echo;
    try {
        if (!cfg.mode) throw ValidationError("mode: missing");
        r.mode = *cfg.mode;
        if (out_dir) std::filesystem::create_directories(*out_dir);
        switch (*cfg.mode) {
            case Mode::SolveStefan: run_solve_stefan(cfg, r, out_dir); break;
            case Mode::SolveMbp: run_solve_mbp(cfg, r, out_dir); break;
            case Mode::Convergence: run_convergence(cfg, r, out_dir); break;
            case Mode::Monotonicity: run_monotonicity(cfg, r, out_dir); break;
            case Mode::Opcheck: run_opcheck(cfg, r, out_dir); break;
        }
        r.exit_code = r.all_pass() ? 0 : 1;
    } catch (const ConvergenceError& e) {
        r.error_class = e.kind();
        r.error_message = e.what();
        r.residual_histories.push_back(e.history());
        r.exit_code = 3;
    } catch (const ValidationError& e) {
        r.error_class = e.kind();
        r.error_message = e.what();
        r.exit_code = 2;
    } catch (const ConfigError& e) {
        r.error_class = e.kind();
        r.error_message = e.what();
        r.exit_code = 2;
    } catch (const Error& e) {
        r.error_class = e.kind();
        r.error_message = e.what();
        r.exit_code = 1;
    } catch (const std::exception& e) {
        r.error_class = "internal_error";
        r.error_message = e.what();
        r.exit_code = 1;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out_dir) {
        std::error_code ec;
        std::filesystem::create_directories(*out_dir, ec);
        if (!ec) write_report(*out_dir / "report.txt", r);
    }
    return r;
}

}  // namespace fracstef
