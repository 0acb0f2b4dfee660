#include "fracstef/stefan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fracstef {

BoundaryTrajectory apply_P(const BoundaryTrajectory& front, const SolutionField& field) {
    const std::size_t K = front.size();
    if (field.front_flux.size() != K) throw ConfigError("apply_P: field and front have different lengths");
    const double b = front.s[0];
    std::vector<double> ps(K);
    ps[0] = b;
    double acc = 0.0;
    for (std::size_t k = 1; k < K; ++k) {
        const double dtk = front.times[k] - front.times[k - 1];
        acc += 0.5 * dtk * (field.front_flux[k - 1] * front.s[k - 1] + field.front_flux[k] * front.s[k]);
        const double radicand = b * b - 2.0 * acc;
        if (!(radicand > 0.0)) {
            std::ostringstream os;
            os << "apply_P: nonpositive radicand " << radicand << " at t=" << front.times[k];
            throw DomainError(os.str());
        }
        ps[k] = std::sqrt(radicand);
    }
    return BoundaryTrajectory::from_positions(front.times, std::move(ps));
}

namespace {

double first_moment(const GridFunction& v) {
    const Grid& g = v.grid();
    std::vector<double> pv(g.n());
    for (std::size_t i = 0; i < g.n(); ++i) pv[i] = g.x(i) * v[i];
    return trapezoid(pv, g.h());
}

}  // namespace

std::vector<double> integral_condition_residual(const SolutionField& field, const GridFunction& u0) {
    const BoundaryTrajectory& tr = field.trajectory;
    if (field.v.size() != tr.size()) throw ConfigError("integral residual: field and trajectory lengths differ");
    const double a = field.params.alpha;
    const double b = tr.s[0];
    const double init = b * b + 2.0 * b * b * first_moment(u0);
    std::vector<double> r(tr.size());
    double prev_i = 0.0;
    double cum = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        const double s = tr.s[k];
        const GridFunction iv = frac_integral(field.v[k], 1.0 - a);
        const double ik = std::pow(s, 1.0 - a) * iv[iv.size() - 1];
        if (k > 0) cum += 0.5 * (tr.times[k] - tr.times[k - 1]) * (prev_i + ik);
        prev_i = ik;
        r[k] = s * s - (init - 2.0 * cum - 2.0 * s * s * first_moment(field.v[k]));
    }
    return r;
}

namespace {

double sup_diff(const std::vector<double>& x, const std::vector<double>& y) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

struct WindowResult {
    SolutionField field;
    WindowRecord record;
};

WindowResult solve_window(const StefanParams& global, const OperatorMatrix& A, const GridFunction& v_start,
                          double t0, double b, std::size_t steps, double dt, const StefanOptions& opts) {
    StefanParams p = global;
    p.b = b;
    p.T = dt * static_cast<double>(steps);
    p.dt = dt;
    std::vector<double> times(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) times[k] = dt * static_cast<double>(k);

    WindowRecord rec;
    rec.t_start = t0;
    rec.b = b;
    BoundaryTrajectory s = BoundaryTrajectory::constant(b, p.T, steps);
    double omega = opts.omega;
    double prev = -1.0;
    for (int it = 1;; ++it) {
        SolutionField field = solve_mbp(p, s, v_start, A);
        const BoundaryTrajectory ps = apply_P(s, field);
        for (double sd : ps.sdot)
            rec.max_slope_violation = std::max({rec.max_slope_violation, -sd, sd - global.M});
        std::vector<double> next(s.size());
        for (std::size_t k = 0; k < next.size(); ++k) next[k] = (1.0 - omega) * s.s[k] + omega * ps.s[k];
        const double diff = sup_diff(next, s.s);
        rec.history.push_back(diff);
        rec.iterations = it;
        if (prev >= 0.0 && diff > prev) omega *= 0.5;
        prev = diff;
        if (diff <= opts.tol_rel * b) {
            if (diff > 0.0) {
                s = BoundaryTrajectory::from_positions(times, std::move(next));
                field = solve_mbp(p, s, v_start, A);
            }
            field.trajectory = s;
            return {std::move(field), std::move(rec)};
        }
        if (it >= opts.max_iters) {
            std::ostringstream os;
            os << "fixed-point iteration did not reach " << opts.tol_rel << "*b within " << opts.max_iters
               << " iterations (window starting at t=" << t0 << ", last update " << diff << ")";
            throw ConvergenceError(os.str(), rec.history);
        }
        s = BoundaryTrajectory::from_positions(times, std::move(next));
    }
}

void validate_initial_data(const StefanParams& params, const GridFunction& u0) {
    const Grid& g = u0.grid();
    const double scale = std::max(1.0, u0.max_abs());
    if (std::abs(u0[0]) > 1e-14 * scale || std::abs(u0[g.n() - 1]) > 1e-14 * scale)
        throw ValidationError("u0: must vanish at x = 0 and x = b");
    for (std::size_t i = 0; i < g.n(); ++i) {
        if (u0[i] < 0.0) throw ValidationError("u0: must be nonnegative");
        if (u0[i] > cap_profile(params.alpha, params.b, params.M, g.x(i)) * (1.0 + 1e-12) + 1e-15)
            throw ValidationError("u0: exceeds M/(2 Gamma(1+alpha)) (b^alpha - x^alpha)");
    }
}

}  // namespace

StefanSolution solve_stefan(const StefanParams& params, const GridFunction& u0, const StefanOptions& opts) {
    params.validate();
    if (u0.size() != params.n) throw ConfigError("solve_stefan: u0 has the wrong number of nodes");
    validate_initial_data(params, u0);
    if (!(opts.tol_rel > 0.0) || opts.max_iters < 1 || !(opts.omega > 0.0 && opts.omega <= 1.0) || opts.windows < 0)
        throw ValidationError("stefan options out of range");

    const OperatorMatrix A = assemble_operator(params.order(), u0.grid());
    const std::size_t K = params.steps();
    const double dt = params.T / static_cast<double>(K);

    StefanSolution sol{SolutionField{params, {}, {}, {}, {}}, {}, 0, {}, {}, {}, u0};
    std::vector<double> times{0.0}, fronts{params.b};
    std::vector<GridFunction> vs{u0};
    std::vector<double> flux;
    GridFunction v_start = u0;
    std::size_t done = 0;
    double b = params.b;
    int index = 0;
    while (done < K) {
        std::size_t steps = 0, keep = 0;
        if (opts.windows > 0) {
            const std::size_t end = K * static_cast<std::size_t>(index + 1) / static_cast<std::size_t>(opts.windows);
            steps = keep = std::max<std::size_t>(1, end - done);
        } else {
            const double len = b / (2.0 * params.M);
            const std::size_t ls = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(len / dt + 1e-9)));
            if (done + ls >= K) {
                steps = keep = K - done;
            } else {
                steps = ls;
                keep = ls / 2;
            }
        }
        const double t0 = dt * static_cast<double>(done);
        WindowResult w = solve_window(params, A, v_start, t0, b, steps, dt, opts);
        w.record.t_end = t0 + dt * static_cast<double>(keep);
        if (flux.empty()) flux.push_back(w.field.front_flux[0]);
        for (std::size_t k = 1; k <= keep; ++k) {
            times.push_back(t0 + w.field.trajectory.times[k]);
            fronts.push_back(w.field.trajectory.s[k]);
            vs.push_back(w.field.v[k]);
            flux.push_back(w.field.front_flux[k]);
        }
        sol.iterations += w.record.iterations;
        sol.residual_history.insert(sol.residual_history.end(), w.record.history.begin(), w.record.history.end());
        sol.windows.push_back(std::move(w.record));
        v_start = w.field.v[keep];
        b = w.field.trajectory.s[keep];
        done += keep;
        ++index;
    }

    sol.front = BoundaryTrajectory::from_positions(std::move(times), std::move(fronts));
    sol.field.trajectory = sol.front;
    sol.field.v = std::move(vs);
    sol.field.front_flux = std::move(flux);
    sol.field.diagnostics = diagnose_field(sol.field, u0);
    sol.integral_residual = integral_condition_residual(sol.field, u0);
    return sol;
}

std::vector<double> gronwall_bound(double p, double q, const std::function<double(double)>& n_fun,
                                   const std::function<double(double)>& h_fun, const std::vector<double>& times) {
    if (!(p > q && q >= 0.0)) throw DomainError("gronwall_bound: need p > q >= 0");
    std::vector<double> out(times.size());
    double acc = 0.0, prev_n = 0.0, prev_f = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double nk = n_fun(times[k]);
        const double hk = h_fun(times[k]);
        if (!(nk > 0.0)) throw DomainError("gronwall_bound: n must be positive");
        if (hk < 0.0) throw DomainError("gronwall_bound: h must be nonnegative");
        if (k > 0 && nk < prev_n) throw DomainError("gronwall_bound: n must be nondecreasing");
        const double fk = hk * std::pow(nk, -(p - q));
        if (k > 0) acc += 0.5 * (times[k] - times[k - 1]) * (prev_f + fk);
        out[k] = nk * (1.0 + (p - q) / p * acc);
        prev_n = nk;
        prev_f = fk;
    }
    return out;
}

double gronwall_tolerance(double alpha, double b2, double M, double T, double delta) {
    if (!(delta >= 0.0) || !(b2 > 0.0) || !(M > 0.0) || !(T >= 0.0)) throw DomainError("gronwall_tolerance: bad arguments");
    const double k = 1.0 + b2 / 2.0 + delta / (2.0 * b2) + delta / 2.0 + delta * delta / (8.0 * b2);
    const double h = M * std::pow(b2 + delta + M * T, alpha) / (b2 * gamma(1.0 + alpha) * gamma(2.0 - alpha));
    return delta * k + alpha * std::pow(delta * k, 1.0 - alpha) * h * T;
}

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return (1.0 - w) * ys[j - 1] + w * ys[j];
}

}  // namespace

MonotoneReport monotone_dependence_check(const StefanSolution& lower, const StefanSolution& upper, double tol) {
    const double bl = lower.front.s.front();
    const double bu = upper.front.s.front();
    if (bl > bu * (1.0 + 1e-14)) throw ValidationError("monotone check: b of the lower run exceeds b of the upper run");
    std::vector<double> xu(upper.u0.size());
    for (std::size_t i = 0; i < xu.size(); ++i) xu[i] = bu * upper.u0.grid().x(i);
    const double scale = std::max(lower.u0.max_abs(), upper.u0.max_abs());
    for (std::size_t i = 0; i < lower.u0.size(); ++i) {
        const double x = bl * lower.u0.grid().x(i);
        if (lower.u0[i] > interp(xu, upper.u0.values(), x) + 1e-12 * scale)
            throw ValidationError("monotone check: initial data are not ordered");
    }
    MonotoneReport rep;
    rep.tolerance = tol;
    rep.max_difference = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < lower.front.size(); ++k) {
        const double t = lower.front.times[k];
        rep.max_difference = std::max(rep.max_difference, lower.front.s[k] - interp(upper.front.times, upper.front.s, t));
    }
    rep.pass = rep.max_difference <= tol;
    return rep;
}

}  // namespace fracstef
