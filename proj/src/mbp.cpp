#include "fracstef/mbp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace fracstef {

void StefanParams::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw ValidationError(field + ": " + why);
    };
    if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha", "must lie in (0,1)");
    if (!(b > 0.0) || !std::isfinite(b)) fail("b", "must be positive");
    if (!(M > 0.0) || !std::isfinite(M)) fail("M", "must be positive");
    if (!(T > 0.0) || !std::isfinite(T)) fail("T", "must be positive");
    if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt", "must be positive");
    if (n < 5) fail("n", "needs at least 5 nodes");
}

std::size_t StefanParams::steps() const {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(T / dt)));
}

BoundaryTrajectory BoundaryTrajectory::from_positions(std::vector<double> times, std::vector<double> s) {
    if (times.size() != s.size() || times.size() < 2)
        throw ConfigError("trajectory needs matching time and position arrays of length >= 2");
    BoundaryTrajectory tr;
    tr.sdot.assign(times.size(), 0.0);
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double dtk = times[k] - times[k - 1];
        if (!(dtk > 0.0)) throw ConfigError("trajectory times must increase strictly");
        tr.sdot[k] = (s[k] - s[k - 1]) / dtk;
    }
    tr.sdot[0] = tr.sdot[1];
    tr.times = std::move(times);
    tr.s = std::move(s);
    return tr;
}

BoundaryTrajectory BoundaryTrajectory::constant(double b, double T, std::size_t steps) {
    return linear(b, 0.0, T, steps);
}

BoundaryTrajectory BoundaryTrajectory::linear(double b, double speed, double T, std::size_t steps) {
    std::vector<double> t(steps + 1), s(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        t[k] = T * static_cast<double>(k) / static_cast<double>(steps);
        s[k] = b + speed * t[k];
    }
    return from_positions(std::move(t), std::move(s));
}

double BoundaryTrajectory::admissibility_violation(double b, double M) const {
    double v = std::abs(s.front() - b);
    for (std::size_t k = 0; k < size(); ++k) {
        v = std::max(v, -sdot[k]);
        v = std::max(v, sdot[k] - M);
        v = std::max(v, b - s[k]);
        v = std::max(v, s[k] - (b + M * (times[k] - times.front())));
    }
    return std::max(v, 0.0);
}

namespace {

Eigen::MatrixXd step_matrix(const Eigen::MatrixXd& Ai, const Grid& grid, double alpha, double s, double sdot,
                            double dt) {
    const Eigen::Index m = Ai.rows();
    Eigen::MatrixXd K = (-dt * std::pow(s, -1.0 - alpha)) * Ai;
    K.diagonal().array() += 1.0;
    const double c = dt * sdot / (s * grid.h());
    for (Eigen::Index r = 0; r < m; ++r) {
        const double x = grid.x(static_cast<std::size_t>(r) + 1);
        K(r, r) += c * x;
        if (r + 1 < m) K(r, r + 1) -= c * x;
    }
    return K;
}

void require_dirichlet(const GridFunction& v) {
    const double tol = 1e-14 * std::max(1.0, v.max_abs());
    if (std::abs(v[0]) > tol || std::abs(v[v.size() - 1]) > tol)
        throw ValidationError("field must vanish at both ends of the reference interval");
}

class Stepper {
public:
    Stepper(const OperatorMatrix& A) : A_(A), Ai_(A.interior()) {}

    GridFunction step(const GridFunction& v, double s, double sdot, double dt) {
        const std::size_t n = v.size();
        if (!lu_ || s != s_ || sdot != sdot_ || dt != dt_) {
            lu_.emplace(step_matrix(Ai_, A_.grid(), A_.order().alpha(), s, sdot, dt));
            s_ = s;
            sdot_ = sdot;
            dt_ = dt;
            if (!(std::abs(lu_->determinant()) > 0.0)) throw StepError("singular implicit Euler system");
        }
        const Eigen::Map<const Eigen::VectorXd> rhs(v.values().data() + 1, static_cast<Eigen::Index>(n - 2));
        const Eigen::VectorXd x = lu_->solve(rhs);
        GridFunction out(v.grid());
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (!std::isfinite(x(static_cast<Eigen::Index>(i - 1)))) throw StepError("non-finite value in step");
            out[i] = x(static_cast<Eigen::Index>(i - 1));
        }
        return out;
    }

private:
    const OperatorMatrix& A_;
    Eigen::MatrixXd Ai_;
    std::optional<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
    double s_ = 0.0, sdot_ = 0.0, dt_ = 0.0;
};

}  // namespace

GridFunction advance_step(const GridFunction& v, const BoundaryTrajectory& traj, std::size_t k,
                          const OperatorMatrix& A) {
    if (!(v.grid() == A.grid())) throw ConfigError("advance_step: grid mismatch");
    if (k + 1 >= traj.size()) throw ConfigError("advance_step: time index out of range");
    require_dirichlet(v);
    Stepper st(A);
    return st.step(v, traj.s[k + 1], traj.sdot[k + 1], traj.times[k + 1] - traj.times[k]);
}

double flux_at_front(const GridFunction& v, double s_val, FracOrder order) {
    if (!(s_val > 0.0)) throw DomainError("front position must be positive");
    const std::size_t n = v.size();
    if (n < 5) throw ConfigError("flux extrapolation needs at least 5 nodes");
    const GridFunction d = caputo(v, order);
    const double at_end = 3.0 * d[n - 2] - 3.0 * d[n - 3] + d[n - 4];
    return std::pow(s_val, -order.alpha()) * at_end;
}

double cap_profile(double alpha, double b, double M, double p) {
    return M / (2.0 * gamma(1.0 + alpha)) * (std::pow(b, alpha) - std::pow(b * p, alpha));
}

GridFunction scaled_cap(const Grid& grid, double alpha, double b, double M, double theta) {
    GridFunction v = GridFunction::sample(grid, [&](double p) { return theta * cap_profile(alpha, b, M, p); });
    v[0] = 0.0;
    v[grid.n() - 1] = 0.0;
    return v;
}

MbpDiagnostics diagnose_field(const SolutionField& out, const GridFunction& u0) {
    MbpDiagnostics dg;
    const Grid& grid = u0.grid();
    const BoundaryTrajectory& traj = out.trajectory;
    const StefanParams& params = out.params;
    const double a = params.alpha;
    const double b = traj.s[0];
    dg.data_scale = u0.max_abs();
    dg.min_value = std::numeric_limits<double>::infinity();
    dg.max_interior = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < out.v.size(); ++k)
        for (std::size_t i = 0; i < grid.n(); ++i) {
            dg.min_value = std::min(dg.min_value, out.v[k][i]);
            if (k > 0 && i > 0 && i + 1 < grid.n()) dg.max_interior = std::max(dg.max_interior, out.v[k][i]);
        }
    const double scale = std::max(dg.data_scale, std::numeric_limits<double>::min());
    dg.max_principle_ok = dg.min_value >= -dg.tolerance * scale && dg.max_interior <= dg.data_scale + dg.tolerance * scale;
    if (!dg.max_principle_ok) dg.notes.push_back("maximum principle violated beyond tolerance");

    bool under_cap = true;
    for (std::size_t i = 0; i < grid.n(); ++i)
        if (u0[i] > cap_profile(a, b, params.M, grid.x(i)) * (1.0 + 1e-12) + 1e-15) under_cap = false;
    dg.bound_checked = under_cap;
    if (under_cap) {
        dg.bound_excess = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < out.v.size(); ++k) {
            const double s = traj.s[k];
            for (std::size_t i = 0; i < grid.n(); ++i) {
                const double bound = params.M / (2.0 * gamma(1.0 + a)) * (std::pow(s, a) - std::pow(s * grid.x(i), a));
                dg.bound_excess = std::max(dg.bound_excess, out.v[k][i] - bound);
            }
        }
        const double cap_scale = params.M / (2.0 * gamma(1.0 + a)) * std::pow(b, a);
        dg.bound_ok = dg.bound_excess <= 0.02 * cap_scale;
        if (!dg.bound_ok) dg.notes.push_back("cap bound on u exceeded");
    }
    return dg;
}

SolutionField solve_mbp(const StefanParams& params, const BoundaryTrajectory& traj, const GridFunction& u0) {
    params.validate();
    const Grid grid(params.n);
    return solve_mbp(params, traj, u0, assemble_operator(params.order(), grid));
}

SolutionField solve_mbp(const StefanParams& params, const BoundaryTrajectory& traj, const GridFunction& u0,
                        const OperatorMatrix& A) {
    params.validate();
    if (!(u0.grid() == A.grid()) || u0.size() != params.n) throw ConfigError("solve_mbp: grid mismatch");
    require_dirichlet(u0);
    if (traj.size() < 2) throw ConfigError("solve_mbp: trajectory needs at least two samples");
    for (double x : u0.values())
        if (x < -1e-12 * u0.max_abs()) throw ValidationError("u0: initial data must be nonnegative");

    const FracOrder order = params.order();
    SolutionField out{params, traj, {}, {}, {}};
    out.v.reserve(traj.size());
    out.v.push_back(u0);
    out.front_flux.push_back(flux_at_front(u0, traj.s[0], order));

    Stepper stepper(A);
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
        out.v.push_back(stepper.step(out.v.back(), traj.s[k + 1], traj.sdot[k + 1], traj.times[k + 1] - traj.times[k]));
        out.front_flux.push_back(flux_at_front(out.v.back(), traj.s[k + 1], order));
    }

    out.diagnostics = diagnose_field(out, u0);
    return out;
}

}  // namespace fracstef
