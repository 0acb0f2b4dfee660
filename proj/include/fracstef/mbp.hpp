#pragma once

#include <string>
#include <vector>

#include "fracstef/frac_ops.hpp"

namespace fracstef {

struct StefanParams {
    double alpha = 0.75;
    double b = 1.0;   ///< initial front position
    double M = 1.0;   ///< front-speed bound
    double T = 0.5;   ///< horizon
    std::size_t n = 129;
    double dt = 1e-3;

    FracOrder order() const { return FracOrder(alpha); }
    /// Throws ValidationError naming the first offending field.
    void validate() const;
    /// Number of time steps, T / dt rounded to the nearest integer (at least 1).
    std::size_t steps() const;
};

/// Front samples s(t_k) on an increasing time grid. sdot[k] is the slope over
/// (t_{k-1}, t_k]; sdot[0] repeats the first slope.
struct BoundaryTrajectory {
    std::vector<double> times;
    std::vector<double> s;
    std::vector<double> sdot;

    static BoundaryTrajectory from_positions(std::vector<double> times, std::vector<double> s);
    static BoundaryTrajectory constant(double b, double T, std::size_t steps);
    static BoundaryTrajectory linear(double b, double speed, double T, std::size_t steps);

    std::size_t size() const noexcept { return times.size(); }

    /// Largest violation of s(0) = b, 0 <= sdot <= M, b <= s <= b + M t (0 if admissible).
    double admissibility_violation(double b, double M) const;
};

struct MbpDiagnostics {
    double min_value = 0.0;        ///< min over all samples of v
    double max_interior = 0.0;     ///< max over interior samples at t > 0
    double data_scale = 0.0;       ///< max |v0|
    bool max_principle_ok = true;
    bool bound_checked = false;    ///< initial data lies under the cap profile
    double bound_excess = 0.0;     ///< max of u - M/(2 Gamma(1+a)) (s^a - x^a) over samples
    bool bound_ok = true;
    double tolerance = 1e-8;       ///< relative tolerance used for the flags
    std::vector<std::string> notes;
};

struct SolutionField {
    StefanParams params;
    BoundaryTrajectory trajectory;
    std::vector<GridFunction> v;     ///< reference-domain field, one per time node
    std::vector<double> front_flux;  ///< D^a u(s(t_k)-, t_k)
    MbpDiagnostics diagnostics;
};

/// One implicit Euler step from t_k to t_{k+1}:
/// (I - dt [s^(-1-a) A + (sdot/s) X D+]) v_{k+1} = v_k with coefficients at t_{k+1}.
/// D+ is the forward difference, the upwind direction for transport toward x = 0.
GridFunction advance_step(const GridFunction& v, const BoundaryTrajectory& traj, std::size_t k,
                          const OperatorMatrix& A);

/// Solve the front-fixed moving-boundary problem along a prescribed front.
/// u0 holds the initial data at physical nodes x = b p, p on the reference grid.
SolutionField solve_mbp(const StefanParams& params, const BoundaryTrajectory& traj, const GridFunction& u0);
SolutionField solve_mbp(const StefanParams& params, const BoundaryTrajectory& traj, const GridFunction& u0,
                        const OperatorMatrix& A);

/// Maximum-principle and cap-bound flags for a computed field with initial data u0.
MbpDiagnostics diagnose_field(const SolutionField& field, const GridFunction& u0);

/// D^a u at the front: s^(-a) times the quadratic extrapolation to p = 1 of the
/// Caputo derivative of v at the last three interior nodes.
double flux_at_front(const GridFunction& v, double s_val, FracOrder order);

/// M/(2 Gamma(1+a)) (b^a - x^a), the largest admissible initial profile, at x = b p.
double cap_profile(double alpha, double b, double M, double p);

/// theta times the cap profile on the reference grid; the Dirichlet end values are zero.
GridFunction scaled_cap(const Grid& grid, double alpha, double b, double M, double theta);

}  // namespace fracstef
