#pragma once

#include <functional>
#include <vector>

#include "fracstef/mbp.hpp"

namespace fracstef {

struct StefanOptions {
    double tol_rel = 1e-8;  ///< stop when sup |s_{k+1} - s_k| <= tol_rel * b
    int max_iters = 50;     ///< per window
    double omega = 1.0;     ///< initial damping, halved whenever the update grows
    /// 0: windows of length b_i/(2M) restarted at their midpoint whenever the
    /// horizon exceeds one window. k > 0: k consecutive equal windows.
    int windows = 0;
};

struct WindowRecord {
    double t_start = 0.0;
    double t_end = 0.0;  ///< end of the kept part
    double b = 0.0;      ///< front at t_start
    int iterations = 0;
    std::vector<double> history;  ///< sup |s_{k+1} - s_k| per iteration
    double max_slope_violation = 0.0;  ///< slopes of every iterate outside [0, M]
};

struct StefanSolution {
    SolutionField field;
    BoundaryTrajectory front;
    int iterations = 0;
    std::vector<double> residual_history;
    std::vector<double> integral_residual;
    std::vector<WindowRecord> windows;
    GridFunction u0;
};

/// (Ps)(t) = sqrt(b^2 - 2 int_0^t flux s), trapezoid in time. Throws DomainError
/// if the radicand is not positive.
BoundaryTrajectory apply_P(const BoundaryTrajectory& front, const SolutionField& field);

/// r(t_k) = s^2 - [b^2 + 2 int_0^b x u0 - 2 int_0^t I^(1-a) u(s, tau) dtau - 2 int_0^s x u].
/// u0 is sampled at x = b p on the reference grid of the field.
std::vector<double> integral_condition_residual(const SolutionField& field, const GridFunction& u0);

/// Fixed-point iteration of P, split into continuation windows when needed.
/// Throws ValidationError when u0 is not under the cap profile, ConvergenceError
/// when a window fails to converge.
StefanSolution solve_stefan(const StefanParams& params, const GridFunction& u0, const StefanOptions& opts = {});

/// t -> n(t) [1 + ((p-q)/p) int_0^t h n^-(p-q)] at the given increasing times.
std::vector<double> gronwall_bound(double p, double q, const std::function<double(double)>& n_fun,
                                   const std::function<double(double)>& h_fun, const std::vector<double>& times);

/// Closed-form comparison budget for two runs whose data differ by delta in sup norm.
double gronwall_tolerance(double alpha, double b2, double M, double T, double delta);

struct MonotoneReport {
    double max_difference = 0.0;  ///< max_t (s_lower - s_upper)
    double tolerance = 0.0;
    bool pass = false;
};

/// Checks s_lower <= s_upper + tol at the shared time samples. Throws
/// ValidationError when the initial data of `lower` is not below that of `upper`.
MonotoneReport monotone_dependence_check(const StefanSolution& lower, const StefanSolution& upper, double tol);

}  // namespace fracstef
