#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fracstef/numerics.hpp"

namespace fracstef {

/// Fractional order alpha in (0,1).
class FracOrder {
public:
    explicit FracOrder(double alpha);
    double alpha() const noexcept { return alpha_; }

private:
    double alpha_;
};

/// Hat-function moments {int_0^1 (c+r)^p (1-r) dr, int_0^1 (c+r)^p r dr}.
/// Closed form near the singularity, Gauss-Legendre once the integrand is smooth.
std::pair<double, double> linear_moments(double p, double c);

/// Fractional integral I^order f, order > 0, by exact integration of the kernel
/// against the piecewise-linear interpolant of f. Node 0 maps to 0.
GridFunction frac_integral(const GridFunction& f, double order);
GridFunction frac_integral(const GridFunction& f, FracOrder order);

/// I^order of piecewise-constant data; cell_values[j] lives on [x_j, x_{j+1}].
GridFunction frac_integral_cellwise(const Grid& grid, std::span<const double> cell_values,
                                    double order);

/// Caputo derivative by the L1 scheme. Node 0 is extrapolated linearly from nodes 1, 2.
GridFunction caputo(const GridFunction& f, FracOrder order);

struct RlDerivative {
    GridFunction values;
    /// True when f(0) != 0: the derivative blows up at x = 0 and values[0]
    /// holds only the regular (Caputo) part.
    bool node0_singular = false;
};

/// Riemann-Liouville derivative: Caputo part plus the analytic f(0) x^-alpha / Gamma(1-alpha).
RlDerivative rl_deriv(const GridFunction& f, FracOrder order);

/// Product rule for the Riemann-Liouville derivative:
/// g d^a f + a/Gamma(1-a) int_0^x (x-p)^(-a-1) (g(x)-g(p)) f(p) dp.
GridFunction leibniz_rl(const GridFunction& f, const GridFunction& g, FracOrder order);

struct CoercivitySplit {
    double lhs = 0.0;  ///< int_0^1 d^a w * w
    double rhs = 0.0;  ///< Gagliardo double integral plus the boundary-weighted term
};

CoercivitySplit coercivity_split(const GridFunction& w, FracOrder order);

/// Discrete d/dx D^alpha on functions vanishing at both ends.
///
/// Rows belong to interior nodes 1..n-2; columns cover all n nodes so the
/// matrix can also act on samples that do not vanish at x = 1 (x^alpha, say).
/// For Dirichlet data only the interior block matters.
class OperatorMatrix {
public:
    OperatorMatrix(FracOrder order, Grid grid, Eigen::MatrixXd full);

    FracOrder order() const noexcept { return order_; }
    const Grid& grid() const noexcept { return grid_; }
    std::size_t interior_size() const noexcept { return grid_.n() - 2; }

    const Eigen::MatrixXd& full() const noexcept { return full_; }
    Eigen::MatrixXd interior() const { return full_.middleCols(1, grid_.n() - 2); }

    /// Rows 1..n-2 of A u, using every column.
    Eigen::VectorXd apply_full(const GridFunction& u) const;

private:
    FracOrder order_;
    Grid grid_;
    Eigen::MatrixXd full_;
};

/// Assemble the operator.
///
/// Base: conservative flux form, (Au)_i = (F_{i+1/2} - F_{i-1/2}) / h with the
/// L1 Caputo flux evaluated at cell midpoints.
/// Each interior row is then corrected on a short window so that it is exact
/// for 1, x^alpha, x^{alpha+1}, x^{2alpha+1} and x^{alpha+2}: node 1 on nodes
/// 0..4, node 2 by the minimum-norm correction on nodes 0..6, node i >= 3 on
/// nodes i-2..i+2. The last interior row keeps the base flux row.
///
/// The matrix is not an M-matrix: the five-point corrections carry small
/// negative entries two nodes away from the diagonal (about 15% of the
/// diagonal for alpha = 0.6), so one implicit step from rough nonnegative data
/// can undershoot slightly.
OperatorMatrix assemble_operator(FracOrder order, const Grid& grid);

}  // namespace fracstef
