#include <cmath>
#include <vector>

#include "fracstef/frac_ops.hpp"

namespace fracstef {

OperatorMatrix::OperatorMatrix(FracOrder order, Grid grid, Eigen::MatrixXd full)
    : order_(order), grid_(std::move(grid)), full_(std::move(full)) {}

Eigen::VectorXd OperatorMatrix::apply_full(const GridFunction& u) const {
    if (!(u.grid() == grid_)) throw ConfigError("operator and grid function live on different grids");
    const Eigen::Map<const Eigen::VectorXd> v(u.values().data(), static_cast<Eigen::Index>(u.size()));
    return full_ * v;
}

namespace {

// Everything below works in index units (h = 1, x_j = j); the operator is
// homogeneous of degree -1-alpha so the physical matrix is a rescaling.

constexpr int kBasis = 5;
using BasisVector = Eigen::Matrix<double, kBasis, 1>;

struct Basis {
    double a;
    double value(int f, double x) const {
        switch (f) {
            case 0: return 1.0;
            case 1: return std::pow(x, a);
            case 2: return std::pow(x, a + 1.0);
            case 3: return std::pow(x, 2.0 * a + 1.0);
            default: return std::pow(x, a + 2.0);
        }
    }
    // d/dx D^a applied to each basis function, at x.
    BasisVector target(double x) const {
        BasisVector t;
        t << 0.0, 0.0, gamma(a + 2.0), gamma(2.0 * a + 2.0) / gamma(a + 1.0) * std::pow(x, a), gamma(a + 3.0) * x;
        return t;
    }
};

Eigen::MatrixXd flux_base(int n, double a) {
    const double be = 1.0 - a;
    const double g = gamma(2.0 - a);
    std::vector<double> c(static_cast<std::size_t>(n));
    c[0] = std::pow(0.5, be) / g;
    for (int k = 1; k < n; ++k) c[k] = (std::pow(k + 0.5, be) - std::pow(k - 0.5, be)) / g;

    // Coefficient of u_l in the flux through the midpoint m + 1/2.
    auto flux = [&](int m, int l) {
        double v = 0.0;
        if (l >= 1 && l <= m + 1) v += c[m + 1 - l];
        if (l <= m) v -= c[m - l];
        return v;
    };
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n - 2, n);
    for (int i = 1; i <= n - 2; ++i)
        for (int l = 0; l <= i + 1; ++l) A(i - 1, l) = flux(i, l) - flux(i - 1, l);
    return A;
}

// Adds to row r of A the smallest correction supported on columns
// [first, first + width) that makes the row exact on the basis at node i.
void correct_row(Eigen::MatrixXd& A, const Eigen::MatrixXd& S, const Basis& basis, int i, int first, int width) {
    const int r = i - 1;
    const BasisVector rhs = basis.target(i) - S * A.row(r).transpose();
    Eigen::MatrixXd SW = S.middleCols(first, width);
    // Basis rows differ by many orders of magnitude far from 0; scale each to unit max.
    const BasisVector rs = SW.cwiseAbs().rowwise().maxCoeff();
    SW = rs.cwiseInverse().asDiagonal() * SW;
    const Eigen::VectorXd c = SW.completeOrthogonalDecomposition().solve(rs.cwiseInverse().asDiagonal() * rhs);
    A.row(r).segment(first, width) += c.transpose();
}

}  // namespace

OperatorMatrix assemble_operator(FracOrder order, const Grid& grid) {
    const double a = order.alpha();
    const int n = static_cast<int>(grid.n());
    Eigen::MatrixXd A = flux_base(n, a);
    const Basis basis{a};

    Eigen::MatrixXd S(kBasis, n);
    for (int f = 0; f < kBasis; ++f)
        for (int j = 0; j < n; ++j) S(f, j) = basis.value(f, j);

    if (n >= 9) {
        A.row(0).setZero();
        correct_row(A, S, basis, 1, 0, 5);
        correct_row(A, S, basis, 2, 0, 7);
        for (int i = 3; i <= n - 3; ++i) correct_row(A, S, basis, i, i - 2, 5);
    }
    A *= std::pow(grid.h(), -1.0 - a);
    return OperatorMatrix(order, grid, std::move(A));
}

}  // namespace fracstef
