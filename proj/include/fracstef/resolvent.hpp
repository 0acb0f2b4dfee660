#pragma once

#include "fracstef/frac_ops.hpp"

namespace fracstef {

/// lambda u - d/dx D^alpha u = g on (0,1), u(0) = u(1) = 0, with lambda <= 0.
struct ResolventProblem {
    ResolventProblem(FracOrder order, double lambda, GridFunction g);

    FracOrder order;
    double lambda;
    GridFunction g;
};

/// Mittag-Leffler representation u = a K - g * K with K(x) = x^a E_{a+1,a+1}(lambda x^(a+1)).
///
/// The convolution is exact for the piecewise-linear interpolant of g: it reduces
/// to the first and second antiderivatives of K, which are again Mittag-Leffler
/// series. Throws SingularResolventError if |E_{a+1,a+1}(lambda)| <= 1e-10.
GridFunction resolvent_solution(const ResolventProblem& p);

/// max over interior nodes of |lambda u - A_h u - g|.
double resolvent_residual(const ResolventProblem& p, const GridFunction& u);
double resolvent_residual(const ResolventProblem& p, const GridFunction& u, const OperatorMatrix& A);

}  // namespace fracstef
