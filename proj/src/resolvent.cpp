#include "fracstef/resolvent.hpp"

#include <cmath>
#include <sstream>

namespace fracstef {

ResolventProblem::ResolventProblem(FracOrder order_, double lambda_, GridFunction g_)
    : order(order_), lambda(lambda_), g(std::move(g_)) {
    if (!(lambda <= 0.0) || !std::isfinite(lambda)) {
        std::ostringstream os;
        os << "resolvent parameter lambda must be <= 0, got " << lambda;
        throw DomainError(os.str());
    }
}

GridFunction resolvent_solution(const ResolventProblem& p) {
    const double a = p.order.alpha();
    const double a1 = a + 1.0;
    const double lam = p.lambda;
    const Grid& grid = p.g.grid();
    const std::size_t n = grid.n();
    const double h = grid.h();

    const double e_one = mittag_leffler(a1, a1, lam);
    if (std::abs(e_one) <= 1e-10) {
        std::ostringstream os;
        os << "E_{a+1,a+1}(lambda) vanishes to within 1e-10 (lambda=" << lam << ")";
        throw SingularResolventError(os.str());
    }

    auto kernel = [&](double x) { return x > 0.0 ? std::pow(x, a) * mittag_leffler(a1, a1, lam * std::pow(x, a1)) : 0.0; };
    auto first = [&](double x) { return x > 0.0 ? std::pow(x, a1) * mittag_leffler(a1, a1 + 1.0, lam * std::pow(x, a1)) : 0.0; };
    auto second = [&](double x) { return x > 0.0 ? std::pow(x, a1 + 1.0) * mittag_leffler(a1, a1 + 2.0, lam * std::pow(x, a1)) : 0.0; };

    // second antiderivative tabulated at the node distances k h
    std::vector<double> k2(n);
    for (std::size_t k = 0; k < n; ++k) k2[k] = second(grid.x(k));

    std::vector<double> slope(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) slope[j] = (p.g[j + 1] - p.g[j]) / h;

    std::vector<double> conv(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        double s = p.g[0] * first(grid.x(i)) + slope[0] * k2[i];
        for (std::size_t j = 1; j < i; ++j) s += (slope[j] - slope[j - 1]) * k2[i - j];
        conv[i] = s;
    }

    const double coef = conv[n - 1] / e_one;
    GridFunction u(grid);
    for (std::size_t i = 1; i < n; ++i) u[i] = coef * kernel(grid.x(i)) - conv[i];
    u[0] = 0.0;
    return u;
}

double resolvent_residual(const ResolventProblem& p, const GridFunction& u, const OperatorMatrix& A) {
    if (!(u.grid() == p.g.grid()) || !(A.grid() == p.g.grid()))
        throw ConfigError("resolvent residual: grid mismatch");
    const Eigen::VectorXd Au = A.apply_full(u);
    double r = 0.0;
    for (Eigen::Index k = 0; k < Au.size(); ++k) {
        const std::size_t i = static_cast<std::size_t>(k) + 1;
        r = std::max(r, std::abs(p.lambda * u[i] - Au(k) - p.g[i]));
    }
    return r;
}

double resolvent_residual(const ResolventProblem& p, const GridFunction& u) {
    return resolvent_residual(p, u, assemble_operator(p.order, p.g.grid()));
}

}  // namespace fracstef
