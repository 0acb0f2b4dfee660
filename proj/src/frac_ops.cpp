#include "fracstef/frac_ops.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <sstream>

namespace fracstef {

FracOrder::FracOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        std::ostringstream os;
        os << "fractional order must lie in (0,1), got " << alpha;
        throw DomainError(os.str());
    }
}

std::pair<double, double> linear_moments(double p, double c) {
    if (c >= 16.0) {
        using Gauss = boost::math::quadrature::gauss<double, 10>;
        const double right = Gauss::integrate([&](double r) { return std::pow(c + r, p) * r; }, 0.0, 1.0);
        const double total = Gauss::integrate([&](double r) { return std::pow(c + r, p); }, 0.0, 1.0);
        return {total - right, right};
    }
    // int_0^1 (c+r)^p dr and int_0^1 (c+r)^(p+1) dr; c == 0 needs p > -1 (p > -2 for the r-moment).
    auto prim = [](double q, double lo, double hi) {
        return (std::pow(hi, q + 1.0) - (lo > 0.0 ? std::pow(lo, q + 1.0) : 0.0)) / (q + 1.0);
    };
    double m0 = 0.0;
    double right = 0.0;
    if (c == 0.0) {
        right = 1.0 / (p + 2.0);
        m0 = 1.0 / (p + 1.0);
    } else {
        m0 = prim(p, c, c + 1.0);
        right = prim(p + 1.0, c, c + 1.0) - c * m0;
    }
    return {m0 - right, right};
}

namespace {

void check_grid_match(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid() == b.grid())) throw ConfigError("grid functions live on different grids");
}

}  // namespace

GridFunction frac_integral(const GridFunction& f, double order) {
    if (!(order > 0.0)) throw DomainError("fractional integral order must be positive");
    const Grid& g = f.grid();
    const std::size_t n = g.n();
    const double scale = std::pow(g.h(), order) / gamma(order);
    // Toeplitz weights: distance k = i - j in cells, node j gets wl[k], node j+1 gets wr[k].
    std::vector<double> wl(n, 0.0), wr(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        const auto [to_near, to_far] = linear_moments(order - 1.0, static_cast<double>(k - 1));
        wl[k] = to_far * scale;
        wr[k] = to_near * scale;
    }
    GridFunction out(g);
    for (std::size_t i = 1; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            const std::size_t k = i - j;
            s += wl[k] * f[j] + wr[k] * f[j + 1];
        }
        out[i] = s;
    }
    return out;
}

GridFunction frac_integral(const GridFunction& f, FracOrder order) {
    return frac_integral(f, order.alpha());
}

GridFunction frac_integral_cellwise(const Grid& grid, std::span<const double> cell_values,
                                    double order) {
    if (!(order > 0.0)) throw DomainError("fractional integral order must be positive");
    const std::size_t n = grid.n();
    if (cell_values.size() != n - 1) throw ConfigError("cellwise data needs n-1 values");
    const double scale = std::pow(grid.h(), order) / gamma(order + 1.0);
    std::vector<double> w(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        const double kd = static_cast<double>(k);
        w[k] = (std::pow(kd, order) - std::pow(kd - 1.0, order)) * scale;
    }
    GridFunction out(grid);
    for (std::size_t i = 1; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < i; ++j) s += w[i - j] * cell_values[j];
        out[i] = s;
    }
    return out;
}

GridFunction caputo(const GridFunction& f, FracOrder order) {
    const double a = order.alpha();
    const Grid& g = f.grid();
    const std::size_t n = g.n();
    const double scale = std::pow(g.h(), -a) / gamma(2.0 - a);
    std::vector<double> b(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double kd = static_cast<double>(k);
        b[k] = std::pow(kd + 1.0, 1.0 - a) - std::pow(kd, 1.0 - a);
    }
    GridFunction out(g);
    for (std::size_t i = 1; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < i; ++j) s += (f[j + 1] - f[j]) * b[i - j - 1];
        out[i] = s * scale;
    }
    out[0] = 2.0 * out[1] - out[2];
    return out;
}

RlDerivative rl_deriv(const GridFunction& f, FracOrder order) {
    const double a = order.alpha();
    RlDerivative r{caputo(f, order), f[0] != 0.0};
    if (r.node0_singular) {
        const double c = f[0] / gamma(1.0 - a);
        for (std::size_t i = 1; i < f.size(); ++i) r.values[i] += c * std::pow(f.grid().x(i), -a);
    }
    return r;
}

GridFunction leibniz_rl(const GridFunction& f, const GridFunction& g, FracOrder order) {
    check_grid_match(f, g);
    const double a = order.alpha();
    const Grid& grid = f.grid();
    const std::size_t n = grid.n();
    const double h = grid.h();
    const RlDerivative df = rl_deriv(f, order);

    // Weights of (x-p)^(-a-1) against hat functions, cells at distance k >= 2.
    std::vector<double> wl(n, 0.0), wr(n, 0.0);
    const double hs = std::pow(h, -a);
    for (std::size_t k = 2; k < n; ++k) {
        const auto [to_near, to_far] = linear_moments(-a - 1.0, static_cast<double>(k - 1));
        wl[k] = to_far * hs;
        wr[k] = to_near * hs;
    }
    const double last_cell = hs / (1.0 - a);
    const double c = a / gamma(1.0 - a);

    GridFunction out(grid);
    out[0] = g[0] * df.values[0];
    std::vector<double> phi(n);
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) phi[j] = (g[i] - g[j]) * f[j];
        double s = phi[i - 1] * last_cell;
        for (std::size_t j = 0; j + 1 < i; ++j) {
            const std::size_t k = i - j;
            s += wl[k] * phi[j] + wr[k] * phi[j + 1];
        }
        out[i] = g[i] * df.values[i] + c * s;
    }
    return out;
}

namespace {

// int_0^1 x^mu phi(x) dx for the piecewise-linear interpolant of phi, mu > -1.
double power_weighted_integral(std::span<const double> phi, double h, double mu) {
    const std::size_t n = phi.size();
    const double scale = std::pow(h, mu + 1.0);
    double s = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const auto [left, right] = linear_moments(mu, static_cast<double>(j));
        s += left * phi[j] + right * phi[j + 1];
    }
    return s * scale;
}

}  // namespace

CoercivitySplit coercivity_split(const GridFunction& w, FracOrder order) {
    const double a = order.alpha();
    const Grid& grid = w.grid();
    const std::size_t n = grid.n();
    const double h = grid.h();

    CoercivitySplit out;
    const GridFunction dc = caputo(w, order);
    std::vector<double> prod(n);
    for (std::size_t i = 0; i < n; ++i) prod[i] = dc[i] * w[i];
    out.lhs = trapezoid(prod, h);
    if (w[0] != 0.0) out.lhs += w[0] / gamma(1.0 - a) * power_weighted_integral(w.values(), h, -a);

    // Gagliardo term: 2 int_0^1 r^(1-a) G(r) dr with
    // G(r) = int_0^(1-r) ((w(p+r)-w(p))/r)^2 dp.
    std::vector<double> G(n, 0.0);
    {
        std::vector<double> d(n);
        d[0] = (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h);
        d[n - 1] = (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) / (2.0 * h);
        for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (w[i + 1] - w[i - 1]) / (2.0 * h);
        for (double& v : d) v *= v;
        G[0] = trapezoid(d, h);
    }
    std::vector<double> q(n);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double r = static_cast<double>(k) * h;
        const std::size_t m = n - k;
        for (std::size_t j = 0; j < m; ++j) {
            const double dq = (w[j + k] - w[j]) / r;
            q[j] = dq * dq;
        }
        G[k] = trapezoid(std::span<const double>(q.data(), m), h);
    }
    const double gag = 2.0 * power_weighted_integral(G, h, 1.0 - a);

    std::vector<double> w2(n), w2r(n);
    for (std::size_t i = 0; i < n; ++i) {
        w2[i] = w[i] * w[i];
        w2r[n - 1 - i] = w2[i];
    }
    const double bnd = power_weighted_integral(w2, h, -a) + power_weighted_integral(w2r, h, -a);
    out.rhs = (0.25 * a * gag + 0.5 * bnd) / gamma(1.0 - a);
    return out;
}

}  // namespace fracstef
