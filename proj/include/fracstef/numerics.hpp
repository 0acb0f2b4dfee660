#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracstef/errors.hpp"

namespace fracstef {

/// Gamma function for x > 0, relative error below 1e-13.
double gamma(double x);

/// log Gamma(x) for x > 0; stays finite far past the overflow of gamma().
double log_gamma(double x);

struct MlfParams {
    double a = 1.0;
    double b = 1.0;
    double z = 0.0;
    double tol = 1e-15;
    int max_terms = 400;
};

/// Two-parameter Mittag-Leffler function E_{a,b}(z) by its Taylor series.
/// Summation stops once a term falls below tol relative to the running sum
/// (absolute when the sum is tiny); throws ConvergenceError otherwise, and also
/// when the largest term times machine epsilon exceeds 1e-10 max(|sum|, 1),
/// which happens for large negative z.
double mittag_leffler(const MlfParams& p);
double mittag_leffler(double a, double b, double z);

/// Plain partial sum of the first `terms` series terms, no stopping rule.
double mittag_leffler_partial(double a, double b, double z, int terms);

/// Uniform grid on [0,1] with n nodes.
class Grid {
public:
    explicit Grid(std::size_t n);

    std::size_t n() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    double x(std::size_t i) const noexcept { return nodes_[i]; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }

    bool operator==(const Grid& o) const noexcept { return n_ == o.n_; }

private:
    std::size_t n_;
    double h_;
    std::vector<double> nodes_;
};

Grid make_grid(std::size_t n);

/// Real samples on a Grid.
class GridFunction {
public:
    explicit GridFunction(Grid g);
    GridFunction(Grid g, std::vector<double> values);

    template <class F>
    static GridFunction sample(const Grid& g, F&& f) {
        std::vector<double> v(g.n());
        for (std::size_t i = 0; i < g.n(); ++i) v[i] = f(g.x(i));
        return GridFunction(g, std::move(v));
    }

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }

    double max_abs() const noexcept;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Trapezoid rule for samples with spacing h.
double trapezoid(std::span<const double> y, double h);

}  // namespace fracstef
