#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracstef/stefan.hpp"

using namespace fracstef;

namespace {

StefanParams quick(double T = 0.5) {
    StefanParams p;
    p.alpha = 0.75;
    p.n = 65;
    p.dt = 2e-3;
    p.T = T;
    return p;
}

GridFunction cap(const StefanParams& p, double theta) {
    return scaled_cap(Grid(p.n), p.alpha, p.b, p.M, theta);
}

SolutionField constant_flux_field(const BoundaryTrajectory& tr, double q) {
    SolutionField f;
    f.trajectory = tr;
    f.front_flux.assign(tr.size(), q);
    return f;
}

}  // namespace

TEST_CASE("P with constant flux on a fixed front is sqrt(b^2 - 2 q b t)") {
    const double b = 1.3, q = -0.2;
    const BoundaryTrajectory tr = BoundaryTrajectory::constant(b, 0.5, 50);
    const BoundaryTrajectory ps = apply_P(tr, constant_flux_field(tr, q));
    for (std::size_t k = 0; k < tr.size(); ++k)
        CHECK(ps.s[k] == doctest::Approx(std::sqrt(b * b - 2.0 * q * b * tr.times[k])).epsilon(1e-14));
    CHECK_THROWS_AS(apply_P(tr, constant_flux_field(tr, 10.0)), DomainError);
    SolutionField short_field = constant_flux_field(tr, q);
    short_field.front_flux.pop_back();
    CHECK_THROWS_AS(apply_P(tr, short_field), ConfigError);
}

TEST_CASE("integral residual vanishes at t = 0") {
    const StefanParams p = quick(0.05);
    const GridFunction u0 = cap(p, 0.7);
    const SolutionField f = solve_mbp(p, BoundaryTrajectory::linear(p.b, 0.3, p.T, p.steps()), u0);
    const std::vector<double> r = integral_condition_residual(f, u0);
    CHECK(r.size() == f.v.size());
    CHECK(std::abs(r[0]) <= 1e-14);
}

TEST_CASE("zero data: the front does not move") {
    const StefanParams p = quick(0.1);
    const GridFunction z = GridFunction::sample(Grid(p.n), [](double) { return 0.0; });
    const StefanSolution sol = solve_stefan(p, z);
    CHECK(sol.iterations == 1);
    for (double s : sol.front.s) CHECK(s == p.b);
    for (double r : sol.integral_residual) CHECK(std::abs(r) <= 1e-14);
}

TEST_CASE("full cap data: monotone front inside the admissible band") {
    const StefanParams p = quick();
    const StefanSolution sol = solve_stefan(p, cap(p, 1.0));
    CHECK(sol.windows.size() == 1);
    CHECK(sol.residual_history.back() <= 1e-8 * p.b);
    for (std::size_t k = 1; k < sol.front.size(); ++k) CHECK(sol.front.s[k] >= sol.front.s[k - 1]);
    CHECK(sol.front.s.back() > p.b);
    CHECK(sol.front.s.back() <= p.b + p.M * p.T);
    CHECK(sol.front.admissibility_violation(p.b, p.M) == 0.0);
    for (double q : sol.field.front_flux) {
        CHECK(q <= 0.0);
        CHECK(q >= -0.5 * p.M - 0.05 * p.M);
    }
}

TEST_CASE("explicit window count splits the horizon") {
    const StefanParams p = quick(0.2);
    StefanOptions o;
    o.windows = 2;
    const StefanSolution two = solve_stefan(p, cap(p, 1.0), o);
    CHECK(two.windows.size() == 2);
    CHECK(two.windows[0].t_end == doctest::Approx(0.1));
    CHECK(two.windows[1].b == doctest::Approx(two.front.s[50]));
    const StefanSolution one = solve_stefan(p, cap(p, 1.0));
    for (std::size_t k = 0; k < one.front.size(); ++k) CHECK(std::abs(one.front.s[k] - two.front.s[k]) <= 1e-6);
}

TEST_CASE("inadmissible data and options are rejected") {
    const StefanParams p = quick(0.05);
    const GridFunction full = cap(p, 1.0);
    std::vector<double> over(full.values().begin(), full.values().end());
    over[p.n / 2] *= 1.01;
    CHECK_THROWS_AS(solve_stefan(p, GridFunction(Grid(p.n), over)), ValidationError);
    const GridFunction open_end = GridFunction::sample(Grid(p.n), [](double x) { return 0.01 * x; });
    CHECK_THROWS_AS(solve_stefan(p, open_end), ValidationError);
    StefanOptions o;
    o.omega = 0.0;
    CHECK_THROWS_AS(solve_stefan(p, cap(p, 0.5), o), ValidationError);
    CHECK_THROWS_AS(solve_stefan(p, scaled_cap(Grid(33), p.alpha, p.b, p.M, 0.5)), ConfigError);
}

TEST_CASE("too few iterations raise a convergence error carrying the history") {
    const StefanParams p = quick(0.2);
    StefanOptions o;
    o.max_iters = 1;
    try {
        solve_stefan(p, cap(p, 1.0), o);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.history().size() == 1);
        CHECK(e.history()[0] > 1e-8);
    }
}

TEST_CASE("Gronwall bound: closed forms") {
    const std::vector<double> t{0.0, 0.25, 0.5, 1.0};
    // n = 2, h = 3, p = 2, q = 1: 2 (1 + (1/2) * (3/2) t).
    const std::vector<double> g = gronwall_bound(2.0, 1.0, [](double) { return 2.0; }, [](double) { return 3.0; }, t);
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(g[k] == doctest::Approx(2.0 * (1.0 + 0.75 * t[k])).epsilon(1e-14));

    // n = 1 + t, h = 1, p = 1, q = 0: (1 + t)(1 + log(1 + t)), trapezoid on a fine grid.
    std::vector<double> fine(2001);
    for (std::size_t k = 0; k < fine.size(); ++k) fine[k] = static_cast<double>(k) / 2000.0;
    const std::vector<double> h = gronwall_bound(1.0, 0.0, [](double s) { return 1.0 + s; }, [](double) { return 1.0; }, fine);
    CHECK(h.back() == doctest::Approx(2.0 * (1.0 + std::log(2.0))).epsilon(1e-7));

    CHECK_THROWS_AS(gronwall_bound(1.0, 1.0, [](double) { return 1.0; }, [](double) { return 1.0; }, t), DomainError);
    CHECK_THROWS_AS(gronwall_bound(2.0, 1.0, [](double s) { return 2.0 - s; }, [](double) { return 1.0; }, t), DomainError);
    CHECK_THROWS_AS(gronwall_bound(2.0, 1.0, [](double) { return 1.0; }, [](double) { return -1.0; }, t), DomainError);
}

TEST_CASE("Gronwall tolerance vanishes with the data gap and grows with it") {
    CHECK(gronwall_tolerance(0.75, 1.0, 1.0, 0.5, 0.0) == 0.0);
    double prev = 0.0;
    for (double d : {1e-6, 1e-4, 1e-2, 1e-1}) {
        const double t = gronwall_tolerance(0.75, 1.0, 1.0, 0.5, d);
        CHECK(t > prev);
        CHECK(t >= d);
        prev = t;
    }
    CHECK(gronwall_tolerance(0.75, 1.0, 1.0, 1.0, 1e-3) > gronwall_tolerance(0.75, 1.0, 1.0, 0.5, 1e-3));
    CHECK_THROWS_AS(gronwall_tolerance(0.75, 1.0, 1.0, 0.5, -1e-3), DomainError);
    CHECK_THROWS_AS(gronwall_tolerance(0.75, 0.0, 1.0, 0.5, 1e-3), DomainError);
}

TEST_CASE("monotone dependence check") {
    const StefanParams p = quick(0.2);
    const StefanSolution lo = solve_stefan(p, cap(p, 0.5));
    const StefanSolution hi = solve_stefan(p, cap(p, 1.0));
    const MonotoneReport rep = monotone_dependence_check(lo, hi, 0.0);
    CHECK(rep.pass);
    CHECK(rep.max_difference <= 0.0);
    CHECK_THROWS_AS(monotone_dependence_check(hi, lo, 1.0), ValidationError);

    // Data that cross are not comparable.
    const Grid g(p.n);
    const GridFunction c = cap(p, 1.0);
    std::vector<double> left(g.n()), right(g.n());
    for (std::size_t i = 0; i < g.n(); ++i) {
        left[i] = 0.3 * c[i] + 0.1 * c[i] * (1.0 - g.x(i));
        right[i] = 0.3 * c[i] + 0.1 * c[i] * g.x(i);
    }
    const StefanSolution a = solve_stefan(p, GridFunction(g, left));
    const StefanSolution b = solve_stefan(p, GridFunction(g, right));
    CHECK_THROWS_AS(monotone_dependence_check(a, b, 1.0), ValidationError);
    CHECK_THROWS_AS(monotone_dependence_check(b, a, 1.0), ValidationError);
}
