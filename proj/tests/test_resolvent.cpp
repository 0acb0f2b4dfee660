#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracstef/resolvent.hpp"

using namespace fracstef;

namespace {

GridFunction ones(const Grid& g) {
    return GridFunction::sample(g, [](double) { return 1.0; });
}

GridFunction sine(const Grid& g) {
    return GridFunction::sample(g, [](double x) { return std::sin(std::numbers::pi * x); });
}

}  // namespace

TEST_CASE("lambda must be nonpositive") {
    const Grid g(17);
    CHECK_THROWS_AS(ResolventProblem(FracOrder(0.5), 0.1, ones(g)), DomainError);
    CHECK_THROWS_AS(ResolventProblem(FracOrder(0.5), -INFINITY, ones(g)), DomainError);
}

TEST_CASE("lambda = 0, g = 1 reproduces (x^a - x^(a+1)) / Gamma(a+2)") {
    for (double a : {0.4, 0.75}) {
        const Grid g(65);
        const GridFunction u = resolvent_solution(ResolventProblem(FracOrder(a), 0.0, ones(g)));
        for (std::size_t i = 0; i < g.n(); ++i) {
            const double x = g.x(i);
            CHECK(std::abs(u[i] - (std::pow(x, a) - std::pow(x, a + 1.0)) / std::tgamma(a + 2.0)) <= 1e-13);
        }
    }
}

TEST_CASE("zero data gives the zero solution") {
    const Grid g(33);
    const GridFunction z = GridFunction::sample(g, [](double) { return 0.0; });
    const GridFunction u = resolvent_solution(ResolventProblem(FracOrder(0.6), -3.0, z));
    CHECK(u.max_abs() == 0.0);
}

TEST_CASE("boundary values vanish") {
    const Grid g(129);
    for (double lam : {0.0, -1.0, -10.0})
        for (double a : {0.6, 0.9}) {
            const GridFunction u = resolvent_solution(ResolventProblem(FracOrder(a), lam, sine(g)));
            CHECK(u[0] == 0.0);
            CHECK(std::abs(u[g.n() - 1]) <= 1e-10 * u.max_abs());
        }
}

TEST_CASE("zero candidate is detected as a non-solution") {
    const Grid g(65);
    const ResolventProblem p(FracOrder(0.7), -1.0, sine(g));
    const GridFunction z = GridFunction::sample(g, [](double) { return 0.0; });
    double gmax = 0.0;
    for (std::size_t i = 1; i + 1 < g.n(); ++i) gmax = std::max(gmax, std::abs(p.g[i]));
    CHECK(resolvent_residual(p, z) == doctest::Approx(gmax).epsilon(1e-14));
}

TEST_CASE("residual halves or better when the grid is refined") {
    for (double lam : {0.0, -1.0, -10.0}) {
        double prev = 0.0;
        for (std::size_t n : {65, 129, 257}) {
            const Grid g(n);
            const ResolventProblem p(FracOrder(0.75), lam, sine(g));
            const double r = resolvent_residual(p, resolvent_solution(p));
            if (prev > 0.0) CHECK(r <= 0.5 * prev);
            prev = r;
        }
    }
}

TEST_CASE("below the first eigenvalue the solution stays positive and grows as lambda decreases") {
    // Negative lambda approaches the spectrum of d/dx D^a, so there is no damping: for a = 1 this
    // is u'' + |lambda| u = -1, which resonates at lambda = -pi^2.
    const Grid g(129);
    double prev = 0.0;
    for (double lam : {0.0, -1.0, -3.0, -5.0}) {
        const GridFunction u = resolvent_solution(ResolventProblem(FracOrder(0.8), lam, ones(g)));
        for (std::size_t i = 0; i < g.n(); ++i) CHECK(u[i] >= -1e-12);
        CHECK(u.max_abs() > prev);
        prev = u.max_abs();
    }
}

TEST_CASE("residual with an explicit operator matches the default one") {
    const Grid g(65);
    const ResolventProblem p(FracOrder(0.6), -2.0, sine(g));
    const GridFunction u = resolvent_solution(p);
    const OperatorMatrix A = assemble_operator(FracOrder(0.6), g);
    CHECK(resolvent_residual(p, u, A) == resolvent_residual(p, u));
    CHECK_THROWS_AS(resolvent_residual(p, GridFunction::sample(Grid(33), [](double) { return 0.0; })), ConfigError);
}

TEST_CASE("singular resolvent is refused") {
    // Locate the first negative zero of E_{a+1,a+1} by bisection.
    const double a = 0.9;
    double lo = -20.0, hi = -1.0;
    REQUIRE(mittag_leffler(a + 1.0, a + 1.0, lo) * mittag_leffler(a + 1.0, a + 1.0, hi) < 0.0);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mittag_leffler(a + 1.0, a + 1.0, mid) * mittag_leffler(a + 1.0, a + 1.0, hi) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const Grid g(33);
    CHECK_THROWS_AS(resolvent_solution(ResolventProblem(FracOrder(a), 0.5 * (lo + hi), ones(g))), SingularResolventError);
    CHECK_NOTHROW(resolvent_solution(ResolventProblem(FracOrder(a), hi + 0.5, ones(g))));
}
