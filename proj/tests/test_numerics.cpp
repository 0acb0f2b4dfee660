#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fracstef/numerics.hpp"
#include "oracles/ml_oracle.hpp"

using namespace fracstef;

TEST_CASE("gamma at known values") {
    CHECK(fracstef::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fracstef::gamma(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(fracstef::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-14));
}

TEST_CASE("gamma relative error against a 50-digit reference") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 2.2);
    double worst = 0.0;
    for (int i = 0; i < 400; ++i) {
        const double x = std::pow(10.0, u(rng));
        worst = std::max(worst, std::abs(fracstef::gamma(x) / oracle::gamma(x) - 1.0));
    }
    for (double x : {0.25, 1.5, 2.25, 7.5, 33.3, 100.5, 170.5}) worst = std::max(worst, std::abs(fracstef::gamma(x) / oracle::gamma(x) - 1.0));
    CHECK(worst <= 1e-13);
}

TEST_CASE("gamma recurrence on [0.1, 10]") {
    for (double x = 0.1; x <= 10.0; x += 0.0731) CHECK(std::abs(fracstef::gamma(x + 1.0) / (x * fracstef::gamma(x)) - 1.0) <= 1e-12);
}

TEST_CASE("log_gamma matches log of gamma and stays finite for large arguments") {
    for (double x : {0.3, 1.0, 4.5, 20.0, 150.0}) CHECK(log_gamma(x) == doctest::Approx(std::log(fracstef::gamma(x))).epsilon(1e-13));
    CHECK(log_gamma(1000.0) == doctest::Approx(std::lgamma(1000.0)).epsilon(1e-13));
}

TEST_CASE("gamma rejects non-positive arguments") {
    CHECK_THROWS_AS(fracstef::gamma(0.0), DomainError);
    CHECK_THROWS_AS(fracstef::gamma(-1.5), DomainError);
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
}

TEST_CASE("Mittag-Leffler classical identities") {
    for (double z = -5.0; z <= 5.0; z += 0.5) {
        CHECK(std::abs(mittag_leffler(1.0, 1.0, z) - std::exp(z)) <= 1e-12);
        CHECK(std::abs(mittag_leffler(2.0, 1.0, z * z) - std::cosh(z)) <= 1e-12);
    }
}

TEST_CASE("Mittag-Leffler at zero is 1/Gamma(b)") {
    for (double a : {0.3, 1.0, 1.75})
        for (double b : {0.4, 1.0, 2.5}) CHECK(mittag_leffler(a, b, 0.0) == doctest::Approx(1.0 / fracstef::gamma(b)).epsilon(1e-13));
}

TEST_CASE("Mittag-Leffler against extended-precision partial sums") {
    const double ref = oracle::mittag_leffler(1.75, 1.75, -3.0);
    CHECK(mittag_leffler(1.75, 1.75, -3.0) == doctest::Approx(ref).epsilon(1e-13));
    for (double a : {0.6, 1.6, 1.9})
        for (double z : {-10.0, -1.0, 0.7, 4.0}) {
            if (a < 1.0 && z < -5.0) continue;
            const double r = oracle::mittag_leffler(a, a + 1.0, z, 300);
            CHECK(std::abs(mittag_leffler(a, a + 1.0, z) - r) <= 1e-13 * std::max(1.0, std::abs(r)) + 1e-12);
        }
}

TEST_CASE("Mittag-Leffler refuses results destroyed by cancellation") {
    CHECK_THROWS_AS(mittag_leffler(0.6, 1.6, -10.0), ConvergenceError);
    CHECK_THROWS_AS(mittag_leffler(1.0, 1.0, -40.0), ConvergenceError);
    CHECK_NOTHROW(mittag_leffler(1.75, 2.75, -10.0));
}

TEST_CASE("Mittag-Leffler truncation is dominated by twice the first omitted term") {
    for (double a : {0.8, 1.0, 1.75})
        for (double z : {-50.0, -20.0, -3.0, 2.0, 10.0}) {
            for (int k = 60; k <= 160; k += 20) {
                const double sk = mittag_leffler_partial(a, 1.0, z, k);
                const double s2k = mittag_leffler_partial(a, 1.0, z, 2 * k);
                const double omitted = std::abs(mittag_leffler_partial(a, 1.0, z, k + 1) - sk);
                if (omitted < 1e-3) CHECK(std::abs(s2k - sk) <= 2.0 * omitted + 1e-15 * std::max(1.0, std::abs(s2k)));
            }
        }
}

TEST_CASE("Mittag-Leffler convergence error when max_terms is too small") {
    MlfParams p;
    p.a = 1.0;
    p.b = 1.0;
    p.z = 30.0;
    p.max_terms = 10;
    CHECK_THROWS_AS(mittag_leffler(p), ConvergenceError);
    p.a = -1.0;
    CHECK_THROWS_AS(mittag_leffler(p), DomainError);
}

TEST_CASE("grid construction") {
    const Grid g3 = make_grid(3);
    CHECK(g3.x(0) == 0.0);
    CHECK(g3.x(1) == 0.5);
    CHECK(g3.x(2) == 1.0);
    CHECK(make_grid(5).h() == 0.25);
    CHECK_THROWS_AS(make_grid(2), ConfigError);
    const Grid g(513);
    for (std::size_t i = 1; i < g.n(); ++i) CHECK(g.x(i) > g.x(i - 1));
    CHECK(g.x(g.n() - 1) == 1.0);
    CHECK(std::abs(g.h() * double(g.n() - 1) - 1.0) <= 1e-15);
}

TEST_CASE("grid function invariants") {
    const Grid g(5);
    CHECK_THROWS_AS(GridFunction(g, {1.0, 2.0}), ConfigError);
    CHECK_THROWS_AS(GridFunction(g, {0.0, NAN, 0.0, 0.0, 0.0}), DomainError);
    const GridFunction f = GridFunction::sample(g, [](double x) { return x * x; });
    CHECK(f[4] == 1.0);
    CHECK(f.max_abs() == 1.0);
}
