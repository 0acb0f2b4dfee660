#include "fracstef/numerics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fracstef {

namespace {

// Lanczos approximation, g = 7, nine coefficients.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double xm1) {
    double a = kLanczos[0];
    for (std::size_t k = 1; k < kLanczos.size(); ++k) a += kLanczos[k] / (xm1 + static_cast<double>(k));
    return a;
}

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        std::ostringstream os;
        os << what << ": argument must be positive and finite, got " << x;
        throw DomainError(os.str());
    }
}

}  // namespace

double gamma(double x) {
    require_positive(x, "gamma");
    if (x < 0.5) return gamma(x + 1.0) / x;
    if (x > 12.0) {
        // Upward recurrence from [11, 12).
        const double k = std::floor(x - 11.0);
        double r = x - k;
        double prod = gamma(r);
        for (; r < x - 0.5; r += 1.0) prod *= r;
        return prod;
    }
    const double xm1 = x - 1.0;
    const double t = xm1 + kLanczosG + 0.5;
    // Split the power so that t^(x-1/2) does not overflow before exp(-t) damps it.
    const double half = std::pow(t, 0.5 * (xm1 + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half * std::exp(-t) * half * lanczos_sum(xm1);
}

double log_gamma(double x) {
    require_positive(x, "log_gamma");
    if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);
    const double xm1 = x - 1.0;
    const double t = xm1 + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t +
           std::log(lanczos_sum(xm1));
}

namespace {

double ml_term(double a, double b, double z, int k, double zpow) {
    const double arg = a * k + b;
    if (arg <= 170.0 && std::isfinite(zpow)) return zpow / gamma(arg);
    const double mag = std::exp(k * std::log(std::abs(z)) - log_gamma(arg));
    return (z < 0.0 && (k % 2 == 1)) ? -mag : mag;
}

void check_mlf(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        std::ostringstream os;
        os << "mittag_leffler: parameters must be positive (a=" << a << ", b=" << b << ")";
        throw DomainError(os.str());
    }
}

}  // namespace

double mittag_leffler(const MlfParams& p) {
    check_mlf(p.a, p.b);
    if (!(p.tol > 0.0)) throw DomainError("mittag_leffler: tol must be positive");
    if (p.z == 0.0) return 1.0 / gamma(p.b);

    double sum = 0.0;
    double zpow = 1.0;
    double peak = 0.0;
    int small_run = 0;
    for (int k = 0; k < p.max_terms; ++k) {
        const double t = ml_term(p.a, p.b, p.z, k, zpow);
        sum += t;
        zpow *= p.z;
        peak = std::max(peak, std::abs(t));
        const double scale = std::max(std::abs(sum), std::numeric_limits<double>::min());
        small_run = (std::abs(t) <= p.tol * scale) ? small_run + 1 : 0;
        if (small_run >= 2) {
            if (peak * std::numeric_limits<double>::epsilon() > 1e-10 * std::max(std::abs(sum), 1.0)) {
                std::ostringstream os;
                os << "mittag_leffler: cancellation error above 1e-10 (absolute below 1, relative above; a=" << p.a
                   << ", b=" << p.b << ", z=" << p.z << ", largest term " << peak << ")";
                throw ConvergenceError(os.str());
            }
            return sum;
        }
    }
    std::ostringstream os;
    os << "mittag_leffler: no convergence within " << p.max_terms << " terms (a=" << p.a
       << ", b=" << p.b << ", z=" << p.z << ")";
    throw ConvergenceError(os.str());
}

double mittag_leffler(double a, double b, double z) {
    MlfParams p;
    p.a = a;
    p.b = b;
    p.z = z;
    return mittag_leffler(p);
}

double mittag_leffler_partial(double a, double b, double z, int terms) {
    check_mlf(a, b);
    double sum = 0.0;
    double zpow = 1.0;
    for (int k = 0; k < terms; ++k) {
        sum += (z == 0.0 && k > 0) ? 0.0 : ml_term(a, b, z, k, zpow);
        zpow *= z;
    }
    return sum;
}

Grid::Grid(std::size_t n) : n_(n), h_(0.0) {
    if (n < 3) {
        std::ostringstream os;
        os << "grid needs at least 3 nodes, got " << n;
        throw ConfigError(os.str());
    }
    h_ = 1.0 / static_cast<double>(n - 1);
    nodes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) nodes_[i] = static_cast<double>(i) * h_;
    nodes_.back() = 1.0;
}

Grid make_grid(std::size_t n) { return Grid(n); }

GridFunction::GridFunction(Grid g) : grid_(std::move(g)), values_(grid_.n(), 0.0) {}

GridFunction::GridFunction(Grid g, std::vector<double> values)
    : grid_(std::move(g)), values_(std::move(values)) {
    if (values_.size() != grid_.n()) throw ConfigError("grid function length does not match grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw DomainError("grid function values must be finite");
}

double GridFunction::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double trapezoid(std::span<const double> y, double h) {
    if (y.size() < 2) return 0.0;
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
    return s * h;
}

}  // namespace fracstef
