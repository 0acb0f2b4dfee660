#pragma once

// Integer-order one-phase Stefan problem
//   u_t = u_xx on 0 < x < s(t),  u(0,t) = u(s,t) = 0,  s' = -u_x(s,t),  s(0) = b,
// solved with the Landau transform p = x/s, Crank-Nicolson in time, central
// differences in space and a per-step fixed point on s(t_{k+1}).
// Shares no code with the library.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

struct ClassicalFront {
    std::vector<double> t;
    std::vector<double> s;
};

namespace detail {

// Thomas algorithm; sub/diag/sup/rhs have equal length, sub[0] and sup[last] unused.
inline std::vector<double> tridiag(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                                   std::vector<double> rhs) {
    const std::size_t m = diag.size();
    for (std::size_t i = 1; i < m; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> x(m);
    x[m - 1] = rhs[m - 1] / diag[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
    return x;
}

// Second-order one-sided v_p at p = 1.
inline double edge_slope(const std::vector<double>& v, double dp) {
    const std::size_t n = v.size();
    return (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dp);
}

}  // namespace detail

inline ClassicalFront classical_stefan(const std::function<double(double)>& u0, double b, double T, int n, int steps) {
    const double dp = 1.0 / (n - 1);
    const double dt = T / steps;
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = u0(b * i * dp);
    v[0] = 0.0;
    v[n - 1] = 0.0;

    // L(s, sdot) v at interior node i: v_pp / s^2 + p sdot / s v_p.
    auto apply = [&](const std::vector<double>& w, double s, double sd, int i) {
        const double p = i * dp;
        return (w[i + 1] - 2.0 * w[i] + w[i - 1]) / (dp * dp * s * s) + p * sd / s * (w[i + 1] - w[i - 1]) / (2.0 * dp);
    };

    ClassicalFront out;
    out.t.push_back(0.0);
    out.s.push_back(b);
    double s = b;
    double sd = -detail::edge_slope(v, dp) / s;
    for (int k = 0; k < steps; ++k) {
        double s_new = s + dt * sd;
        std::vector<double> v_new = v;
        double sd_new = sd;
        for (int it = 0; it < 200; ++it) {
            const int m = n - 2;
            std::vector<double> sub(m), diag(m), sup(m), rhs(m);
            for (int r = 0; r < m; ++r) {
                const int i = r + 1;
                const double p = i * dp;
                const double diff = 1.0 / (dp * dp * s_new * s_new);
                const double adv = p * sd_new / s_new / (2.0 * dp);
                sub[r] = -0.5 * dt * (diff - adv);
                diag[r] = 1.0 + dt * diff;
                sup[r] = -0.5 * dt * (diff + adv);
                rhs[r] = v[i] + 0.5 * dt * apply(v, s, sd, i);
            }
            const std::vector<double> inner = detail::tridiag(sub, diag, sup, rhs);
            for (int r = 0; r < m; ++r) v_new[r + 1] = inner[r];
            const double sd_next = -detail::edge_slope(v_new, dp) / s_new;
            const double s_next = s + 0.5 * dt * (sd + sd_next);
            const bool done = std::abs(s_next - s_new) <= 1e-14 * s_next;
            s_new = s_next;
            sd_new = sd_next;
            if (done) break;
        }
        v = v_new;
        s = s_new;
        sd = sd_new;
        out.t.push_back((k + 1) * dt);
        out.s.push_back(s);
    }
    return out;
}

}  // namespace oracle
