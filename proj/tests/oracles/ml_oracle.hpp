#pragma once

// High-precision reference values built on boost.multiprecision, independent of
// the library's own gamma and series code.

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_50;

inline double gamma(double x) { return static_cast<double>(boost::math::tgamma(big(x))); }

/// Partial sum of sum_k z^k / Gamma(a k + b) in 50-digit arithmetic.
inline double mittag_leffler(double a, double b, double z, int terms = 200) {
    big s = 0, zp = 1;
    const big A(a), B(b), Z(z);
    for (int k = 0; k < terms; ++k) {
        s += zp / boost::math::tgamma(A * k + B);
        zp *= Z;
    }
    return static_cast<double>(s);
}

}  // namespace oracle
