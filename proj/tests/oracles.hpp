// Independent reference computations used only by the tests. None of them
// share code with the library.
#pragma once

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_pFq.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

// Midpoint rule on the full circle; exact for trigonometric polynomials of
// degree < n and spectrally accurate for smooth periodic integrands.
inline double circle_mean_riemann(double y, double alpha, long long n) {
    long double sum = 0.0L;
    const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (long long j = 0; j < n; ++j) {
        const double th = (static_cast<double>(j) + 0.5) * h;
        sum += std::pow(std::abs(std::complex<double>(1.0 + y * std::cos(th), y * std::sin(th))), alpha);
    }
    return static_cast<double>(sum / static_cast<long double>(n));
}

// Same midpoint rule for an arbitrary pair (x, y) without reducing to the
// radius |y|/|x|.
inline double unreduced_mean(std::complex<double> x, std::complex<double> y, double alpha, long long n) {
    long double sum = 0.0L;
    const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (long long j = 0; j < n; ++j) {
        const double th = (static_cast<double>(j) + 0.5) * h;
        sum += std::pow(std::abs(x + std::polar(1.0, th) * y), alpha);
    }
    return static_cast<double>(sum / static_cast<long double>(n));
}

// 2F1(-alpha/2, -alpha/2; 1; y^2), valid for y < 1.
inline double circle_mean_hypergeometric(double y, double alpha) {
    const double b = -0.5 * alpha;
    return boost::math::hypergeometric_pFq({b, b}, {1.0}, y * y);
}

// Gauss summation at y = 1: Gamma(alpha + 1) / Gamma(alpha/2 + 1)^2.
inline double circle_mean_at_one(double alpha) {
    const double g = boost::math::tgamma(0.5 * alpha + 1.0);
    return boost::math::tgamma(alpha + 1.0) / (g * g);
}

// \int_0^1 min{1, (y r)^{alpha - 2}} r ln(1/r) dr by tanh-sinh, split at the
// kink r = 1/y.
inline double radial_lower_brute(double y, double alpha) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [&](double r) {
        if (r <= 0.0 || r >= 1.0) return 0.0;
        return std::min(1.0, std::pow(y * r, alpha - 2.0)) * r * -std::log(r);
    };
    if (y <= 1.0) return ts.integrate(f, 0.0, 1.0);
    const double k = 1.0 / y;
    return ts.integrate(f, 0.0, k) + ts.integrate(f, k, 1.0);
}

}  // namespace oracle
