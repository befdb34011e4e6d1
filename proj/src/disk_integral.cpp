#include "plconv/disk_integral.hpp"

#include <array>

#include "plconv/circle_mean.hpp"

namespace plconv {
namespace {

struct InnerMean {
    double exponent;
    double worst_rel = 0.0;  // largest relative error of any inner evaluation

    // m_p(t) with d = |1 - t| supplied by the caller.
    double operator()(double t, double d) {
        constexpr double series_radius = 0.75;
        double value, err;
        if (t <= series_radius) {
            const auto s = circle::power_mean_series(t, exponent, 1e-17);
            value = s.value;
            err = s.tail_bound + s.rounding;
        } else if (t * series_radius >= 1.0) {
            const auto s = circle::power_mean_series(1.0 / t, exponent, 1e-17);
            const double scale = std::pow(t, exponent);
            value = scale * s.value;
            err = scale * (s.tail_bound + s.rounding);
        } else {
            const auto r = circle::power_mean(t, d, exponent, 1e-300, 1e-13);
            if (!r.converged) throw NumericalFailure("inner circular mean did not converge", r.value);
            value = r.value;
            err = r.error;
        }
        if (value > 0.0) worst_rel = std::max(worst_rel, err / value);
        return value;
    }
};

// \int_0^1 m_p(y r) weight(r) dr, nodes graded towards the critical radius.
template <class Weight>
quad::Result radial_integral(double y, double alpha, Weight weight, double abs_tol, double& inner_rel) {
    InnerMean inner{alpha - 2.0};
    quad::Options opt;
    opt.abs_tol = abs_tol;
    opt.max_panels = 2000;
    const std::array<double, 5> bp{0.0, 0.25, 0.5, 0.75, 1.0};
    const std::span<const double> breaks(bp);
    const double q = std::min(24.0, std::ceil(2.0 / alpha) + 1.0);
    quad::Result r;

    if (y < 0.5) {
        auto f = [&](double rad) { return inner(y * rad, 1.0 - y * rad) * weight(rad); };
        r = quad::integrate(f, breaks, opt);
    } else if (y <= 1.0) {
        // r = 1 - w^q
        auto f = [&](double w) {
            const double wq = std::pow(w, q);
            const double rad = 1.0 - wq;
            const double d = (1.0 - y) + y * wq;
            return inner(y * rad, d) * weight(rad) * q * wq / w;
        };
        r = quad::integrate(f, breaks, opt);
    } else {
        const double crit = 1.0 / y;
        // Inside: r = crit (1 - w^q), so 1 - y r = w^q.
        auto inside = [&](double w) {
            const double wq = std::pow(w, q);
            return inner(1.0 - wq, wq) * weight(crit * (1.0 - wq)) * crit * q * wq / w;
        };
        // Outside: r = crit + (1 - crit) w^q, so y r - 1 = (y - 1) w^q.
        auto outside = [&](double w) {
            const double wq = std::pow(w, q);
            const double d = (y - 1.0) * wq;
            return inner(1.0 + d, d) * weight(crit + (1.0 - crit) * wq) * (1.0 - crit) * q * wq / w;
        };
        opt.abs_tol = 0.5 * abs_tol;
        const auto a = quad::integrate(inside, breaks, opt);
        const auto b = quad::integrate(outside, breaks, opt);
        r = {a.value + b.value, a.error + b.error, a.evals + b.evals, a.converged && b.converged};
    }
    inner_rel = inner.worst_rel;
    return r;
}

// 1 - (1 + x) e^{-x}, cancellation-free for small x.
double one_minus_poly_exp(double x) {
    if (std::abs(x) < 0.1) {
        double sum = 0.0, pw = x;
        double fact = 1.0;
        for (int k = 2; k < 20; ++k) {
            pw *= x;
            fact *= k;
            sum += ((k % 2 == 0) ? 1.0 : -1.0) * (k - 1) * pw / fact;
        }
        return sum;
    }
    return -std::expm1(-x) - x * std::exp(-x);
}

}  // namespace

MeanResult area_integral_mean(Radius y, Alpha alpha, double tol) {
    require_theorem_range(alpha);
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const double yv = y.value();
    if (yv == 0.0) return {1.0, 0.0, Backend::area_integral, 0};
    const double prefactor = alpha.value() * alpha.value() * yv * yv;
    double inner_rel = 0.0;
    auto weight = [](double r) { return r > 0.0 ? -r * std::log(r) : 0.0; };
    const auto r = radial_integral(yv, alpha.value(), weight, 0.5 * tol / prefactor, inner_rel);
    const double value = 1.0 + prefactor * r.value;
    if (!r.converged)
        throw NumericalFailure("area_integral_mean did not converge (y=" + std::to_string(yv) +
                                   ", alpha=" + std::to_string(alpha.value()) + ")",
                               value);
    return {value, prefactor * (r.error + inner_rel * r.value), Backend::area_integral, r.evals};
}

RadialIntegralValue radial_integral_lower(Radius y, Alpha alpha) {
    const auto regime = classify_regime(y, alpha);
    const double yv = y.value();
    if (yv <= 1.0) return {0.25, regime};
    const double a = alpha.value();
    const double log_y = std::log(yv);
    // \int_0^{1/y} r ln(1/r) dr + y^{a-2} \int_{1/y}^1 r^{a-1} ln(1/r) dr
    const double below = (1.0 + 2.0 * log_y) / (4.0 * yv * yv);
    const double above = std::pow(yv, a - 2.0) * one_minus_poly_exp(a * log_y) / (a * a);
    return {below + above, regime};
}

double lower_bound_from_area(Radius y, Alpha alpha) {
    const double a = alpha.value();
    return 1.0 + a * a * y.squared() * radial_integral_lower(y, alpha).value;
}

quad::Result disk_average(Radius y, Alpha alpha, double tol) {
    require_theorem_range(alpha);
    double inner_rel = 0.0;
    auto weight = [](double r) { return 2.0 * r; };
    auto r = radial_integral(y.value(), alpha.value(), weight, tol, inner_rel);
    r.error += inner_rel * r.value;
    return r;
}

}  // namespace plconv
