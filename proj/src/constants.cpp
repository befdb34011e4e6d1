#include "plconv/constants.hpp"

#include <algorithm>

#include "plconv/circle_mean.hpp"

namespace plconv {
namespace {

constexpr double profile_rel_tol = 1e-12;

// a(y)^{2/alpha} - 1 for y <= 1/2.
double powered_excess(double y, double alpha) {
    const auto e = circle::mean_excess(y, alpha, profile_rel_tol);
    if (!e.converged) throw NumericalFailure("mean excess did not converge", e.value);
    return std::expm1((2.0 / alpha) * std::log1p(e.value));
}

quad::Result relative_mean(double y, double alpha) {
    auto r = circle::power_mean(y, std::abs(1.0 - y), alpha, 0.0, profile_rel_tol);
    if (!r.converged) throw NumericalFailure("circular mean did not converge", r.value);
    return r;
}

struct Difference {
    double value;
    double error;
};

// b(y) - a(y) = sum_k (C(beta,k) lambda^k - C(beta,k)^2) y^{2k}; the k = 0
// terms cancel exactly. Needs y <= 1/2 and lambda y^2 <= 1/2.
Difference violation_series(double beta, double lambda, double y) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double y2 = y * y;
    const double ly2 = lambda * y2;
    double coeff = 1.0, pa = 1.0, pb = 1.0;
    double sum = 0.0, abs_sum = 0.0, tail = 0.0;
    for (int k = 1; k < 400; ++k) {
        coeff *= (beta - (k - 1)) / k;
        pa *= y2;
        pb *= ly2;
        const double term = coeff * pb - coeff * coeff * pa;
        sum += term;
        abs_sum += std::abs(coeff * pb) + coeff * coeff * pa;
        // |C(beta, j)| <= max(1, |C(beta, k)|) for j > k when 0 < beta <= 1.
        const double c = std::max(1.0, std::abs(coeff));
        const double la = std::abs(ly2);
        tail = c * (std::abs(pb) * la / (1.0 - la) + c * pa * y2 / (1.0 - y2));
        if (coeff == 0.0 || tail < 1e-3 * eps * std::abs(sum)) break;
    }
    return {sum, tail + 4.0 * eps * abs_sum};
}

Difference violation_at(double alpha, double lambda, double y) {
    const double beta = 0.5 * alpha;
    if (y <= 0.5 && std::abs(lambda) * y * y <= 0.5 && beta <= 1.0) return violation_series(beta, lambda, y);
    const auto a = relative_mean(y, alpha);
    const double b = std::pow(1.0 + lambda * y * y, beta);
    return {b - a.value, a.error + 4.0 * std::numeric_limits<double>::epsilon() * b};
}

}  // namespace

double reference_constant(Alpha alpha) { return alpha.value() <= 2.0 ? alpha.half() : 1.0; }

double lambda_profile(Alpha alpha, Radius y) {
    const double yv = y.value();
    if (!(yv > 0.0)) throw std::invalid_argument("lambda_profile needs y > 0");
    const double a = alpha.value();
    if (yv <= 0.5) return powered_excess(yv, a) / (yv * yv);
    if (yv >= 2.0) {
        const double s = 1.0 / yv;
        return (1.0 - s * s) + powered_excess(s, a);
    }
    const auto m = relative_mean(yv, a);
    return std::expm1((2.0 / a) * std::log(m.value)) / (yv * yv);
}

SharpnessReport best_constant_estimate(Alpha alpha, std::span<const double> y_grid) {
    if (y_grid.size() < 2) throw std::invalid_argument("best_constant_estimate needs at least two grid points");
    std::vector<double> ys(y_grid.begin(), y_grid.end());
    std::sort(ys.begin(), ys.end());
    if (!(ys.front() > 0.0)) throw std::invalid_argument("grid points must be positive");
    std::vector<double> profile(ys.size());
    parallel_for(ys.size(), [&](std::size_t i) { profile[i] = lambda_profile(alpha, Radius(ys[i])); });

    const auto it = std::min_element(profile.begin(), profile.end());
    const auto idx = static_cast<std::size_t>(it - profile.begin());
    // lambda(y) = lambda(0) + c y^2 + O(y^4).
    const double y1 = ys[0] * ys[0], y2 = ys[1] * ys[1];
    const double extrapolated = (y2 * profile[0] - y1 * profile[1]) / (y2 - y1);

    SharpnessReport rep{alpha, *it, Radius(ys[idx]), extrapolated, second_derivative_a(alpha), std::nullopt};
    if (alpha.value() <= 2.0) rep.witness = search_violation(alpha, Lambda(reference_constant(alpha) + 1e-3));
    return rep;
}

double second_difference_a(Alpha alpha, double h) {
    if (!(h > 0.0 && h <= 0.5)) throw std::invalid_argument("second difference step must lie in (0, 1/2]");
    const auto e = circle::mean_excess(h, alpha.value(), profile_rel_tol);
    if (!e.converged) throw NumericalFailure("mean excess did not converge", e.value);
    return 2.0 * e.value / (h * h);
}

double second_derivative_a(Alpha alpha) {
    // 2 C(alpha/2, 1)^2
    const double from_series = 2.0 * alpha.half() * alpha.half();
    const double from_difference = second_difference_a(alpha);
    if (std::abs(from_difference - from_series) > 1e-6 * from_series)
        throw NumericalFailure("a''(0): series " + std::to_string(from_series) + " vs difference " +
                                   std::to_string(from_difference),
                               from_series);
    return from_series;
}

std::optional<Witness> search_violation(Alpha alpha, Lambda lambda, int max_halvings) {
    require_theorem_range(alpha);
    double y = 1.0;
    for (int k = 0; k <= max_halvings; ++k, y *= 0.5) {
        const auto d = violation_at(alpha.value(), lambda.value(), y);
        if (d.value > d.error) return Witness{lambda, Radius(y), d.value};
    }
    return std::nullopt;
}

Witness sharpness_witness(Alpha alpha, Lambda lambda) {
    require_theorem_range(alpha);
    if (!(lambda.value() >= alpha.half() + 1e-4))
        throw std::invalid_argument("sharpness_witness needs lambda >= alpha/2 + 1e-4");
    auto w = search_violation(alpha, lambda, 30);
    if (!w)
        throw NumericalFailure("no violation found down to y = 2^-30; lambda too close to alpha/2",
                               std::numeric_limits<double>::quiet_NaN());
    return *w;
}

double verify_theorem(std::complex<double> x, std::complex<double> y, Alpha alpha, Lambda lambda) {
    require_theorem_range(alpha);
    if (lambda.value() > alpha.half()) throw std::invalid_argument("verify_theorem needs lambda <= alpha/2");
    const double ax = std::abs(x), ay = std::abs(y);
    const double lam = lambda.value();
    if (ay == 0.0) return 0.0;
    // x = 0: the mean of |z|^alpha y is |y|^alpha.
    if (ax == 0.0) return ay - std::sqrt(std::max(0.0, lam)) * ay;
    const double rho = ay / ax;
    const auto a = mean_quadrature(Radius(rho), alpha);
    const double rhs = ax * std::pow(a.value, 1.0 / alpha.value());
    const double lhs = ax * std::sqrt(std::max(0.0, 1.0 + lam * rho * rho));
    return rhs - lhs;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0 && hi > lo && n >= 2)) throw std::invalid_argument("log grid needs 0 < lo < hi and n >= 2");
    std::vector<double> g(static_cast<std::size_t>(n));
    const double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
    if (!(hi > lo && n >= 2)) throw std::invalid_argument("linear grid needs lo < hi and n >= 2");
    std::vector<double> g(static_cast<std::size_t>(n));
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + step * i;
    g.back() = hi;
    return g;
}

}  // namespace plconv
