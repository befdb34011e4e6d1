#include "plconv/circle_mean.hpp"

#include <array>
#include <numbers>
#include <vector>

namespace plconv {

namespace circle {
namespace {

constexpr double pi = std::numbers::pi;

// sin(x/2) / (x/2)
double half_sinc(double x) {
    const double h = 0.5 * x;
    return h < 1e-8 ? 1.0 : std::sin(h) / h;
}

double log_sinh(double u) { return u < 20.0 ? std::log(std::sinh(u)) : u - std::numbers::ln2; }

double log_cosh(double u) { return u + std::log1p(std::exp(-2.0 * u)) - std::numbers::ln2; }

// log(1 + e^{2a})
double log1p_exp2(double a) { return a > 20.0 ? 2.0 * a + std::log1p(std::exp(-2.0 * a)) : std::log1p(std::exp(2.0 * a)); }

// Integrates kernel(log q, log jacobian) over a parametrisation of
// theta in [0, pi], where q = |1 + t e^{i theta}|^2 and phi = pi - theta.
//
// * t = 1: phi = pi e^{-v}, which grades the nodes geometrically into the
//   singular endpoint; the remaining sliver [0, phi_V] is added analytically
//   through `sliver`.
// * |1 - t|^2 >= t: the integrand is smooth, integrate in phi directly.
// * otherwise: phi = (d / sqrt t) sinh u resolves the peak of width ~d at
//   phi = 0 and makes the integrand smooth in u.
template <class Kernel, class Sliver>
quad::Result circle_integral(double t, double d, Kernel kernel, Sliver sliver, double v_max, double abs_tol,
                             double rel_tol) {
    quad::Options opt;
    opt.abs_tol = abs_tol * pi;
    opt.rel_tol = rel_tol;
    quad::Result r;

    if (d == 0.0) {
        auto f = [&](double v) {
            const double phi = pi * std::exp(-v);
            const double log_phi = std::log(pi) - v;
            const double log_q = 2.0 * (log_phi + std::log(half_sinc(phi)));
            return kernel(log_q, log_phi);
        };
        std::vector<double> bp{0.0};
        for (double v = 1.0; v < v_max; v *= 2.0) bp.push_back(v);
        bp.push_back(v_max);
        r = quad::integrate(f, std::span<const double>(bp), opt);
        r.value += sliver(pi * std::exp(-v_max));
    } else if (d * d >= t) {
        auto f = [&](double phi) {
            const double s = std::sin(0.5 * phi);
            return kernel(std::log(d * d + 4.0 * t * s * s), 0.0);
        };
        const std::array<double, 3> bp{0.0, 0.5 * pi, pi};
        r = quad::integrate(f, std::span<const double>(bp), opt);
    } else {
        const double scale = d / std::sqrt(t);
        const double log_scale = std::log(scale);
        const double log_d2 = 2.0 * std::log(d);
        const double u_max = std::asinh(pi / scale);
        auto f = [&](double u) {
            const double phi = scale * std::sinh(u);
            const double a = std::log(half_sinc(phi)) + log_sinh(u);
            return kernel(log_d2 + log1p_exp2(a), log_scale + log_cosh(u));
        };
        std::vector<double> bp{0.0};
        for (double u = 1.0; u < u_max; u += 2.0) bp.push_back(u);
        bp.push_back(u_max);
        r = quad::integrate(f, std::span<const double>(bp), opt);
    }
    r.value /= pi;
    r.error /= pi;
    return r;
}

}  // namespace

quad::Result power_mean(double t, double dist_to_one, double exponent, double abs_tol, double rel_tol) {
    if (t == 0.0 || exponent == 0.0) return {1.0, 0.0, 1, true};
    const double p = exponent;
    double v_max = 40.0;
    if (dist_to_one == 0.0) {
        if (!(p > -1.0))
            throw DivergentMean("mean of |1 + z|^" + std::to_string(p) + " over the unit circle diverges", p);
        // Sliver [0, phi_V] contributes ~ phi_V^{p+1} / (p + 1).
        const double decay = p + 1.0;
        const double target = 1e-3 * std::max(abs_tol, 1e-300) * decay;
        v_max = std::clamp(std::log(pi) - std::log(target) / decay, 40.0, 700.0);
    }
    auto kernel = [p](double log_q, double log_jac) { return std::exp(0.5 * p * log_q + log_jac); };
    auto sliver = [p](double phi) { return std::exp((p + 1.0) * std::log(phi)) / (p + 1.0); };
    return circle_integral(t, dist_to_one, kernel, sliver, v_max, abs_tol, rel_tol);
}

quad::Result log_mean(double t, double dist_to_one, double abs_tol) {
    if (t == 0.0) return {0.0, 0.0, 1, true};
    auto kernel = [](double log_q, double log_jac) { return 0.5 * log_q * std::exp(log_jac); };
    auto sliver = [](double phi) { return phi * (std::log(phi) - 1.0); };
    return circle_integral(t, dist_to_one, kernel, sliver, 60.0, abs_tol, 0.0);
}

SeriesSum power_mean_series(double t, double exponent, double abs_tol, long long max_terms) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("series radius must lie in [0, 1]");
    if (!(exponent > -2.0)) throw std::invalid_argument("series exponent must exceed -2");
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double beta = 0.5 * exponent;
    const double t2 = t * t;
    // Both tail bounds assume k > beta, where the term ratio
    // ((k - beta) / (k + 1))^2 t^2 is below t^2 and decays like a power.
    const double geometric = t2 < 1.0 ? t2 / (1.0 - t2) : std::numeric_limits<double>::infinity();
    const double power_exp = 2.0 * beta + 2.0;

    SeriesSum out;
    double sum = 1.0, comp = 0.0, abs_sum = 1.0;
    double coeff = 1.0, t_pow = 1.0;
    out.terms = 1;
    out.tail_bound = std::numeric_limits<double>::infinity();
    if (t == 0.0) out.tail_bound = 0.0;
    for (long long k = 1; k < max_terms && out.tail_bound > abs_tol; ++k) {
        coeff *= (beta - static_cast<double>(k - 1)) / static_cast<double>(k);
        t_pow *= t2;
        const double term = coeff * coeff * t_pow;
        // Neumaier summation.
        const double s = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - s) + term : (term - s) + sum;
        sum = s;
        abs_sum += term;
        out.terms = k + 1;
        if (coeff == 0.0 || term == 0.0) {
            if (coeff == 0.0 || static_cast<double>(k) > beta) {
                out.tail_bound = 0.0;
                break;
            }
            continue;
        }
        if (static_cast<double>(k) > beta) {
            double factor = geometric;
            if (power_exp > 1.0) factor = std::min(factor, static_cast<double>(k + 1) / (power_exp - 1.0));
            out.tail_bound = term * factor;
        }
    }
    out.value = sum + comp;
    out.rounding = 4.0 * eps * abs_sum;
    return out;
}

quad::Result mean_excess(double y, double alpha, double rel_tol) {
    if (!(y >= 0.0 && y <= 0.5)) throw std::invalid_argument("mean_excess needs 0 <= y <= 1/2");
    if (y == 0.0) return {0.0, 0.0, 1, true};
    const double beta = 0.5 * alpha;
    const double y2 = y * y;
    // Pair theta with pi - theta so the O(y) odd part cancels inside the
    // integrand rather than across panels.
    auto f = [&](double theta) {
        const double c = 2.0 * y * std::cos(theta);
        return std::expm1(beta * std::log1p(y2 + c)) + std::expm1(beta * std::log1p(y2 - c));
    };
    quad::Options opt;
    // a(y) - 1 >= (beta y)^2 since every series term is non-negative.
    opt.abs_tol = rel_tol * pi * beta * beta * y2;
    auto r = quad::integrate(f, 0.0, 0.5 * pi, opt);
    r.value /= pi;
    r.error /= pi;
    return r;
}

}  // namespace circle

MeanResult mean_quadrature(Radius y, Alpha alpha, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const double yv = y.value();
    auto r = circle::power_mean(yv, std::abs(1.0 - yv), alpha.value(), tol);
    if (!r.converged)
        throw NumericalFailure("mean_quadrature did not converge (y=" + std::to_string(yv) +
                                   ", alpha=" + std::to_string(alpha.value()) + ")",
                               r.value);
    return {r.value, r.error, Backend::quadrature, r.evals};
}

InversionFactor inversion_symmetry(Radius y, Alpha alpha) {
    if (!(y.value() > 0.0)) throw std::invalid_argument("inversion needs y > 0");
    if (y.value() == 1.0) return {1.0, 1.0};
    return {std::pow(y.value(), alpha.value()), 1.0 / y.value()};
}

std::pair<MeanResult, SeriesTruncation> mean_series(Radius y, Alpha alpha, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    double scale = 1.0, t = y.value();
    if (t > 1.0) {
        const auto inv = inversion_symmetry(y, alpha);
        scale = inv.scale;
        t = inv.reflected;
    }
    const auto s = circle::power_mean_series(t, alpha.value(), tol / scale);
    MeanResult m{scale * s.value, scale * (s.tail_bound + s.rounding), Backend::series, s.terms};
    return {m, SeriesTruncation{s.terms, scale * s.tail_bound}};
}

double log_mean(Radius y, double tol) {
    const double yv = y.value();
    auto r = circle::log_mean(yv, std::abs(1.0 - yv), tol);
    if (!r.converged) throw NumericalFailure("log_mean did not converge (y=" + std::to_string(yv) + ")", r.value);
    return r.value;
}

}  // namespace plconv
