// Globally adaptive 7/15-point Gauss-Kronrod integration.
//
// Panels are kept in a max-heap keyed by their error estimate; the worst
// panel is bisected until the summed error meets max(abs_tol, rel_tol*|I|)
// or the panel budget is spent. The per-panel error estimate follows the
// QUADPACK qk15 heuristic. Nodes are interior, so the integrand is never
// evaluated at a breakpoint.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "plconv/core.hpp"

namespace plconv::quad {

struct Options {
    double abs_tol = tolerance::quadrature;
    double rel_tol = 0.0;
    int max_panels = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    long long evals = 0;
    bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Weights of the embedded 7-point Gauss rule (odd Kronrod nodes + centre).
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::array<double, 7> lo{}, hi{};
    const double fc = f(centre);
    double res_k = fc * kronrod_weights[7];
    double res_g = fc * gauss_weights[3];
    double res_abs = std::abs(res_k);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        lo[j] = f(centre - dx);
        hi[j] = f(centre + dx);
        const double pair = lo[j] + hi[j];
        res_k += kronrod_weights[j] * pair;
        res_abs += kronrod_weights[j] * (std::abs(lo[j]) + std::abs(hi[j]));
        if (j % 2 == 1) res_g += gauss_weights[j / 2] * pair;
    }
    const double mean = 0.5 * res_k;
    double res_asc = kronrod_weights[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        res_asc += kronrod_weights[j] * (std::abs(lo[j] - mean) + std::abs(hi[j] - mean));

    const double value = res_k * half;
    res_abs *= std::abs(half);
    res_asc *= std::abs(half);
    double err = std::abs((res_k - res_g) * half);
    if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    if (res_abs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * res_abs, err);
    if (!std::isfinite(value) || !std::isfinite(err))
        throw NumericalFailure("non-finite integrand value on [" + std::to_string(a) + ", " + std::to_string(b) + "]",
                               std::numeric_limits<double>::quiet_NaN());
    return {a, b, value, err};
}

}  // namespace detail

/// Integrates f over the partition given by `breakpoints` (ascending, at
/// least two entries).
template <class F>
Result integrate(F&& f, std::span<const double> breakpoints, const Options& opt = {}) {
    std::priority_queue<detail::Panel> heap;
    Result out;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i + 1] > breakpoints[i])) continue;
        auto p = detail::gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]);
        out.evals += 15;
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    std::vector<detail::Panel> frozen;  // panels too narrow to split further
    while (!heap.empty() && total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) &&
           static_cast<int>(heap.size() + frozen.size()) < opt.max_panels) {
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            frozen.push_back(worst);
            continue;
        }
        auto left = detail::gauss_kronrod_15(f, worst.a, mid);
        auto right = detail::gauss_kronrod_15(f, mid, worst.b);
        out.evals += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running totals.
    total = 0.0;
    total_err = 0.0;
    for (const auto& p : frozen) {
        total += p.value;
        total_err += p.error;
    }
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.error = total_err;
    out.converged = total_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    return out;
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
    const std::array<double, 2> bp{a, b};
    return integrate(std::forward<F>(f), std::span<const double>(bp), opt);
}

}  // namespace plconv::quad
