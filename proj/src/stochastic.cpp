#include "plconv/stochastic.hpp"

#include <numbers>
#include <vector>

#include "plconv/disk_integral.hpp"

namespace plconv {
namespace {

constexpr long long green_shard = 1 << 16;
constexpr long long path_shard = 256;

// Welford accumulator with Chan's pairwise merge.
struct Moments {
    long long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const long long total = n + o.n;
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.n) / static_cast<double>(total);
        m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / static_cast<double>(total);
        n = total;
    }

    double stderr_of_mean() const {
        return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    }
};

struct ShardResult {
    Moments moments;
    long long discarded = 0;
};

// Splits n draws into shards of `shard` items, runs them in parallel and
// merges in shard order.
template <class Body>
std::vector<ShardResult> run_shards(long long n, long long shard, std::uint64_t seed, Body body) {
    const auto count = static_cast<std::size_t>((n + shard - 1) / shard);
    std::vector<ShardResult> results(count);
    parallel_for(count, [&](std::size_t i) {
        Rng rng(derive_seed(seed, i));
        const long long begin = static_cast<long long>(i) * shard;
        const long long items = std::min(shard, n - begin);
        body(rng, items, results[i]);
    });
    return results;
}

void require_samples(long long n) {
    if (n < 1000) throw std::invalid_argument("Monte Carlo estimators need n >= 1000, got " + std::to_string(n));
}

}  // namespace

double green_radius_cdf(double r) {
    if (r <= 0.0) return 0.0;
    if (r >= 1.0) return 1.0;
    return r * r * (1.0 - 2.0 * std::log(r));
}

double green_radius_quantile(double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
    if (u == 0.0) return 0.0;
    if (u == 1.0) return 1.0;
    // Solve s (1 - ln s) = u for s = r^2; the left side is increasing on
    // (0, 1) with derivative -ln s.
    double lo = 0.0, hi = 1.0;
    double s = u / (1.0 - std::log(u));
    for (int iter = 0; iter < 200; ++iter) {
        const double residual = s * (1.0 - std::log(s)) - u;
        if (residual > 0.0)
            hi = s;
        else
            lo = s;
        const double slope = -std::log(s);
        double next = slope > 0.0 ? s - residual / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) <= 1e-12 * s || hi - lo <= 1e-12 * hi) return std::sqrt(next);
        s = next;
    }
    throw NumericalFailure("Green radius inversion did not converge for u=" + std::to_string(u), std::sqrt(s));
}

GreenSample sample_green_point(Rng& rng) {
    const double r = green_radius_quantile(uniform01(rng));
    const double angle = 2.0 * std::numbers::pi * uniform01(rng);
    return {std::polar(r, angle)};
}

bool variance_warning(Radius y, Alpha alpha) { return alpha.value() <= 1.0 && y.value() >= 1.0; }

McEstimate mc_area_mean(Radius y, Alpha alpha, long long n, std::uint64_t seed) {
    require_samples(n);
    const double yv = y.value();
    const bool warn = variance_warning(y, alpha);
    if (yv == 0.0) return {1.0, 0.0, n, warn};
    const double half_exp = 0.5 * (alpha.value() - 2.0);
    const auto shards = run_shards(n, green_shard, seed, [&](Rng& rng, long long items, ShardResult& out) {
        for (long long k = 0; k < items; ++k) {
            const auto z = sample_green_point(rng).point;
            const double re = 1.0 + yv * z.real();
            const double im = yv * z.imag();
            out.moments.push(std::pow(re * re + im * im, half_exp));
        }
    });
    Moments total;
    for (const auto& s : shards) total.merge(s.moments);
    const double prefactor = alpha.value() * alpha.value() * yv * yv / 4.0;
    return {1.0 + prefactor * total.mean, prefactor * total.stderr_of_mean(), total.n, warn};
}

long long PathConfig::step_limit() const {
    return max_steps > 0 ? max_steps : static_cast<long long>(std::ceil(12.0 / dt));
}

void PathConfig::validate() const {
    if (!(dt > 0.0 && dt <= 0.1)) throw std::invalid_argument("path time step must lie in (0, 0.1]");
    if (max_steps < 0) throw std::invalid_argument("max_steps must be non-negative");
}

McEstimate occupation_functional(const std::function<double(double, double)>& f, const PathConfig& cfg,
                                 long long n) {
    cfg.validate();
    require_samples(n);
    const double dt = cfg.dt;
    const double step_sd = std::sqrt(dt);
    const long long limit = cfg.step_limit();
    const auto shards = run_shards(n, path_shard, cfg.seed, [&](Rng& rng, long long items, ShardResult& out) {
        std::normal_distribution<double> normal(0.0, step_sd);
        for (long long k = 0; k < items; ++k) {
            double x = 0.0, y = 0.0, acc = 0.0;
            long long steps = 0;
            bool exited = false;
            while (steps < limit) {
                acc += f(x, y);
                x += normal(rng);
                y += normal(rng);
                ++steps;
                if (x * x + y * y >= 1.0) {
                    exited = true;
                    break;
                }
            }
            if (exited)
                out.moments.push(acc * dt);
            else
                ++out.discarded;
        }
    });
    Moments total;
    long long discarded = 0;
    for (const auto& s : shards) {
        total.merge(s.moments);
        discarded += s.discarded;
    }
    if (static_cast<double>(discarded) > 1e-3 * static_cast<double>(n))
        throw NumericalFailure(std::to_string(discarded) + " of " + std::to_string(n) +
                                   " paths did not exit within max_steps",
                               total.mean);
    return {total.mean, total.stderr_of_mean(), total.n, false};
}

McEstimate exit_time_mc(const PathConfig& cfg, long long n) {
    return occupation_functional([](double, double) { return 1.0; }, cfg, n);
}

McEstimate occupation_time_mc(Radius y, Alpha alpha, const PathConfig& cfg, long long n) {
    cfg.validate();
    require_samples(n);
    const double yv = y.value();
    const bool warn = variance_warning(y, alpha);
    if (yv == 0.0) return {1.0, 0.0, n, warn};
    const double half_exp = 0.5 * (alpha.value() - 2.0);
    auto integrand = [yv, half_exp](double x, double y2) {
        const double re = 1.0 + yv * x;
        const double im = yv * y2;
        return std::pow(re * re + im * im, half_exp);
    };
    const auto est = occupation_functional(integrand, cfg, n);
    const double prefactor = alpha.value() * alpha.value() * yv * yv / 2.0;
    return {1.0 + prefactor * est.mean, prefactor * est.stderr_, est.n, warn};
}

double occupation_bias_allowance(Radius y, Alpha alpha, double dt, double c) {
    const double yv = y.value();
    if (yv == 0.0) return 0.0;
    const double prefactor = alpha.value() * alpha.value() * yv * yv / 2.0;
    const auto avg = disk_average(y, alpha);
    return 2.0 * c * std::sqrt(dt) * prefactor * (avg.value + avg.error);
}

}  // namespace plconv
