// Monte Carlo estimators of the area-integral identity: (i) sampling from
// the Green-function density of the disk and (ii) Euler-discretised complex
// Brownian paths accumulating the occupation-time functional until exit.
//
// Work is split into fixed-size shards. Shard i draws from an engine seeded
// with derive_seed(seed, i) and the per-shard moments are merged in shard
// order, so results depend only on (seed, n) and not on thread scheduling.
#pragma once

#include <complex>
#include <cstdint>
#include <functional>

#include "plconv/core.hpp"

namespace plconv {

struct GreenSample {
    std::complex<double> point;  // |point| < 1
};

/// F(r) = r^2 (1 - 2 ln r): CDF of the radius under density 4 r ln(1/r).
double green_radius_cdf(double r);

/// Inverse of green_radius_cdf by safeguarded Newton iteration on s = r^2
/// with bisection fallback (tolerance 1e-12). Throws NumericalFailure if
/// the iteration does not settle.
double green_radius_quantile(double u);

/// One draw from the density 2 G(z) = (2/pi) ln(1/|z|) on the unit disk.
GreenSample sample_green_point(Rng& rng);

/// 1 + (alpha^2 y^2 / 4) * mean of |1 + y z_i|^{alpha-2} over Green samples.
/// The integrand has infinite variance for alpha <= 1, y >= 1; the estimate
/// is still returned but flagged. Requires n >= 1000.
McEstimate mc_area_mean(Radius y, Alpha alpha, long long n, std::uint64_t seed);

struct PathConfig {
    double dt = 1e-3;
    long long max_steps = 0;  // 0 selects ceil(12 / dt)
    std::uint64_t seed = 1;

    long long step_limit() const;
    void validate() const;
};

/// Estimates E[\int_0^tau f(B_s) ds] with left-endpoint sums along Euler
/// paths started at 0 and stopped at the first grid time with |B| >= 1.
/// Paths that reach max_steps are discarded; more than 0.1% discards is a
/// NumericalFailure.
McEstimate occupation_functional(const std::function<double(double, double)>& f, const PathConfig& cfg,
                                 long long n);

/// E[tau] for the discretely monitored exit; 1/2 + O(sqrt(dt)).
McEstimate exit_time_mc(const PathConfig& cfg, long long n);

/// 1 + (alpha^2 y^2 / 2) E[\int_0^tau |1 + y B_s|^{alpha-2} ds]. The
/// discrete exit overshoots, biasing the estimate upward by O(sqrt(dt)).
McEstimate occupation_time_mc(Radius y, Alpha alpha, const PathConfig& cfg, long long n);

/// Expected overshoot of a discretely monitored Gaussian walk across a flat
/// boundary, in units of sqrt(dt): -zeta(1/2) / sqrt(2 pi).
inline constexpr double overshoot_constant = 0.5825971579390107;

/// Bias allowance for occupation_time_mc: twice the first-order bias
/// obtained by pushing the exit radius out by overshoot_constant * sqrt(dt),
/// i.e. 2 * c sqrt(dt) * (alpha^2 y^2 / 2) * (disk average of the integrand).
double occupation_bias_allowance(Radius y, Alpha alpha, double dt, double c = overshoot_constant);

/// Heavy-tail rule shared by both estimators.
bool variance_warning(Radius y, Alpha alpha);

}  // namespace plconv
