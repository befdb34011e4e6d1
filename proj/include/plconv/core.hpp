// Shared domain types, validation, tolerance policy and seeding.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace plconv {

/// Exponent of the circular mean. Always positive; the PL-convexity
/// estimates additionally need it in (0, 2], see require_theorem_range().
class Alpha {
public:
    explicit Alpha(double v) : value_(v) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("alpha must be a finite positive real, got " + std::to_string(v));
    }
    double value() const noexcept { return value_; }
    /// alpha / 2, the exponent of the modulus squared.
    double half() const noexcept { return 0.5 * value_; }

private:
    double value_;
};

/// Throws unless alpha lies in (0, 2].
void require_theorem_range(Alpha alpha);

/// Modulus ratio |y| / |x| after rescaling and rotation.
class Radius {
public:
    explicit Radius(double v) : value_(v) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("radius must be finite and non-negative, got " + std::to_string(v));
    }
    double value() const noexcept { return value_; }
    double squared() const noexcept { return value_ * value_; }

private:
    double value_;
};

/// Candidate constant in front of |y|^2.
class Lambda {
public:
    explicit Lambda(double v) : value_(v) {
        if (!std::isfinite(v)) throw std::invalid_argument("lambda must be finite");
    }
    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Half-exponent used by the elementary lemmas, in [0, 1].
class Beta {
public:
    explicit Beta(double v) : value_(v) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1], got " + std::to_string(v));
    }
    double value() const noexcept { return value_; }

private:
    double value_;
};

enum class Backend { quadrature, series, area_integral, mc_green, mc_occupation };

std::string_view to_string(Backend b);
Backend parse_backend(std::string_view name);

struct MeanResult {
    double value = 0.0;
    double error_estimate = 0.0;  // claimed absolute-error bound
    Backend backend = Backend::quadrature;
    long long work = 0;           // integrand evaluations or samples
};

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    long long n = 0;
    bool variance_warning = false;
};

/// The three cases of the piecewise bound h.
enum class BranchRegime { small, middle, large };

std::string_view to_string(BranchRegime r);

/// (1 - alpha/2)^-1; +inf at alpha = 2.
double large_branch_threshold(Alpha alpha);

/// small for y^2 <= 1, large for y^2 >= (1 - alpha/2)^-1, middle otherwise.
BranchRegime classify_regime(Radius y, Alpha alpha);

namespace tolerance {
inline constexpr double quadrature = 1e-10;
inline constexpr double series = 1e-12;
}  // namespace tolerance

/// Numerical routine did not reach its accuracy target within budget.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, double best_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate) {}
    double best_estimate() const noexcept { return best_estimate_; }

private:
    double best_estimate_;
};

/// A requested mean does not exist (non-integrable kernel).
class DivergentMean : public std::domain_error {
public:
    DivergentMean(const std::string& what, double exponent) : std::domain_error(what), exponent_(exponent) {}
    double exponent() const noexcept { return exponent_; }

private:
    double exponent_;
};

using Rng = std::mt19937_64;

/// splitmix64 finalizer applied to (seed, stream); gives independent,
/// reproducible per-shard seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Runs body(0) ... body(n-1) on a small worker pool. Results must be
/// written to per-index slots; if any call throws, the exception of the
/// lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) noexcept { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace plconv
