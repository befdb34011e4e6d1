// Evaluators of the circular mean a(y) = \int_T |1 + y z|^alpha dm(z) and of
// the logarithmic mean \int_T ln|1 + y z| dm(z).
#pragma once

#include <utility>

#include "plconv/core.hpp"
#include "plconv/quadrature.hpp"

namespace plconv {

struct SeriesTruncation {
    long long terms_used = 0;
    double tail_bound = 0.0;  // rigorous bound on the omitted (non-negative) tail
};

/// Adaptive quadrature of (1/pi) \int_0^pi |1 + y e^{i theta}|^alpha d theta.
/// Throws NumericalFailure if the evaluation budget runs out.
MeanResult mean_quadrature(Radius y, Alpha alpha, double tol = tolerance::quadrature);

/// Squared generalized-binomial series sum_k C(alpha/2, k)^2 y^{2k}, applied
/// to min(y, 1/y) together with the inversion factor. At y = 1 the series
/// converges slowly; the result then carries whatever tail bound the term
/// budget reached.
std::pair<MeanResult, SeriesTruncation> mean_series(Radius y, Alpha alpha, double tol = tolerance::series);

struct InversionFactor {
    double scale;      // y^alpha
    double reflected;  // 1 / y
};

/// a(y) = y^alpha a(1/y). Requires y > 0.
InversionFactor inversion_symmetry(Radius y, Alpha alpha);

/// \int_T ln|1 + y z| dm(z) by quadrature; the log singularity at y = 1 is
/// integrable and handled by a graded substitution.
double log_mean(Radius y, double tol = 1e-12);

/// Lower-level kernels shared with the disk-integral and bounds modules.
/// Every routine takes the distance |1 - t| explicitly so that callers
/// parametrising a neighbourhood of t = 1 keep full relative accuracy.
namespace circle {

/// Power mean (1/pi) \int_0^pi |1 + t e^{i theta}|^exponent d theta. Any real
/// exponent; at t = 1 the mean exists only for exponent > -1, otherwise
/// DivergentMean is thrown.
quad::Result power_mean(double t, double dist_to_one, double exponent, double abs_tol, double rel_tol = 0.0);

/// (1/pi) \int_0^pi ln|1 + t e^{i theta}| d theta.
quad::Result log_mean(double t, double dist_to_one, double abs_tol);

struct SeriesSum {
    double value = 0.0;
    long long terms = 0;
    double tail_bound = 0.0;
    double rounding = 0.0;  // summation error bound
};

/// sum_k C(exponent/2, k)^2 t^{2k} for 0 <= t <= 1 and exponent > -2. Stops
/// once the tail bound is <= abs_tol or after max_terms terms.
SeriesSum power_mean_series(double t, double exponent, double abs_tol, long long max_terms = 10'000'000);

/// a(y) - 1 for 0 <= y <= 1/2, by quadrature of the symmetrised excess
/// integrand; accurate relative to (alpha y / 2)^2 as y -> 0.
quad::Result mean_excess(double y, double alpha, double rel_tol);

}  // namespace circle

}  // namespace plconv
