// Numerical recovery of the best constant I_{2,alpha}(C): the largest
// lambda with (|x|^2 + lambda |y|^2)^{1/2} <= (\int_T |x + z y|^alpha dm)^{1/alpha}.
#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "plconv/core.hpp"

namespace plconv {

struct Witness {
    Lambda lambda;
    Radius y;
    double violation;  // (1 + lambda y^2)^{alpha/2} - a(y), > 0
};

struct SharpnessReport {
    Alpha alpha;
    double lambda_inf;            // min of lambda_profile over the grid
    Radius argmin_y;
    double lambda_extrapolated;   // Richardson limit y -> 0 from the two smallest grid points
    double second_derivative;     // a''(0)
    std::optional<Witness> witness;  // for lambda = reference + 1e-3, alpha <= 2 only
};

/// alpha/2 for alpha <= 2, 1 otherwise.
double reference_constant(Alpha alpha);

/// lambda(y) = (a(y)^{2/alpha} - 1) / y^2: the largest lambda for which the
/// reduced inequality holds at this y. For y >= 2 the inversion
/// a(y) = y^alpha a(1/y) keeps the cancellation out of the result.
double lambda_profile(Alpha alpha, Radius y);

/// Minimises lambda_profile over y_grid (positive entries). For alpha <= 2
/// the minimum sits at the smallest grid point; for alpha > 2 at the largest.
SharpnessReport best_constant_estimate(Alpha alpha, std::span<const double> y_grid);

/// a''(0) = alpha^2 / 2 from the first series coefficient, cross-checked
/// against a central second difference of the quadrature mean at h = 1e-3.
/// Throws NumericalFailure if the two disagree by more than 1e-6 relative.
double second_derivative_a(Alpha alpha);

/// 2 (a(h) - 1) / h^2 with a(h) - 1 integrated directly (a(-h) = a(h)).
double second_difference_a(Alpha alpha, double h = 1e-3);

/// First y = 2^{-k}, k = 0..max_halvings, with a certified violation
/// (1 + lambda y^2)^{alpha/2} - a(y) > 0, i.e. larger than its error bound.
std::optional<Witness> search_violation(Alpha alpha, Lambda lambda, int max_halvings = 30);

/// search_violation for lambda >= alpha/2 + 1e-4; throws NumericalFailure
/// if the halving search runs below 2^-30 without a violation.
Witness sharpness_witness(Alpha alpha, Lambda lambda);

/// (\int_T |x + z y|^alpha dm)^{1/alpha} - (|x|^2 + lambda |y|^2)^{1/2} after
/// reducing to the radius |y|/|x|. Requires alpha in (0, 2] and
/// lambda <= alpha/2.
double verify_theorem(std::complex<double> x, std::complex<double> y, Alpha alpha, Lambda lambda);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

/// n equally spaced points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, int n);

}  // namespace plconv
