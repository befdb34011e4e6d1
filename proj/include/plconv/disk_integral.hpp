// Area-integral representation of the circular mean against the Green
// function of the unit disk, and the closed-form radial integrals that
// produce the piecewise lower bound h.
#pragma once

#include "plconv/core.hpp"
#include "plconv/quadrature.hpp"

namespace plconv {

struct RadialIntegralValue {
    double value;
    BranchRegime regime;
};

/// 1 + alpha^2 y^2 \int_0^1 m_{alpha-2}(y r) r ln(1/r) dr, where m_p is the
/// circular mean with exponent p. alpha in (0, 2].
///
/// The radial nodes never land on r = 1/y; they are graded towards it with
/// a power map so the (1 - y r)^{alpha-1} blow-up of the inner mean is
/// integrated without regularisation.
MeanResult area_integral_mean(Radius y, Alpha alpha, double tol = tolerance::quadrature);

/// Closed form of \int_0^1 min{1, (y r)^{alpha-2}} r ln(1/r) dr.
RadialIntegralValue radial_integral_lower(Radius y, Alpha alpha);

/// 1 + alpha^2 y^2 * radial_integral_lower(y, alpha).
double lower_bound_from_area(Radius y, Alpha alpha);

/// (1/pi) \int_D |1 + y z|^{alpha-2} dA(z), the disk average of the
/// occupation-time integrand.
quad::Result disk_average(Radius y, Alpha alpha, double tol = 1e-8);

}  // namespace plconv
