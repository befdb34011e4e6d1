// The intermediate bound h, the target bound g, the two elementary
// lemmas behind h >= g, and the AM-GM / Jensen sandwich for |1 + y z|.
#pragma once

#include "plconv/core.hpp"

namespace plconv {

/// Piecewise bound h, evaluated in t = y^2:
///   small:  1 + (alpha^2/4) t
///   middle: alpha^2/4 + t^{alpha/2} - (alpha/2)(1 - alpha/2) ln t
///   large:  t^{alpha/2}
double bound_h(Radius y, Alpha alpha);

/// A single branch formula of h, regardless of where y falls. Used to
/// inspect one-sided values at the branch thresholds.
double bound_h_branch(BranchRegime branch, Radius y, Alpha alpha);

/// g(y) = (1 + (alpha/2) y^2)^{alpha/2}.
double bound_g(Radius y, Alpha alpha);

/// 1 + beta^2 t - (1 + beta t)^beta; non-negative for t > 0.
double bernoulli_gap(Beta beta, double t);

/// beta^2 + t^beta - beta (1 - beta) ln t - (1 + beta t)^beta for
/// t in [1, 1/(1 - beta)]; throws std::domain_error outside that interval,
/// where the inequality is not claimed.
double lemma3_gap(Beta beta, double t);

struct AmGmSandwich {
    double lower;  // (mean of f^{-r})^{-1/r}
    double mid;    // exp(mean of ln f) = max{1, y}
    double upper;  // (mean of f^r)^{1/r}
};

/// Power means of f = |1 + y z| with exponents -r and r around the
/// geometric mean. Throws DivergentMean when the -r mean does not exist
/// (y = 1, r >= 1).
AmGmSandwich am_gm_sandwich(Radius y, double r, double rel_tol = 1e-13);

}  // namespace plconv
