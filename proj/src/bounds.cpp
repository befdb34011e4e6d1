#include "plconv/bounds.hpp"

#include "plconv/circle_mean.hpp"

namespace plconv {

double bound_h_branch(BranchRegime branch, Radius y, Alpha alpha) {
    require_theorem_range(alpha);
    const double beta = alpha.half();
    const double t = y.squared();
    switch (branch) {
        case BranchRegime::small: return 1.0 + beta * beta * t;
        case BranchRegime::middle: return beta * beta + std::pow(t, beta) - beta * (1.0 - beta) * std::log(t);
        case BranchRegime::large: return std::pow(t, beta);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double bound_h(Radius y, Alpha alpha) { return bound_h_branch(classify_regime(y, alpha), y, alpha); }

double bound_g(Radius y, Alpha alpha) {
    require_theorem_range(alpha);
    const double beta = alpha.half();
    return std::pow(1.0 + beta * y.squared(), beta);
}

double bernoulli_gap(Beta beta, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("bernoulli_gap needs finite t > 0");
    const double b = beta.value();
    // (1 + b t)^b - 1 via expm1/log1p keeps the gap free of the leading 1.
    return b * b * t - std::expm1(b * std::log1p(b * t));
}

double lemma3_gap(Beta beta, double t) {
    const double b = beta.value();
    const double upper = 1.0 / (1.0 - b);
    if (!(t >= 1.0 && t <= upper))
        throw std::domain_error("lemma3_gap needs t in [1, 1/(1 - beta)], got t=" + std::to_string(t));
    return b * b + std::pow(t, b) - b * (1.0 - b) * std::log(t) - std::pow(1.0 + b * t, b);
}

AmGmSandwich am_gm_sandwich(Radius y, double r, double rel_tol) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("am_gm_sandwich needs a finite r > 0");
    const double yv = y.value();
    if (yv == 0.0) return {1.0, 1.0, 1.0};
    const double d = std::abs(1.0 - yv);
    const auto neg = circle::power_mean(yv, d, -r, 1e-300, rel_tol);
    const auto pos = circle::power_mean(yv, d, r, 1e-300, rel_tol);
    if (!neg.converged || !pos.converged)
        throw NumericalFailure("power mean did not converge in am_gm_sandwich", pos.value);
    return {std::pow(neg.value, -1.0 / r), std::exp(log_mean(y)), std::pow(pos.value, 1.0 / r)};
}

}  // namespace plconv
