#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "plconv/circle_mean.hpp"
#include "plconv/constants.hpp"

using namespace plconv;

TEST_CASE("reference constant") {
    CHECK(reference_constant(Alpha(1.0)) == 0.5);
    CHECK(reference_constant(Alpha(2.0)) == 1.0);
    CHECK(reference_constant(Alpha(3.0)) == 1.0);
}

TEST_CASE("lambda profile examples") {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(lambda_profile(Alpha(1.0), Radius(1.0)) == doctest::Approx(16.0 / pi2 - 1.0).epsilon(1e-11));
    CHECK(lambda_profile(Alpha(2.0), Radius(0.3)) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(lambda_profile(Alpha(2.0), Radius(7.0)) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(lambda_profile(Alpha(1.0), Radius(1e-4)) == doctest::Approx(0.5).epsilon(1e-7));
    CHECK_THROWS_AS(lambda_profile(Alpha(1.0), Radius(0.0)), std::invalid_argument);
}

TEST_CASE("lambda profile branches agree with the direct formula") {
    for (double a : {0.3, 1.0, 1.7, 3.0})
        for (double y : {0.2, 0.5, 2.0, 5.0}) {
            const double m = mean_quadrature(Radius(y), Alpha(a), 1e-12 * std::pow(1 + y, a)).value;
            const double direct = (std::pow(m, 2.0 / a) - 1.0) / (y * y);
            CHECK(lambda_profile(Alpha(a), Radius(y)) == doctest::Approx(direct).epsilon(1e-9));
        }
}

TEST_CASE("lambda profile stays above alpha/2 for alpha <= 2") {
    for (double a : {0.1, 0.5, 1.0, 1.5, 2.0})
        for (double y : log_grid(1e-3, 1e2, 60)) CHECK(lambda_profile(Alpha(a), Radius(y)) >= 0.5 * a - 1e-10);
}

TEST_CASE("lambda profile monotonicity (exploratory, reported only)") {
    for (double a : {0.1, 0.5, 1.0, 1.5, 2.0}) {
        const auto ys = log_grid(1e-3, 1e2, 200);
        int decreases = 0;
        double prev = lambda_profile(Alpha(a), Radius(ys[0]));
        for (std::size_t i = 1; i < ys.size(); ++i) {
            const double v = lambda_profile(Alpha(a), Radius(ys[i]));
            if (v < prev - 1e-12) ++decreases;
            prev = v;
        }
        MESSAGE("alpha=" << a << ": " << decreases << " decreasing steps on 200 log-spaced y in [1e-3, 1e2]");
    }
}

TEST_CASE("second derivative at 0") {
    for (double a : {0.1, 0.25, 0.5, 1.0, 1.5, 2.0}) {
        CHECK(second_derivative_a(Alpha(a)) == doctest::Approx(a * a / 2).epsilon(1e-15));
        CHECK(second_difference_a(Alpha(a)) == doctest::Approx(a * a / 2).epsilon(1e-6));
    }
    CHECK_THROWS_AS(second_difference_a(Alpha(1.0), 0.0), std::invalid_argument);
}

TEST_CASE("witnesses above alpha/2 and none at alpha/2") {
    for (double a : {0.1, 0.25, 0.5, 1.0, 1.5, 2.0}) {
        const auto w = sharpness_witness(Alpha(a), Lambda(a / 2 + 1e-3));
        CHECK(w.violation > 0.0);
        const double direct = std::pow(1.0 + w.lambda.value() * w.y.squared(), a / 2) -
                              oracle::circle_mean_hypergeometric(std::min(w.y.value(), 0.999), a);
        if (w.y.value() < 0.999) CHECK(direct > 0.0);
        CHECK_FALSE(search_violation(Alpha(a), Lambda(a / 2)).has_value());
    }
    CHECK_THROWS_AS(sharpness_witness(Alpha(1.0), Lambda(0.5)), std::invalid_argument);
    CHECK_THROWS_AS(sharpness_witness(Alpha(2.5), Lambda(2.0)), std::invalid_argument);
}

TEST_CASE("best constant estimate") {
    const auto grid = log_grid(1e-4, 1e3, 141);
    const auto r1 = best_constant_estimate(Alpha(1.0), grid);
    CHECK(std::abs(r1.lambda_inf - 0.5) < 1e-4);
    CHECK(r1.argmin_y.value() == doctest::Approx(1e-4));
    CHECK(r1.lambda_extrapolated == doctest::Approx(0.5).epsilon(1e-9));
    REQUIRE(r1.witness.has_value());
    CHECK(r1.witness->violation > 0.0);

    const auto r3 = best_constant_estimate(Alpha(3.0), grid);
    CHECK(std::abs(r3.lambda_inf - 1.0) < 1e-3);
    CHECK_FALSE(r3.witness.has_value());
    CHECK_THROWS_AS(best_constant_estimate(Alpha(1.0), std::vector<double>{0.1}), std::invalid_argument);
}

TEST_CASE("verify_theorem examples") {
    CHECK(verify_theorem({1, 0}, {0, 0}, Alpha(1.0), Lambda(0.5)) == 0.0);
    CHECK(std::abs(verify_theorem({1, 0}, {1, 0}, Alpha(2.0), Lambda(1.0))) < 1e-12);
    CHECK(verify_theorem({1, 0}, {1, 0}, Alpha(1.0), Lambda(0.5)) ==
          doctest::Approx(4.0 / std::numbers::pi - std::sqrt(1.5)).epsilon(1e-10));
    CHECK(verify_theorem({0, 0}, {0, 2}, Alpha(1.0), Lambda(0.5)) == doctest::Approx(2.0 - std::sqrt(0.5) * 2.0));
    CHECK_THROWS_AS(verify_theorem({1, 0}, {1, 0}, Alpha(1.0), Lambda(0.6)), std::invalid_argument);
    CHECK_THROWS_AS(verify_theorem({1, 0}, {1, 0}, Alpha(2.5), Lambda(0.5)), std::invalid_argument);
}

TEST_CASE("verify_theorem matches the unreduced integral and is invariant") {
    std::mt19937_64 rng(53);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ua(0.05, 2.0), uphi(0.0, 2 * std::numbers::pi), us(0.1, 10.0);
    for (int i = 0; i < 60; ++i) {
        const std::complex<double> x(nd(rng), nd(rng)), y(nd(rng), nd(rng));
        const double a = ua(rng), lam = 0.5 * a;
        const double v = verify_theorem(x, y, Alpha(a), Lambda(lam));
        CHECK(v >= -1e-10);

        const double brute = std::pow(oracle::unreduced_mean(x, y, a, 20000), 1.0 / a) -
                             std::sqrt(std::norm(x) + lam * std::norm(y));
        CHECK(v == doctest::Approx(brute).epsilon(1e-6).scale(std::abs(x) + std::abs(y)));

        const auto rot = std::polar(1.0, uphi(rng));
        CHECK(verify_theorem(rot * x, std::polar(1.0, uphi(rng)) * y, Alpha(a), Lambda(lam)) ==
              doctest::Approx(v).epsilon(1e-9).scale(std::abs(x)));
        const double s = us(rng);
        CHECK(verify_theorem(s * x, s * y, Alpha(a), Lambda(lam)) ==
              doctest::Approx(s * v).epsilon(1e-9).scale(s * std::abs(x)));
    }
}

TEST_CASE("grids") {
    const auto g = log_grid(1e-4, 1e3, 8);
    CHECK(g.front() == 1e-4);
    CHECK(g.back() == 1e3);
    CHECK(g[1] == doctest::Approx(1e-3));
    const auto l = linear_grid(0.0, 3.0, 4);
    CHECK(l[2] == 2.0);
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(linear_grid(1.0, 1.0, 5), std::invalid_argument);
}
