#include <atomic>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "plconv/core.hpp"

using namespace plconv;

TEST_CASE("value types reject invalid input") {
    CHECK_THROWS_AS(Alpha(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Alpha(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(Alpha(std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK_THROWS_AS(Alpha(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(Radius(-1e-300), std::invalid_argument);
    CHECK_THROWS_AS(Radius(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(Lambda(std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK_THROWS_AS(Beta(1.0000001), std::invalid_argument);
    CHECK_THROWS_AS(Beta(-0.1), std::invalid_argument);
    CHECK_NOTHROW(Beta(0.0));
    CHECK_NOTHROW(Beta(1.0));
    CHECK_NOTHROW(Radius(0.0));
    CHECK(Alpha(3.0).half() == 1.5);
    CHECK(Radius(3.0).squared() == 9.0);
}

TEST_CASE("require_theorem_range accepts exactly (0, 2]") {
    CHECK_NOTHROW(require_theorem_range(Alpha(2.0)));
    CHECK_NOTHROW(require_theorem_range(Alpha(1e-9)));
    CHECK_THROWS_AS(require_theorem_range(Alpha(2.0000001)), std::invalid_argument);
}

TEST_CASE("regime examples") {
    CHECK(classify_regime(Radius(0.5), Alpha(1.0)) == BranchRegime::small);
    CHECK(classify_regime(Radius(1.0), Alpha(1.0)) == BranchRegime::small);
    CHECK(classify_regime(Radius(std::sqrt(1.5)), Alpha(1.0)) == BranchRegime::middle);
    CHECK(classify_regime(Radius(2.0), Alpha(1.0)) == BranchRegime::large);
    CHECK(classify_regime(Radius(1e6), Alpha(2.0)) == BranchRegime::middle);
    CHECK(large_branch_threshold(Alpha(1.0)) == 2.0);
    CHECK(std::isinf(large_branch_threshold(Alpha(2.0))));
}

TEST_CASE("regimes partition y >= 0 in order small, middle, large") {
    for (double a : {0.1, 0.5, 1.0, 1.5, 1.99, 2.0}) {
        int last = 0;
        for (double y = 0.0; y < 20.0; y += 0.01) {
            const int r = static_cast<int>(classify_regime(Radius(y), Alpha(a)));
            CHECK(r >= last);
            last = r;
        }
    }
}

TEST_CASE("backend names round-trip") {
    for (auto b : {Backend::quadrature, Backend::series, Backend::area_integral, Backend::mc_green,
                   Backend::mc_occupation})
        CHECK(parse_backend(to_string(b)) == b);
    CHECK_THROWS_AS(parse_backend("simpson"), std::invalid_argument);
    CHECK(to_string(BranchRegime::middle) == "middle");
}

TEST_CASE("derived seeds are deterministic and distinct") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(derive_seed(42, s));
    CHECK(seen.size() == 1000);
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
    CHECK(derive_seed(7, 3) != derive_seed(8, 3));
}

TEST_CASE("uniform01 stays in [0, 1)") {
    Rng rng(5);
    for (int i = 0; i < 100000; ++i) {
        const double u = uniform01(rng);
        CHECK((u >= 0.0 && u < 1.0));
    }
}

TEST_CASE("parallel_for visits every index once and rethrows the lowest failure") {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);

    try {
        parallel_for(100, [](std::size_t i) {
            if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "17");
    }
}
