#include "plconv/core.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace plconv {

void require_theorem_range(Alpha alpha) {
    if (!(alpha.value() <= 2.0))
        throw std::invalid_argument("alpha must lie in (0, 2], got " + std::to_string(alpha.value()));
}

std::string_view to_string(Backend b) {
    switch (b) {
        case Backend::quadrature: return "quadrature";
        case Backend::series: return "series";
        case Backend::area_integral: return "area_integral";
        case Backend::mc_green: return "mc_green";
        case Backend::mc_occupation: return "mc_occupation";
    }
    return "?";
}

Backend parse_backend(std::string_view name) {
    for (auto b : {Backend::quadrature, Backend::series, Backend::area_integral, Backend::mc_green,
                   Backend::mc_occupation}) {
        if (to_string(b) == name) return b;
    }
    throw std::invalid_argument("unknown backend '" + std::string(name) + "'");
}

std::string_view to_string(BranchRegime r) {
    switch (r) {
        case BranchRegime::small: return "small";
        case BranchRegime::middle: return "middle";
        case BranchRegime::large: return "large";
    }
    return "?";
}

double large_branch_threshold(Alpha alpha) {
    require_theorem_range(alpha);
    // 1 / 0.0 is +inf for alpha = 2, which empties the large branch.
    return 1.0 / (1.0 - alpha.half());
}

BranchRegime classify_regime(Radius y, Alpha alpha) {
    const double threshold = large_branch_threshold(alpha);
    const double t = y.squared();
    if (t <= 1.0) return BranchRegime::small;
    if (t >= threshold) return BranchRegime::large;
    return BranchRegime::middle;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace plconv
