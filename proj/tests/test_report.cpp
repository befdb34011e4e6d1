#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "plconv/report.hpp"

using namespace plconv;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "plconv_test_report";
    std::filesystem::create_directories(dir);
    return dir / name;
}

SweepConfig small_config() {
    SweepConfig cfg;
    cfg.alphas = {0.5, 1.5};
    cfg.y_min = 0.05;
    cfg.y_max = 3.0;
    cfg.points = 20;
    return cfg;
}

}  // namespace

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 4.0 / 3.1415926535897931}) CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(0.25) == "0.25");
}

TEST_CASE("configuration validation") {
    auto cfg = small_config();
    CHECK_NOTHROW(cfg.validate());
    cfg.tol = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config();
    cfg.alphas = {2.5};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config();
    cfg.y_min = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // log spacing
    cfg.spacing = Spacing::linear;
    CHECK_NOTHROW(cfg.validate());
    cfg.y_min = cfg.y_max = 0.7;
    cfg.points = 1;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.y_grid() == std::vector<double>{0.7});
}

TEST_CASE("alpha = 2 sweep has zero margins") {
    SweepConfig cfg = small_config();
    cfg.alphas = {2.0};
    std::vector<VerificationRow> rows;
    evaluate_sweep(cfg, rows);
    REQUIRE(rows.size() == 20);
    for (const auto& r : rows) {
        CHECK(std::abs(r.margin_ah) < 1e-9);
        CHECK(std::abs(r.margin_hg) < 1e-12 * (1 + r.y * r.y));
        CHECK(r.regime != BranchRegime::large);
    }
}

TEST_CASE("sweep rows and summary") {
    const auto cfg = small_config();
    std::vector<VerificationRow> rows;
    evaluate_sweep(cfg, rows);
    REQUIRE(rows.size() == 40);
    double min_ah = std::numeric_limits<double>::infinity(), min_hg = min_ah, max_delta = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        CHECK(r.margin_ah == doctest::Approx(r.a_value - r.h_value));
        CHECK(r.margin_hg == doctest::Approx(r.h_value - r.g_value));
        CHECK(r.margin_ah > 0.0);
        CHECK(r.margin_hg > 0.0);
        CHECK(r.backend_delta < 1e-9);
        if (i > 0) CHECK((rows[i - 1].alpha < r.alpha || (rows[i - 1].alpha == r.alpha && rows[i - 1].y < r.y)));
        min_ah = std::min(min_ah, r.margin_ah);
        min_hg = std::min(min_hg, r.margin_hg);
        max_delta = std::max(max_delta, r.backend_delta);
    }
    const auto s = summarize(rows, cfg.tol);
    CHECK(s.rows == 40);
    CHECK(s.min_margin_ah == min_ah);
    CHECK(s.min_margin_hg == min_hg);
    CHECK(s.max_backend_delta == max_delta);
    CHECK(s.violations == 0);
}

TEST_CASE("run_sweep writes a byte-stable CSV") {
    const auto cfg = small_config();
    const auto p1 = scratch("sweep1.csv"), p2 = scratch("sweep2.csv");
    std::ostringstream out, err;
    CHECK(run_sweep(cfg, p1, out, err) == exit_ok);
    CHECK(run_sweep(cfg, p2, out, err) == exit_ok);
    const auto a = slurp(p1);
    CHECK(a == slurp(p2));
    CHECK(a.rfind("alpha,y,a,h,g,margin_ah,margin_hg,regime,backend_delta\n", 0) == 0);
    CHECK(std::count(a.begin(), a.end(), '\n') == 41);
    CHECK(a.find('\r') == std::string::npos);
}

TEST_CASE("run_sweep rejects a bad tolerance with status 2") {
    auto cfg = small_config();
    cfg.tol = -1.0;
    std::ostringstream out, err;
    CHECK(run_sweep(cfg, scratch("bad.csv"), out, err) == exit_failure);
    CHECK_FALSE(err.str().empty());
}

TEST_CASE("run_figure writes one file per alpha") {
    const auto dir = scratch("figs");
    std::filesystem::remove_all(dir);
    std::ostringstream out, err;
    CHECK(run_figure({0.5, 1.0}, {0.0, 1.0, 2.0}, dir, out, err) == exit_ok);
    const auto txt = slurp(dir / "figure_alpha_0.5.csv");
    CHECK(txt.rfind("y,a,h,g\n0,1,1,1\n", 0) == 0);
    CHECK(std::filesystem::exists(dir / "figure_alpha_1.csv"));
    CHECK(run_figure({3.0}, {1.0}, dir, out, err) == exit_failure);
}

TEST_CASE("constant and sharpness tables") {
    const auto rows = constant_table({1.0, 3.0}, {1e-4, 1e-3, 1.0, 10.0, 1e3});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].reference == 0.5);
    CHECK(rows[0].abs_gap < 1e-4);
    CHECK(rows[1].reference == 1.0);
    CHECK(rows[1].abs_gap < 1e-3);

    const auto sharp = sharpness_table({0.5, 2.0}, 1e-3);
    REQUIRE(sharp.size() == 2);
    for (const auto& r : sharp) {
        CHECK(r.second_derivative == doctest::Approx(r.alpha * r.alpha / 2));
        CHECK(r.second_difference == doctest::Approx(r.alpha * r.alpha / 2).epsilon(1e-6));
        CHECK(r.violation > 0.0);
        CHECK_FALSE(r.sharp_violation_found);
    }
}

TEST_CASE("sigma distance") {
    CHECK(sigma_distance(1.0, 1.0, 0.0) == 0.0);
    CHECK(std::isinf(sigma_distance(1.1, 1.0, 0.0)));
    CHECK(sigma_distance(1.2, 1.0, 0.1) == doctest::Approx(2.0));
}

TEST_CASE("mc cross-check rows") {
    SweepConfig cfg;
    cfg.alphas = {0.5, 2.0};
    cfg.y_min = 0.5;
    cfg.y_max = 2.0;
    cfg.points = 2;
    cfg.spacing = Spacing::linear;
    McConfig mc{20'000, 2'000, 1e-3};
    const auto rows = mc_crosscheck(cfg, mc);
    REQUIRE(rows.size() == 4);
    // alpha = 0.5, y = 2 is in the heavy-tail regime and exempt.
    CHECK(rows[1].warning);
    CHECK(mc_row_passes(rows[1]));
    CHECK(std::isnan(rows[1].occupation_allowance));
    for (int i : {2, 3}) {
        CHECK(rows[i].sigmas_green == 0.0);
        CHECK(mc_row_passes(rows[i]));
    }
    CHECK(mc_row_passes(rows[0]));
    CHECK_THROWS_AS(mc_crosscheck(cfg, McConfig{100, 10, 1e-3}), std::invalid_argument);

    const auto again = mc_crosscheck(cfg, mc);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(again[i].mc_green == rows[i].mc_green);
        CHECK(again[i].mc_occupation == rows[i].mc_occupation);
    }
}
