// plconv: circular means of |x + z y|, the a >= h >= g chain, the best
// constant I_{2,alpha}(C) and Monte Carlo cross-checks.
//
//   plconv mean --alpha 1 --y 0.5 --backend quadrature,series,area_integral
//   plconv sweep --alpha 0.25,0.5,1,1.5 --y-min 0.01 --y-max 4 --points 400 --log --out sweep.csv
//   plconv figure --out figures/
//   plconv constants --alpha 0.5,1,2,3 --out constants.csv
//   plconv sharpness --alpha 0.5,1,2 --out sharpness.csv
//   plconv mc --alpha 1.5 --y 0.5 --n 1000000 --out mc.csv
//
// Exit status: 0 ok, 1 a checked inequality or gate failed, 2 bad input or
// numerical failure.
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "plconv/constants.hpp"
#include "plconv/report.hpp"

namespace {

struct CommonOptions {
    std::vector<double> alphas;
    std::optional<double> y;
    double y_min = 0.01;
    double y_max = 4.0;
    int points = 400;
    bool log_spacing = false;
    double tol = plconv::tolerance::quadrature;
    std::uint64_t seed = 20240611;
    long long n = 1'000'000;
    long long paths = 20'000;
    double dt = 1e-3;
    std::vector<std::string> backends;
    std::string out;
};

void add_grid_options(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--y", o.y, "Single radius |y|/|x| (overrides the grid)");
    cmd->add_option("--y-min", o.y_min, "Smallest grid radius");
    cmd->add_option("--y-max", o.y_max, "Largest grid radius");
    cmd->add_option("--points", o.points, "Number of grid points");
    cmd->add_flag("--log", o.log_spacing, "Log-spaced grid (default linear)");
}

plconv::SweepConfig make_sweep_config(const CommonOptions& o) {
    plconv::SweepConfig cfg;
    if (!o.alphas.empty()) cfg.alphas = o.alphas;
    if (o.y) {
        cfg.y_min = *o.y;
        cfg.y_max = *o.y;
        cfg.points = 1;
    } else {
        cfg.y_min = o.y_min;
        cfg.y_max = o.y_max;
        cfg.points = o.points;
    }
    cfg.spacing = o.log_spacing ? plconv::Spacing::log : plconv::Spacing::linear;
    cfg.tol = o.tol;
    cfg.seed = o.seed;
    if (!o.backends.empty()) {
        cfg.backends.clear();
        for (const auto& b : o.backends) cfg.backends.push_back(plconv::parse_backend(b));
    }
    return cfg;
}

plconv::McConfig make_mc_config(const CommonOptions& o) { return {o.n, o.paths, o.dt}; }

std::vector<double> grid_of(const CommonOptions& o) {
    if (o.y) return {*o.y};
    return o.log_spacing ? plconv::log_grid(o.y_min, o.y_max, o.points)
                         : plconv::linear_grid(o.y_min, o.y_max, o.points);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Circular alpha-means of |x + z y| and the 2-uniform PL-convexity constant of C"};
    app.require_subcommand(1);

    CommonOptions mean_o, sweep_o, fig_o, const_o, sharp_o, mc_o;

    auto* mean = app.add_subcommand("mean", "Evaluate a(y) with every requested backend");
    mean->add_option("--alpha", mean_o.alphas, "Exponent alpha")->required()->expected(1);
    mean->add_option("--y", mean_o.y, "Radius |y|/|x|")->required();
    mean->add_option("--tol", mean_o.tol, "Absolute tolerance of the deterministic backends");
    mean->add_option("--backend", mean_o.backends, "Backends (quadrature,series,area_integral,mc_green,mc_occupation)")
        ->delimiter(',');
    mean->add_option("--seed", mean_o.seed, "RNG seed");
    mean->add_option("--n", mean_o.n, "Green samples for mc_green");
    mean->add_option("--paths", mean_o.paths, "Brownian paths for mc_occupation");
    mean->add_option("--dt", mean_o.dt, "Euler time step for mc_occupation");

    auto* sweep = app.add_subcommand("sweep", "Verify a >= h >= g on a grid and write VerificationRow CSV");
    sweep->add_option("--alpha", sweep_o.alphas, "Exponents in (0, 2]")->delimiter(',');
    add_grid_options(sweep, sweep_o);
    sweep->add_option("--tol", sweep_o.tol, "Margin tolerance and quadrature tolerance");
    sweep->add_option("--backend", sweep_o.backends, "Deterministic backends to compare")->delimiter(',');
    sweep->add_option("--out", sweep_o.out, "CSV output path")->default_val("sweep.csv");

    auto* fig = app.add_subcommand("figure", "Write y,a,h,g curves, one CSV per alpha");
    fig->add_option("--alpha", fig_o.alphas, "Exponents in (0, 2]")->delimiter(',');
    add_grid_options(fig, fig_o);
    fig->add_option("--out", fig_o.out, "Output directory")->default_val("figures");

    auto* constants = app.add_subcommand("constants", "Estimate I_{2,alpha}(C) on a log grid");
    constants->add_option("--alpha", const_o.alphas, "Exponents (values above 2 allowed)")->delimiter(',');
    add_grid_options(constants, const_o);
    constants->add_option("--tol", const_o.tol, "Allowed gap to the reference constant");
    constants->add_option("--out", const_o.out, "CSV output path")->default_val("constants.csv");

    double lambda_margin = 1e-3;
    auto* sharp = app.add_subcommand("sharpness", "a''(0) check and violation witnesses above alpha/2");
    sharp->add_option("--alpha", sharp_o.alphas, "Exponents in (0, 2]")->delimiter(',');
    sharp->add_option("--margin", lambda_margin, "lambda - alpha/2 used for the witness search");
    sharp->add_option("--out", sharp_o.out, "CSV output path")->default_val("sharpness.csv");

    auto* mc = app.add_subcommand("mc", "Monte Carlo backends against the deterministic mean");
    mc->add_option("--alpha", mc_o.alphas, "Exponents in (0, 2]")->delimiter(',');
    add_grid_options(mc, mc_o);
    mc->add_option("--tol", mc_o.tol, "Quadrature tolerance of the deterministic column");
    mc->add_option("--seed", mc_o.seed, "RNG seed");
    mc->add_option("--n", mc_o.n, "Green samples per row (>= 10000)");
    mc->add_option("--paths", mc_o.paths, "Brownian paths per row");
    mc->add_option("--dt", mc_o.dt, "Euler time step");
    mc->add_option("--out", mc_o.out, "CSV output path")->default_val("mc.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return plconv::exit_failure;
    }

    try {
        if (*mean) {
            auto cfg = make_sweep_config(mean_o);
            if (mean_o.backends.empty())
                cfg.backends = {plconv::Backend::quadrature, plconv::Backend::series};
            return plconv::run_mean(mean_o.alphas.front(), *mean_o.y, cfg, make_mc_config(mean_o), std::cout,
                                    std::cerr);
        }
        if (*sweep) {
            auto cfg = make_sweep_config(sweep_o);
            return plconv::run_sweep(cfg, sweep_o.out, std::cout, std::cerr);
        }
        if (*fig) {
            if (fig_o.alphas.empty()) fig_o.alphas = {0.5, 1.0, 1.5};
            if (!fig->count("--y-min")) fig_o.y_min = 0.0;
            if (!fig->count("--y-max")) fig_o.y_max = 3.0;
            if (!fig->count("--points")) fig_o.points = 301;
            return plconv::run_figure(fig_o.alphas, grid_of(fig_o), fig_o.out, std::cout, std::cerr);
        }
        if (*constants) {
            if (const_o.alphas.empty()) const_o.alphas = {0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0};
            if (!constants->count("--y-min")) const_o.y_min = 1e-4;
            if (!constants->count("--y-max")) const_o.y_max = 1e3;
            if (!constants->count("--points")) const_o.points = 281;
            if (!constants->count("--tol")) const_o.tol = 1e-3;
            const_o.log_spacing = true;
            return plconv::run_constants(const_o.alphas, grid_of(const_o), const_o.tol, const_o.out, std::cout,
                                         std::cerr);
        }
        if (*sharp) {
            if (sharp_o.alphas.empty()) sharp_o.alphas = {0.1, 0.25, 0.5, 1.0, 1.5, 2.0};
            return plconv::run_sharpness(sharp_o.alphas, lambda_margin, sharp_o.out, std::cout, std::cerr);
        }
        if (*mc) {
            auto cfg = make_sweep_config(mc_o);
            if (!mc->count("--points") && !mc_o.y) cfg.points = 8;
            return plconv::run_mc(cfg, make_mc_config(mc_o), mc_o.out, std::cout, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return plconv::exit_failure;
    }
    return plconv::exit_failure;
}
