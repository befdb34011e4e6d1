// Grid sweeps, CSV emission and exit-status policy behind the plconv CLI.
//
// CSV conventions: comma separated, '.' decimal point, 17 significant
// digits, header row, '\n' line endings. Exit statuses: 0 all checks pass,
// 1 a checked inequality or statistical gate failed, 2 invalid input or
// numerical failure.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "plconv/core.hpp"

namespace plconv {

enum ExitStatus : int { exit_ok = 0, exit_violation = 1, exit_failure = 2 };

enum class Spacing { linear, log };

struct SweepConfig {
    std::vector<double> alphas{0.25, 0.5, 1.0, 1.5};
    double y_min = 0.01;
    double y_max = 4.0;
    int points = 400;
    Spacing spacing = Spacing::log;
    double tol = tolerance::quadrature;
    std::uint64_t seed = 20240611;
    std::vector<Backend> backends{Backend::quadrature, Backend::series};

    /// Throws std::invalid_argument on an inconsistent configuration.
    void validate() const;
    std::vector<double> y_grid() const;
};

struct VerificationRow {
    double alpha;
    double y;
    double a_value;  // quadrature backend
    double h_value;
    double g_value;
    double margin_ah;
    double margin_hg;
    BranchRegime regime;
    double backend_delta;  // max pairwise disagreement of the deterministic backends
};

struct SweepSummary {
    std::size_t rows = 0;
    double min_margin_ah = 0.0, argmin_ah_alpha = 0.0, argmin_ah_y = 0.0;
    double min_margin_hg = 0.0, argmin_hg_alpha = 0.0, argmin_hg_y = 0.0;
    double max_backend_delta = 0.0;
    std::size_t violations = 0;  // rows with a margin below -tol
};

/// "%.17g"; round-trips every double.
std::string format_double(double v);

/// One row per (alpha, y) in ascending order. Rows are evaluated in
/// parallel; the first numerical failure in canonical order stops the
/// output there and is rethrown after `rows` holds the valid prefix.
void evaluate_sweep(const SweepConfig& cfg, std::vector<VerificationRow>& rows);
VerificationRow evaluate_point(double alpha, double y, const SweepConfig& cfg);

SweepSummary summarize(const std::vector<VerificationRow>& rows, double tol);

void write_sweep_header(std::ostream& os);
void write_sweep_row(std::ostream& os, const VerificationRow& row);

/// Evaluates the sweep, writes the CSV to csv_path, prints the summary to
/// out and violations to err; returns the exit status.
int run_sweep(const SweepConfig& cfg, const std::filesystem::path& csv_path, std::ostream& out, std::ostream& err);

/// Writes figure_alpha_<alpha>.csv (columns y,a,h,g) per alpha into dir.
int run_figure(const std::vector<double>& alphas, const std::vector<double>& y_grid,
               const std::filesystem::path& dir, std::ostream& out, std::ostream& err);
std::filesystem::path figure_file_name(double alpha);

struct ConstantRow {
    double alpha, lambda_inf, argmin_y, reference, abs_gap;
};

std::vector<ConstantRow> constant_table(const std::vector<double>& alphas, const std::vector<double>& y_grid);
int run_constants(const std::vector<double>& alphas, const std::vector<double>& y_grid, double gap_tol,
                  const std::filesystem::path& csv_path, std::ostream& out, std::ostream& err);

struct SharpnessRow {
    double alpha;
    double second_derivative;  // series value, cross-checked by a second difference
    double second_difference;
    double witness_lambda;
    double witness_y;
    double violation;
    bool sharp_violation_found;  // any certified violation at lambda = alpha/2 down to 2^-30
};

std::vector<SharpnessRow> sharpness_table(const std::vector<double>& alphas, double lambda_margin);
int run_sharpness(const std::vector<double>& alphas, double lambda_margin, const std::filesystem::path& csv_path,
                  std::ostream& out, std::ostream& err);

struct McConfig {
    long long n = 1'000'000;      // Green samples per row
    long long paths = 20'000;     // Brownian paths per row
    double dt = 1e-3;
};

struct McRow {
    double alpha, y;
    double deterministic;
    double mc_green, stderr_green;
    double mc_occupation, stderr_occupation;
    double sigmas_green, sigmas_occupation;
    double occupation_allowance;
    bool warning;
};

/// |mc - det| / stderr, with 0/0 read as 0 (zero-variance integrand).
double sigma_distance(double mc, double deterministic, double stderr_);

std::vector<McRow> mc_crosscheck(const SweepConfig& cfg, const McConfig& mc);
/// True when the row passes the gate (or is exempt because of its warning).
bool mc_row_passes(const McRow& row);
int run_mc(const SweepConfig& cfg, const McConfig& mc, const std::filesystem::path& csv_path, std::ostream& out,
           std::ostream& err);

/// Single evaluation with every requested backend, printed as a table.
int run_mean(double alpha, double y, const SweepConfig& cfg, const McConfig& mc, std::ostream& out,
             std::ostream& err);

}  // namespace plconv
