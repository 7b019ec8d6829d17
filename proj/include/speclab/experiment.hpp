#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "speclab/gallery.hpp"
#include "speclab/projection.hpp"

namespace speclab {

using Json = nlohmann::ordered_json;

struct LambdaGrid {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    bool avoid_ties = true;
};

struct Tolerances {
    double tau = 1e-9;           // kernel and +-1 thresholds on the difference
    double halmos_tau = 1e-8;    // bucket width of the spectral split
    double pairing_tol = 1e-8;   // symmetry defect of the generic part
    double reduction_tol = 1e-9;
    double krylov_tol = 1e-8;    // complement-norm contract
    double liaw_tol = 1e-8;
    std::size_t kernel_bound = 8;  // "stays bounded" cutoff for sweep verdicts
};

struct ExperimentConfig {
    OperatorSpec op;
    Vec lambdas;  // explicit list; used when grid is absent
    std::optional<LambdaGrid> grid;
    std::vector<std::size_t> orders;
    std::vector<std::string> checks;
    Tolerances tol;
    std::uint64_t seed = 0;
    std::string output_path = ".";
    IntervalKind kind = IntervalKind::open_below;
    TiePolicy tie_policy = TiePolicy::reject;
};

ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config_file(const std::string& path);

struct Violation {
    double lambda = 0.0;
    std::size_t order = 0;
    std::string check;
    std::string message;
};

struct RunResult {
    int exit_code = 0;  // 0 all contracts pass, 1 execution error, 2 violations
    Json report;
    std::string report_path;
    std::string csv_path;
    std::vector<Violation> violations;
};

/// Evaluates every (lambda, order) cell, runs the configured checks, and
/// writes report.json plus spectra.csv under the output path. Deterministic
/// for a fixed config and seed up to the generated_at field.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Trend runner over >= 3 orders: kernel-dimension ratios, trace norms and
/// smallest |eigenvalue| per lambda, with verdicts. Writes sweep.json.
RunResult sweep(const ExperimentConfig& cfg);

/// Moves lambda off any eigenvalue by 10x the tie tolerance, deterministically
/// toward the midpoint of the enclosing spectral gap.
double nudge_off_ties(double lambda, const Vec& sorted_eigs, double tie_tol);

/// Post-hoc verification of a correction operator against its contract.
struct CorrectionCheck {
    bool spectrum_ok = false;  // spectrum of D - K inside [-1, 1]
    bool balance_ok = false;   // +-t eigenspace dimensions differ by <= 1
    bool kernel_ok = false;    // kernel of D - K matches kernel of D at tau
    bool budget_ok = false;    // j-th largest |eig(K)| <= a_seq[j-1]
    bool all_ok() const { return spectrum_ok && balance_ok && kernel_ok && budget_ok; }
};

CorrectionCheck verify_correction(const SymOp& D, const SymOp& K, const Vec& a_seq,
                                  double tau);

/// Default shift budget a_j = 1/(5j), j = 1..count.
Vec default_correction_budget(std::size_t count);

}  // namespace speclab
