#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "speclab/cayley.hpp"
#include "speclab/experiment.hpp"
#include "speclab/gallery.hpp"
#include "speclab/hankel.hpp"
#include "speclab/projection.hpp"
#include "speclab/rng.hpp"

namespace {

int cmd_run(const std::string& config_path, bool do_sweep) {
    try {
        const speclab::ExperimentConfig cfg = speclab::load_config_file(config_path);
        const speclab::RunResult res =
            do_sweep ? speclab::sweep(cfg) : speclab::run_experiment(cfg);
        std::cout << "report: " << res.report_path << "\n";
        if (!res.csv_path.empty()) std::cout << "spectra: " << res.csv_path << "\n";
        for (const speclab::Violation& v : res.violations)
            std::cerr << "violation [" << v.check << "] lambda=" << v.lambda
                      << " order=" << v.order << ": " << v.message << "\n";
        if (res.exit_code == 0)
            std::cout << "all contracts passed\n";
        else
            std::cout << res.violations.size() << " contract violation(s)\n";
        return res.exit_code;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}

int cmd_gallery_list() {
    std::cout <<
        "family                 size parameter        parameters\n"
        "---------------------- --------------------- ----------------------------------\n"
        "diag_example_one       n (matrix order)      N: perturbed leading entries\n"
        "diag_example_two       n (matrix order)      (none)\n"
        "krein_pair             basis size            nystrom(0/1), length, grid\n"
        "carleman               basis size            nystrom(0/1), length, grid,\n"
        "                                             perturb_rank, perturb_alpha\n"
        "jacobi                 half-window m         a_const, b_const, perturb_*\n"
        "almost_mathieu         half-window m         kappa (required), beta, theta,\n"
        "                                             perturb_*\n"
        "discrete_schrodinger   half-window m         v_const or v_amp, perturb_*\n"
        "random_sym             matrix order          perturb_rank, perturb_alpha\n"
        "\n"
        "Lattice families build matrices of order 2m+1. perturb_rank 0 disables\n"
        "the perturbation; the default is a random rank-one with alpha 1.\n";
    return 0;
}

bool check(bool ok, const char* what) {
    std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what);
    return ok;
}

int cmd_selftest() {
    using namespace speclab;
    bool all = true;
    try {
        {
            Rng rng(7);
            const SymOp a = random_symmetric(50, rng);
            const EigSystem e = eig_sym(a);
            const double dev = max_abs(reassemble(e) - a);
            all &= check(dev < 1e-9 * (1.0 + max_abs(a)), "eigendecomposition reconstructs");
        }
        {
            const OperatorPair pair = diag_example_one(6, 2);
            const auto [d, report] = proj_diff(pair.T, pair.S, -1.2);
            all &= check(report.dim_ker_minus_i == 2 && report.dim_ker_plus_i == 0,
                         "rank-two diagonal pair saturates the kernel dimensions");
        }
        {
            const SymOp t = SymOp::diagonal({0.0, 1.0});
            const SymOp s = rank_perturbation({{1.0, 0.0}}, {1.0});
            const auto [d, report] = proj_diff(t, s, 0.5);
            all &= check(report.dim_ker_plus_i == 1 && report.dim_ker == 1,
                         "hand-computed 2x2 difference");
        }
        {
            const SymOp h = hankel_from_symbol(
                HankelSymbol::from_scalars({1.0, 0.5, 1.0 / 3.0, 0.25, 0.2}));
            all &= check(commutator_defect(h).interior_norm < 1e-12,
                         "Hankel commutator cancels on the interior");
        }
        {
            const double mu = map_lambda(-3.0, 3.0);
            all &= check(std::abs(mu - 1.0) < 1e-15, "spectral-parameter map at the edge");
        }
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"speclab: spectral projection difference laboratory"};
    app.require_subcommand(1);

    std::string run_config, sweep_config;
    CLI::App* run = app.add_subcommand("run", "evaluate a config and write reports");
    run->add_option("config", run_config, "JSON config file")->required();
    CLI::App* sw = app.add_subcommand("sweep", "trend runner across truncation orders");
    sw->add_option("config", sweep_config, "JSON config file")->required();
    CLI::App* gallery = app.add_subcommand("gallery", "gallery information");
    CLI::App* list = gallery->add_subcommand("list", "list operator families");
    CLI::App* selftest = app.add_subcommand("selftest", "quick internal checks");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(run_config, false);
    if (sw->parsed()) return cmd_run(sweep_config, true);
    if (gallery->parsed() && list->parsed()) return cmd_gallery_list();
    if (selftest->parsed()) return cmd_selftest();
    std::cerr << "unknown command\n";
    return 1;
}
