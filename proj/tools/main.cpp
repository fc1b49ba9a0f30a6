#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "nsfs/parallel.hpp"

int main(int argc, char** argv) {
    using namespace nsfs::app;
    CLI::App app{"Stationary Navier-Stokes fundamental-solution solver"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Run the damped Picard continuation for a config file");
    solve->add_option("config", solve_args.config_path, "Config file")->required();
    solve->add_option("-o,--out", solve_args.output_dir, "Output directory (overrides output.dir)");

    DiagnoseArgs diag_args;
    auto* diagnose = app.add_subcommand("diagnose", "Compute the diagnostics bundle from NSF1 fields");
    diagnose->add_option("--u", diag_args.u_path, "Velocity NSF1 file")->required();
    diagnose->add_option("--p", diag_args.p_path, "Pressure NSF1 file")->required();
    diagnose->add_option("--f", diag_args.f_path, "Force NSF1 file")->required();
    diagnose->add_option("--config", diag_args.config_path, "Config with solver/diagnostics settings");
    diagnose->add_option("-o,--out", diag_args.output_path, "Output CSV");

    KernelCheckArgs kernel_args;
    auto* kernel = app.add_subcommand("kernel-check", "Check the Stokes kernel invariants at random points");
    kernel->add_option("-n,--dim", kernel_args.n, "Dimension");
    kernel->add_option("--samples", kernel_args.samples, "Number of random points");
    kernel->add_option("--seed", kernel_args.seed, "RNG seed");

    LemmaCheckArgs lemma_args;
    auto* lemma = app.add_subcommand("lemma-check", "Verify the Riesz-potential decay lemma by quadrature");
    lemma->add_option("--params", lemma_args.params_path, "CSV of n,alpha,beta rows");
    lemma->add_option("-n,--dim", lemma_args.n, "Dimension of a single case");
    lemma->add_option("--alpha", lemma_args.alpha, "alpha of a single case");
    lemma->add_option("--beta", lemma_args.beta, "beta of a single case");
    lemma->add_option("--tolerance", lemma_args.slope_tolerance, "Allowed |slope + gamma|");
    lemma->add_option("-o,--out", lemma_args.output_path, "Output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    nsfs::configure_threads_from_env();
    if (*solve) return cmd_solve(solve_args, std::cout, std::cerr);
    if (*diagnose) return cmd_diagnose(diag_args, std::cout, std::cerr);
    if (*kernel) return cmd_kernel_check(kernel_args, std::cout, std::cerr);
    return cmd_lemma_check(lemma_args, std::cout, std::cerr);
}
