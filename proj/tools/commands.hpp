#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace nsfs::app {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

struct SolveArgs {
    std::string config_path;
    std::string output_dir;  // overrides output.dir when non-empty
};

struct DiagnoseArgs {
    std::string u_path;
    std::string p_path;
    std::string f_path;
    std::string config_path;  // optional: plan and diagnostics settings
    std::string output_path = "diagnostics.csv";
};

struct KernelCheckArgs {
    int n = 5;
    int samples = 20;
    std::uint64_t seed = 1;
};

struct LemmaCheckArgs {
    std::string params_path;  // CSV lines "n,alpha,beta"; empty: default grids for n = 3, 5
    int n = 0;                // single case when > 0
    double alpha = 0.0;
    double beta = 0.0;
    std::string output_path;  // empty: CSV to `out`
    double slope_tolerance = 0.15;
};

// Each command writes human-readable progress to `out`, errors to `err`,
// and returns an exit code.
int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err);
int cmd_diagnose(const DiagnoseArgs& args, std::ostream& out, std::ostream& err);
int cmd_kernel_check(const KernelCheckArgs& args, std::ostream& out, std::ostream& err);
int cmd_lemma_check(const LemmaCheckArgs& args, std::ostream& out, std::ostream& err);

}  // namespace nsfs::app
