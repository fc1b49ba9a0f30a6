#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nsfs/convolve.hpp"
#include "nsfs/diagnostics.hpp"
#include "nsfs/error.hpp"
#include "nsfs/solver.hpp"

namespace nsfs::app {

/// Invalid or unknown configuration entry; key() is "section.name".
class ConfigError : public Error {
public:
    ConfigError(const std::string& key, const std::string& msg)
        : Error("config key '" + key + "': " + msg), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct ForceSpec {
    std::string family = "gaussian";  // zero | gaussian | ring | dipole | file
    double amplitude = 1e-2;
    double width = 1.0;
    std::vector<double> center;     // default: origin
    std::vector<double> direction;  // default: e_1
    double ring_radius = 2.0;
    double separation = 2.0;
    std::string path;
};

enum class GradientTables { automatic, on, off };

struct RunConfig {
    int dim = 3;
    std::int64_t points = 64;
    double half_width = 8.0;
    ForceSpec force;
    SolverConfig solver;
    GradientTables gradient_tables = GradientTables::automatic;
    double memory_budget_mb = 3072.0;
    SingularCellRule singular_rule = SingularCellRule::lattice_zeta;
    int singular_subsamples = 5;
    bool diagnostics = true;
    DiagnosticsParams diag;
    std::string output_dir = ".";

    GridSpec grid() const { return GridSpec(dim, points, half_width); }
};

/// INI text: [section] headers, key = value lines, ';' comments.
/// Sections: grid, force, solver, diagnostics, output. Every key is
/// validated; unknown sections or keys raise ConfigError naming them.
RunConfig parse_run_config(std::istream& is);
RunConfig load_run_config(const std::string& path);

/// Every resolved setting as (section.key, value), defaults included.
std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& c);

PlanOptions plan_options(const RunConfig& c);

/// Samples the configured force on the grid. Built-in families are cut off
/// at 4 widths from their centre set, so they are compactly supported.
VectorField build_force(const ForceSpec& spec, const GridSpec& g);

}  // namespace nsfs::app
