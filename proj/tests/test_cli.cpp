#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "nsfs/nsf1.hpp"
#include "support.hpp"

using namespace nsfs;
using namespace nsfs::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("nsfs_cli_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    return p;
}

RunConfig parse(const std::string& text) {
    std::istringstream is(text);
    return parse_run_config(is);
}

std::string config_error_key(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "";
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
}

int run_cli(const std::string& args) {
    const int status = std::system((std::string(NSFS_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config defaults and overrides") {
    const RunConfig d = parse("");
    CHECK(d.dim == 3);
    CHECK(d.points == 64);
    CHECK(d.half_width == 8.0);
    CHECK(d.force.family == "gaussian");
    CHECK(d.singular_rule == SingularCellRule::lattice_zeta);

    const RunConfig c = parse(
        "[grid]\ndim = 4\nN = 12\nL = 3\n"
        "[force]\nfamily = dipole\namplitude = 0.5\ndirection = 0, 1, 0, 0\n"
        "[solver]\nschedule = 0.5, 1\ndamping = 0.8\ngradient_tables = off\nsingular_rule = cell-average\n"
        "[diagnostics]\nenabled = false\ntail_radii = 0.5, 1\n"
        "[output]\ndir = /tmp/x\n");
    CHECK(c.dim == 4);
    CHECK(c.points == 12);
    CHECK(c.force.family == "dipole");
    CHECK(c.force.direction == std::vector<double>{0, 1, 0, 0});
    CHECK(c.solver.schedule == std::vector<double>{0.5, 1});
    CHECK(c.gradient_tables == GradientTables::off);
    CHECK(c.singular_rule == SingularCellRule::cell_average);
    CHECK_FALSE(c.diagnostics);
    CHECK(c.output_dir == "/tmp/x");
    CHECK_FALSE(plan_options(c).gradient_tables);

    bool found = false;
    for (const auto& [k, v] : resolved_entries(c))
        if (k == "grid.N") found = v == "12";
    CHECK(found);
}

TEST_CASE("config errors name the offending key") {
    CHECK(config_error_key("[grid]\nNN = 3\n") == "grid.NN");
    CHECK(config_error_key("[gird]\nN = 3\n") == "gird");
    CHECK(config_error_key("[grid]\nN = abc\n") == "grid.N");
    CHECK(config_error_key("[grid]\nN = 7\n") == "grid");
    CHECK(config_error_key("[force]\nfamily = vortex\n") == "force.family");
    CHECK(config_error_key("[force]\nwidth = -1\n") == "force.width");
    CHECK(config_error_key("[force]\ndirection = 1, 0\n") == "force.direction");
    CHECK(config_error_key("[force]\nfamily = file\n") == "force.path");
    CHECK(config_error_key("[solver]\ndamping = 2\n") == "solver");
    CHECK(config_error_key("[solver]\nsingular_subsamples = 4\n") == "solver.singular_subsamples");
    CHECK(config_error_key("[diagnostics]\ntail_radii = 100\n") == "diagnostics.tail_radii");
    CHECK(config_error_key("[diagnostics]\nenabled = maybe\n") == "diagnostics.enabled");
    CHECK(config_error_key("N = 3\n") == "N");
    try {
        parse("[grid]\nNN = 3\n");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("'grid.NN'") != std::string::npos);
    }
}

TEST_CASE("built-in forces are compactly supported") {
    const GridSpec g(3, 32, 8.0);
    ForceSpec s;
    s.amplitude = 2.0;
    const VectorField f = build_force(s, g);
    double peak = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        peak = std::max(peak, std::abs(f[0][i]));
        if (g.radius(i) > 4.0) REQUIRE(f[0][i] == 0.0);
        REQUIRE(f[1][i] == 0.0);
    }
    CHECK(peak <= 2.0);
    CHECK(peak > 1.5);
    for (const char* family : {"ring", "dipole"}) {
        s.family = family;
        const VectorField r = build_force(s, g);
        double total = 0.0;
        for (int c = 0; c < 3; ++c) total += testing::max_abs(r[c].data);
        CHECK(total > 0.0);
    }
    s.family = "zero";
    CHECK(testing::max_abs(build_force(s, g)[0].data) == 0.0);
}

TEST_CASE("solve with zero force writes zero fields") {
    const fs::path dir = scratch_dir("zero");
    const fs::path cfg = write_file(dir / "c.ini", "[grid]\nN = 16\nL = 4\n[force]\nfamily = zero\n[output]\ndir = " +
                                                       (dir / "out").string() + "\n");
    std::ostringstream out, err;
    CHECK(cmd_solve({cfg.string(), ""}, out, err) == kExitOk);
    const VectorField u = read_vector_field((dir / "out" / "u.nsf1").string());
    const ScalarField p = read_scalar_field((dir / "out" / "p.nsf1").string());
    CHECK(testing::max_abs(u[0].data) == 0.0);
    CHECK(testing::max_abs(p.data) == 0.0);
    CHECK(fs::exists(dir / "out" / "report.csv"));
    CHECK(fs::exists(dir / "out" / "diagnostics.csv"));
    const std::string report = slurp(dir / "out" / "report.csv");
    CHECK(report.rfind("section,key,value\n", 0) == 0);
    CHECK(report.find("config,grid.N,16") != std::string::npos);
}

TEST_CASE("solve: malformed config exits 1 naming the key") {
    const fs::path dir = scratch_dir("bad");
    const fs::path cfg = write_file(dir / "c.ini", "[grid]\npoints = 16\n");
    std::ostringstream out, err;
    CHECK(cmd_solve({cfg.string(), ""}, out, err) == kExitUsage);
    CHECK(err.str().find("grid.points") != std::string::npos);
    CHECK(cmd_solve({(dir / "missing.ini").string(), ""}, out, err) == kExitUsage);
}

TEST_CASE("solve: non-convergence exits 2") {
    const fs::path dir = scratch_dir("diverge");
    const fs::path cfg = write_file(
        dir / "c.ini", "[grid]\nN = 12\nL = 4\n[force]\namplitude = 2000\n"
                       "[solver]\nschedule = 1\nmax_iters = 20\ndamping_floor = 0.5\n[output]\ndir = " +
                           dir.string() + "\n");
    std::ostringstream out, err;
    CHECK(cmd_solve({cfg.string(), ""}, out, err) == kExitNumerical);
    CHECK(fs::exists(dir / "report.csv"));
    CHECK_FALSE(fs::exists(dir / "diagnostics.csv"));
}

TEST_CASE("diagnose reproduces the in-process bundle bit for bit") {
    const fs::path dir = scratch_dir("roundtrip");
    const fs::path cfg = write_file(dir / "c.ini", "[grid]\nN = 16\nL = 4\n[force]\namplitude = 0.05\n[output]\ndir = " +
                                                       dir.string() + "\n");
    std::ostringstream out, err;
    REQUIRE(cmd_solve({cfg.string(), ""}, out, err) == kExitOk);
    DiagnoseArgs d;
    d.u_path = (dir / "u.nsf1").string();
    d.p_path = (dir / "p.nsf1").string();
    d.f_path = (dir / "f.nsf1").string();
    d.config_path = cfg.string();
    d.output_path = (dir / "again.csv").string();
    REQUIRE(cmd_diagnose(d, out, err) == kExitOk);
    CHECK(slurp(dir / "again.csv") == slurp(dir / "diagnostics.csv"));
}

TEST_CASE("diagnose: zero fields and mismatched grids") {
    const fs::path dir = scratch_dir("diag");
    const GridSpec g(3, 16, 4.0);
    write_nsf1((dir / "u.nsf1").string(), VectorField(g));
    write_nsf1((dir / "p.nsf1").string(), ScalarField(g));
    write_nsf1((dir / "f.nsf1").string(), VectorField(g));
    write_nsf1((dir / "p_other.nsf1").string(), ScalarField(GridSpec(3, 8, 4.0)));
    DiagnoseArgs d;
    d.u_path = (dir / "u.nsf1").string();
    d.p_path = (dir / "p.nsf1").string();
    d.f_path = (dir / "f.nsf1").string();
    d.output_path = (dir / "d.csv").string();
    std::ostringstream out, err;
    CHECK(cmd_diagnose(d, out, err) == kExitOk);
    CHECK(slurp(dir / "d.csv").find("energy_gap,0,") != std::string::npos);

    d.p_path = (dir / "p_other.nsf1").string();
    CHECK(cmd_diagnose(d, out, err) == kExitUsage);
    CHECK(err.str().find("n=3 N=16 L=4") != std::string::npos);
    CHECK(err.str().find("n=3 N=8 L=4") != std::string::npos);
    d.p_path = (dir / "nothing.nsf1").string();
    CHECK(cmd_diagnose(d, out, err) == kExitUsage);
}

TEST_CASE("kernel-check") {
    std::ostringstream a, b, err;
    CHECK(cmd_kernel_check({}, a, err) == kExitOk);
    CHECK(a.str().find("all checks passed") != std::string::npos);
    CHECK(cmd_kernel_check({}, b, err) == kExitOk);
    CHECK(a.str() == b.str());
    std::ostringstream out3;
    CHECK(cmd_kernel_check({3, 20, 7}, out3, err) == kExitOk);
    std::ostringstream out2, err2;
    CHECK(cmd_kernel_check({2, 20, 1}, out2, err2) == kExitUsage);
    CHECK(err2.str().find("n >= 3 required") != std::string::npos);
}

TEST_CASE("lemma-check") {
    std::ostringstream out, err;
    LemmaCheckArgs bad;
    bad.n = 3;
    bad.alpha = 3.0;
    bad.beta = 4.0;
    CHECK(cmd_lemma_check(bad, out, err) == kExitUsage);
    CHECK(err.str().find("alpha") != std::string::npos);

    LemmaCheckArgs log_case;
    log_case.n = 3;
    log_case.alpha = 1.0;
    log_case.beta = 3.0;
    std::ostringstream csv;
    CHECK(cmd_lemma_check(log_case, csv, err) == kExitOk);
    CHECK(csv.str().rfind("n,alpha,beta,gamma_expected,slope_fitted,log_flag,pass", 0) == 0);
    CHECK(csv.str().find(",true,pass,") != std::string::npos);

    const fs::path dir = scratch_dir("lemma");
    LemmaCheckArgs file;
    file.params_path = write_file(dir / "p.csv", "n,alpha,beta\n3,1,4\n5,2,6\n").string();
    std::ostringstream rows;
    CHECK(cmd_lemma_check(file, rows, err) == kExitOk);
    const std::string text = rows.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);

    LemmaCheckArgs strict = file;
    strict.slope_tolerance = 1e-6;
    std::ostringstream fail;
    CHECK(cmd_lemma_check(strict, fail, err) == kExitNumerical);
}

TEST_CASE("executable exit codes") {
    CHECK(run_cli("") == kExitUsage);
    CHECK(run_cli("no-such-command") == kExitUsage);
    CHECK(run_cli("kernel-check -n 2") == kExitUsage);
    CHECK(run_cli("kernel-check -n 3 --samples 5") == kExitOk);
    CHECK(run_cli("lemma-check -n 3 --alpha 1 --beta 4") == kExitOk);
    CHECK(run_cli("--help") == kExitOk);
    CHECK(run_cli("solve /nonexistent.ini") == kExitUsage);
}
