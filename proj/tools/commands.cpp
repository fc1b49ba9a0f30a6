#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "config.hpp"
#include "nsfs/diagnostics.hpp"
#include "nsfs/kernel.hpp"
#include "nsfs/lemma_oracle.hpp"
#include "nsfs/norms.hpp"
#include "nsfs/nsf1.hpp"
#include "nsfs/solver.hpp"

namespace nsfs::app {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

ConvolutionPlan make_plan(const RunConfig& c, std::ostream& out) {
    ConvolutionPlan plan = build_plan(c.grid(), plan_options(c));
    out << "plan: " << describe(plan.grid()) << ", " << plan.table_count() << " tables, "
        << (plan.table_bytes() + plan.scratch_bytes()) / (1024 * 1024) << " MiB, gradient tables "
        << (plan.has_gradient_tables() ? "yes" : "no") << ", singular rule " << to_string(plan.singular_rule())
        << "\n";
    return plan;
}

void write_report(const std::string& path, const RunConfig& c, const ConvolutionPlan& plan, const SolveReport& r,
                  const DiagnosticsBundle* b) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    os << "section,key,value\n";
    for (const auto& [k, v] : resolved_entries(c)) os << "config," << k << ',' << v << '\n';
    os << "plan,padded_n," << plan.padded_n() << '\n';
    os << "plan,table_count," << plan.table_count() << '\n';
    os << "plan,table_bytes," << plan.table_bytes() << '\n';
    os << "plan,scratch_bytes," << plan.scratch_bytes() << '\n';
    os << "plan,gradient_tables," << (plan.has_gradient_tables() ? "yes" : "no") << '\n';
    os << "plan,singular_rule," << to_string(plan.singular_rule()) << '\n';
    os << "plan,parity_defect," << num(plan.parity_defect()) << '\n';
    for (std::size_t s = 0; s < r.stages.size(); ++s) {
        const StageRecord& st = r.stages[s];
        const std::string tag = "stage=" + std::to_string(s + 1);
        os << "stage," << tag << ";t," << num(st.t) << '\n';
        os << "stage," << tag << ";iterations," << st.iterations << '\n';
        os << "stage," << tag << ";restarts," << st.restarts << '\n';
        os << "stage," << tag << ";damping," << num(st.damping) << '\n';
        os << "stage," << tag << ";converged," << (st.converged ? "yes" : "no") << '\n';
        for (std::size_t k = 0; k < st.residuals.size(); ++k)
            os << "residual," << tag << ";iter=" << (k + 1) << ',' << num(st.residuals[k]) << '\n';
    }
    os << "summary,converged," << (r.converged ? "yes" : "no") << '\n';
    if (!r.failure.empty()) os << "summary,failure,\"" << r.failure << "\"\n";
    for (const auto& w : r.warnings) os << "summary,warning,\"" << w << "\"\n";
    os << "summary,linear_norm," << num(r.linear_norm) << '\n';
    os << "summary,u_l2," << num(l2_norm(r.u)) << '\n';
    os << "summary,support_diameter," << num(r.support_diameter) << '\n';
    os << "truncation,L," << num(c.half_width) << '\n';
    os << "truncation,N," << c.points << '\n';
    if (b) {
        os << "summary,cd1_norm," << num(b->cd1) << '\n';
        os << "truncation,u_fit_window," << num(b->u_decay.fit_lo) << ':' << num(b->u_decay.fit_hi) << '\n';
        os << "truncation,grad_u_fit_window," << num(b->grad_u_decay.fit_lo) << ':' << num(b->grad_u_decay.fit_hi)
           << '\n';
        os << "truncation,p_fit_window," << num(b->p_decay.fit_lo) << ':' << num(b->p_decay.fit_hi) << '\n';
    }
}

}  // namespace

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    VectorField f;
    try {
        c = load_run_config(args.config_path);
        if (!args.output_dir.empty()) c.output_dir = args.output_dir;
        f = build_force(c.force, c.grid());
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        fs::create_directories(c.output_dir);
        const ConvolutionPlan plan = make_plan(c, out);
        const SolveReport r = solve(plan, f, c.solver);
        for (const auto& w : r.warnings) err << "warning: " << w << "\n";
        for (std::size_t s = 0; s < r.stages.size(); ++s)
            out << "stage t=" << r.stages[s].t << ": " << r.stages[s].iterations << " iterations, residual "
                << (r.stages[s].residuals.empty() ? 0.0 : r.stages[s].residuals.back())
                << (r.stages[s].restarts ? ", damping " + num(r.stages[s].damping) : "") << "\n";
        const fs::path dir(c.output_dir);
        write_nsf1((dir / "u.nsf1").string(), r.u);
        write_nsf1((dir / "p.nsf1").string(), r.p);
        write_nsf1((dir / "f.nsf1").string(), f);
        DiagnosticsBundle bundle;
        const bool have_bundle = r.converged && c.diagnostics;
        if (have_bundle) {
            bundle = full_bundle(plan, r.u, r.p, f, c.diag);
            std::ofstream os(dir / "diagnostics.csv");
            write_diagnostics_csv(os, bundle);
        }
        write_report((dir / "report.csv").string(), c, plan, r, have_bundle ? &bundle : nullptr);
        if (!r.converged) {
            err << "error: " << r.failure << "\n";
            return kExitNumerical;
        }
        out << "converged; outputs in " << c.output_dir << "\n";
        return kExitOk;
    } catch (const MemoryBudgetExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int cmd_diagnose(const DiagnoseArgs& args, std::ostream& out, std::ostream& err) {
    try {
        RunConfig c;
        if (!args.config_path.empty()) c = load_run_config(args.config_path);
        const VectorField u = read_vector_field(args.u_path);
        const ScalarField p = read_scalar_field(args.p_path);
        const VectorField f = read_vector_field(args.f_path);
        require_same_grid(u.grid, p.grid, "pressure file");
        require_same_grid(u.grid, f.grid, "force file");
        c.dim = u.grid.dim();
        c.points = u.grid.points_per_axis();
        c.half_width = u.grid.half_width();
        const ConvolutionPlan plan = make_plan(c, out);
        const DiagnosticsBundle b = full_bundle(plan, u, p, f, c.diag);
        std::ofstream os(args.output_path);
        if (!os) throw Error("cannot open " + args.output_path + " for writing");
        write_diagnostics_csv(os, b);
        out << "wrote " << args.output_path << "\n";
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

namespace {

struct CheckRow {
    std::string name;
    int passed = 0;
    int total = 0;
    double worst = 0.0;
    void add(bool ok, double measure) {
        ++total;
        passed += ok ? 1 : 0;
        worst = std::max(worst, measure);
    }
};

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b, double scale) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m / scale;
}

double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

double frob(const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

}  // namespace

int cmd_kernel_check(const KernelCheckArgs& args, std::ostream& out, std::ostream& err) {
    if (args.n < 3) {
        err << "error: n >= 3 required\n";
        return kExitUsage;
    }
    if (args.n > 15 || args.samples < 1) {
        err << "error: need n <= 15 and samples >= 1\n";
        return kExitUsage;
    }
    const int n = args.n;
    std::mt19937_64 rng(args.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> radius(1.0, 3.0);
    std::uniform_real_distribution<double> lambda(0.5, 2.0);

    CheckRow sym{"symmetry"}, parity{"parity"}, homog{"homogeneity"}, grad{"gradient_fd_ratio"},
        div{"column_divergence"}, pde{"pde_residual_ratio"};
    for (int s = 0; s < args.samples; ++s) {
        std::vector<double> x(static_cast<std::size_t>(n));
        double norm = 0.0;
        for (double& v : x) {
            v = normal(rng);
            norm += v * v;
        }
        const double rad = radius(rng);
        for (double& v : x) v *= rad / std::sqrt(norm);
        const double lam = lambda(rng);

        const KernelMatrix k = eval_kernel(x);
        const double uscale = max_abs(k.u_tensor);
        const double gscale = max_abs(k.grad_tensor);

        double asym = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) asym = std::max(asym, std::abs(k.u(i, j) - k.u(j, i)));
        sym.add(asym / uscale <= 1e-14, asym / uscale);

        std::vector<double> mx(x), lx(x);
        for (double& v : mx) v = -v;
        for (double& v : lx) v *= lam;
        const KernelMatrix km = eval_kernel(mx);
        std::vector<double> neg_p(km.p_vector);
        for (double& v : neg_p) v = -v;
        const double par = std::max(max_rel_diff(k.u_tensor, km.u_tensor, uscale),
                                    max_rel_diff(k.p_vector, neg_p, max_abs(k.p_vector)));
        parity.add(par <= 1e-12, par);

        const KernelMatrix kl = eval_kernel(lx);
        std::vector<double> su(k.u_tensor), sp(k.p_vector), sg(k.grad_tensor);
        for (double& v : su) v *= std::pow(lam, 2 - n);
        for (double& v : sp) v *= std::pow(lam, 1 - n);
        for (double& v : sg) v *= std::pow(lam, 1 - n);
        const double hom = std::max({max_rel_diff(kl.u_tensor, su, max_abs(su)),
                                     max_rel_diff(kl.p_vector, sp, max_abs(sp)),
                                     max_rel_diff(kl.grad_tensor, sg, max_abs(sg))});
        homog.add(hom <= 1e-12, hom);

        const double h = 1e-2;
        const auto gerr = [&](double step) {
            const std::vector<double> fd = kernel_fd_gradient(x, step);
            std::vector<double> d(fd.size());
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = fd[i] - k.grad_tensor[i];
            return frob(d);
        };
        const double gratio = gerr(h) / gerr(0.5 * h);
        grad.add(gratio >= 3.5 && gratio <= 4.5, std::abs(gratio - 4.0));

        double tr = 0.0;
        for (int j = 0; j < n; ++j) {
            double t = 0.0;
            for (int i = 0; i < n; ++i) t += k.grad(i, j, i);
            tr = std::max(tr, std::abs(t));
        }
        const double fd_div = max_abs(kernel_fd_divergence(x, h));
        const double dmeasure = std::max(tr / gscale, fd_div / gscale / 1e-3);
        div.add(tr / gscale <= 1e-12 && fd_div <= 1e-3 * gscale, dmeasure);

        const double pratio = frob(kernel_pde_residual(x, h)) / frob(kernel_pde_residual(x, 0.5 * h));
        pde.add(pratio >= 3.4 && pratio <= 4.6, std::abs(pratio - 4.0));
    }

    bool all = true;
    out << "kernel-check n=" << n << " samples=" << args.samples << " seed=" << args.seed << "\n";
    out << std::left << std::setw(22) << "check" << std::setw(10) << "passed" << "worst\n";
    for (const CheckRow* r : {&sym, &parity, &homog, &grad, &div, &pde}) {
        const bool ok = r->passed == r->total;
        all = all && ok;
        out << std::left << std::setw(22) << r->name << std::setw(10)
            << (std::to_string(r->passed) + "/" + std::to_string(r->total)) << std::setprecision(6) << r->worst
            << (ok ? "" : "  FAIL") << "\n";
    }
    out << (all ? "all checks passed" : "some checks failed") << "\n";
    return all ? kExitOk : kExitNumerical;
}

int cmd_lemma_check(const LemmaCheckArgs& args, std::ostream& out, std::ostream& err) {
    std::vector<LemmaCase> cases;
    try {
        if (args.n > 0) {
            cases.push_back({args.n, args.alpha, args.beta});
        } else if (!args.params_path.empty()) {
            std::ifstream is(args.params_path);
            if (!is) throw Error("cannot open " + args.params_path);
            std::string line;
            while (std::getline(is, line)) {
                if (line.empty() || line[0] == '#' || line[0] == 'n') continue;
                std::replace(line.begin(), line.end(), ',', ' ');
                std::istringstream ls(line);
                LemmaCase c{};
                if (!(ls >> c.n >> c.alpha >> c.beta)) throw Error("bad params line: " + line);
                cases.push_back(c);
            }
        } else {
            for (int n : {3, 5})
                for (const auto& c : default_lemma_grid(n)) cases.push_back(c);
        }
        for (const auto& c : cases) (void)LemmaParams(c.n, c.alpha, c.beta);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::ofstream file;
    if (!args.output_path.empty()) {
        file.open(args.output_path);
        if (!file) {
            err << "error: cannot open " << args.output_path << "\n";
            return kExitUsage;
        }
    }
    std::ostream& csv = args.output_path.empty() ? out : file;
    csv << "n,alpha,beta,gamma_expected,slope_fitted,log_flag,pass,log_fit_slope,log_fit_r2\n";
    bool all = true;
    try {
        for (const auto& c : cases) {
            const DecayCheck d = verify_decay(LemmaParams(c.n, c.alpha, c.beta), args.slope_tolerance);
            all = all && d.pass;
            csv << c.n << ',' << num(c.alpha) << ',' << num(c.beta) << ',' << num(d.gamma_expected) << ','
                << num(d.slope) << ',' << (d.log_case ? "true" : "false") << ',' << (d.pass ? "pass" : "fail") << ','
                << (d.log_case ? num(d.log_slope) : "") << ',' << (d.log_case ? num(d.log_r_squared) : "") << '\n';
        }
    } catch (const QuadratureError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return all ? kExitOk : kExitNumerical;
}

}  // namespace nsfs::app
