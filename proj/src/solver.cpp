#include "nsfs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsfs/error.hpp"
#include "nsfs/norms.hpp"

namespace nsfs {

void SolverConfig::validate() const {
    if (schedule.empty()) throw DomainError("solver.schedule: must not be empty");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0 && schedule[i] <= 1.0))
            throw DomainError("solver.schedule: values must lie in (0, 1]");
        if (i > 0 && !(schedule[i] > schedule[i - 1]))
            throw DomainError("solver.schedule: values must be strictly increasing");
    }
    if (schedule.back() != 1.0) throw DomainError("solver.schedule: last value must be 1");
    if (!(damping > 0.0 && damping <= 1.0)) throw DomainError("solver.damping: must lie in (0, 1]");
    if (!(residual_tol > 0.0)) throw DomainError("solver.residual_tol: must be positive");
    if (max_iters_per_stage < 1) throw DomainError("solver.max_iters: must be >= 1");
    if (!(divergence_guard > 1.0)) throw DomainError("solver.divergence_guard: must be > 1");
    if (!(damping_floor > 0.0 && damping_floor <= damping))
        throw DomainError("solver.damping_floor: must lie in (0, damping]");
}

PicardResult picard_step(const ConvolutionPlan& plan, double t, const VectorField& f, const VectorField& v,
                         Exec exec) {
    require_same_grid(plan.grid(), f.grid, "picard_step force");
    require_same_grid(plan.grid(), v.grid, "picard_step iterate");
    VectorField source = axpby(t, f, -1.0, apply_nonlinearity(v, exec));
    StokesFields s = stokes_solve(plan, source, exec);
    return {std::move(s.u), std::move(s.p)};
}

double support_diameter(const VectorField& f) {
    const GridSpec& g = f.grid;
    const int n = g.dim();
    std::vector<std::int64_t> lo(static_cast<std::size_t>(n), g.points_per_axis());
    std::vector<std::int64_t> hi(static_cast<std::size_t>(n), -1);
    std::vector<std::int64_t> idx(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < g.size(); ++i) {
        bool nz = false;
        for (const auto& c : f.components) nz = nz || c[i] != 0.0;
        if (!nz) continue;
        g.unflatten(i, idx);
        for (std::size_t a = 0; a < idx.size(); ++a) {
            lo[a] = std::min(lo[a], idx[a]);
            hi[a] = std::max(hi[a], idx[a]);
        }
    }
    if (hi[0] < 0) return 0.0;
    // Twice the largest distance from the bounding-box centre: exact for a
    // ball, never more than twice the true diameter.
    std::vector<double> mid(lo.size());
    for (std::size_t a = 0; a < lo.size(); ++a)
        mid[a] = 0.5 * (g.coordinate(lo[a]) + g.coordinate(hi[a]));
    double far = 0.0;
    std::vector<double> x(lo.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        bool nz = false;
        for (const auto& c : f.components) nz = nz || c[i] != 0.0;
        if (!nz) continue;
        g.point(i, x);
        double d2 = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a) d2 += (x[a] - mid[a]) * (x[a] - mid[a]);
        far = std::max(far, d2);
    }
    return 2.0 * (std::sqrt(far) + 0.5 * g.spacing() * std::sqrt(static_cast<double>(lo.size())));
}

SolveReport solve(const ConvolutionPlan& plan, const VectorField& f, const SolverConfig& config, Exec exec) {
    config.validate();
    require_same_grid(plan.grid(), f.grid, "solve force");
    const GridSpec& g = plan.grid();

    SolveReport report;
    report.support_diameter = support_diameter(f);
    if (report.support_diameter > 0.5 * g.half_width()) {
        std::ostringstream msg;
        msg << "support diameter " << report.support_diameter << " exceeds L/2 = " << 0.5 * g.half_width()
            << "; box truncation will affect the far field";
        report.warnings.push_back(msg.str());
    }
    report.linear_norm = l2_norm(stokes_solve(plan, f, exec).u);

    VectorField v(g);
    ScalarField p(g);
    double omega = config.damping;
    for (double t : config.schedule) {
        StageRecord stage;
        stage.t = t;
        const VectorField start = v;
        while (true) {
            stage.damping = omega;
            stage.residuals.clear();
            v = start;
            double best = std::numeric_limits<double>::infinity();
            bool diverged = false;
            for (int k = 1; k <= config.max_iters_per_stage; ++k) {
                PicardResult step = picard_step(plan, t, f, v, exec);
                const double denom = std::max(l2_norm(v), report.linear_norm);
                const double diff = l2_norm(axpby(1.0, step.u, -1.0, v));
                const double res = denom > 0.0 ? diff / denom : 0.0;
                stage.residuals.push_back(res);
                stage.iterations = k;
                if (!std::isfinite(res)) {
                    diverged = true;
                    break;
                }
                if (res <= config.residual_tol) {
                    v = std::move(step.u);
                    p = std::move(step.p);
                    stage.converged = true;
                    break;
                }
                if (res > config.divergence_guard * best) {
                    diverged = true;
                    break;
                }
                best = std::min(best, res);
                v = omega == 1.0 ? std::move(step.u) : axpby(1.0 - omega, v, omega, step.u);
                p = std::move(step.p);
            }
            if (stage.converged) break;
            omega *= 0.5;
            if (omega < config.damping_floor) {
                std::ostringstream msg;
                msg << "no convergence at t=" << t << " (last residual " << stage.residuals.back()
                    << (diverged ? ", diverging" : ", stagnating") << ") with damping above "
                    << config.damping_floor;
                report.failure = msg.str();
                report.stages.push_back(stage);
                report.u = std::move(v);
                report.p = std::move(p);
                return report;
            }
            ++stage.restarts;
        }
        report.stages.push_back(stage);
    }
    report.converged = true;
    report.u = std::move(v);
    report.p = std::move(p);
    return report;
}

}  // namespace nsfs
