#include "nsfs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "nsfs/error.hpp"
#include "nsfs/stencil.hpp"

namespace nsfs {

namespace {

double interior_sum_sq(const GridSpec& g, const std::function<double(std::size_t)>& value) {
    return chunked_sum(g.size(), Exec::parallel, [&](std::size_t i) {
        if (!in_interior(g, i)) return 0.0;
        const double v = value(i);
        return v * v;
    });
}

double dot_integral(const VectorField& a, const VectorField& b) {
    const int n = a.dim();
    return chunked_sum(a.grid.size(), Exec::parallel, [&](std::size_t i) {
        double s = 0.0;
        for (int c = 0; c < n; ++c) s += a[c][i] * b[c][i];
        return s;
    }) * a.grid.cell_volume();
}

double rotation_at(const GradientField& gu, std::size_t i) {
    const int n = gu.dim();
    double s = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            // d_a u_b - d_b u_a; entry (i, k) of the gradient is d_k u_i
            const double w = gu(b, a)[i] - gu(a, b)[i];
            s += w * w;
        }
    return s;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

bool in_interior(const GridSpec& g, std::size_t flat) {
    const double lim = 2.0 * g.half_width() / 3.0;
    const auto npts = static_cast<std::size_t>(g.points_per_axis());
    for (int a = g.dim() - 1; a >= 0; --a) {
        const auto k = static_cast<std::int64_t>(flat % npts);
        flat /= npts;
        if (std::abs(g.coordinate(k)) > lim) return false;
    }
    return true;
}

ScalarField head_pressure(const VectorField& u, const ScalarField& p) {
    require_same_grid(u.grid, p.grid, "head_pressure");
    ScalarField theta(p.grid);
    for (std::size_t i = 0; i < theta.data.size(); ++i) {
        double s = 0.0;
        for (const auto& c : u.components) s += c[i] * c[i];
        theta[i] = 0.5 * s + p[i];
    }
    return theta;
}

ScalarField rotation_density(const GradientField& grad_u) {
    ScalarField out(grad_u.grid);
    for_each_index(out.data.size(), Exec::parallel, [&](std::size_t i) { out[i] = rotation_at(grad_u, i); });
    return out;
}

double head_pressure_residual(const VectorField& u, const ScalarField& p, const VectorField& f,
                              double rotation_weight) {
    require_same_grid(u.grid, p.grid, "head_pressure_residual pressure");
    require_same_grid(u.grid, f.grid, "head_pressure_residual force");
    const GridSpec& g = u.grid;
    const int n = g.dim();
    const ScalarField theta = head_pressure(u, p);
    const ScalarField lap = laplacian(theta, 4);
    const VectorField grad_theta = gradient(theta, 4);
    const GradientField gu = gradient(u, 4);
    const ScalarField div_f = divergence(f, 4);

    std::vector<double> lhs(g.size());
    std::vector<double> rhs(g.size());
    for_each_index(g.size(), Exec::parallel, [&](std::size_t i) {
        double adv = 0.0;
        double fu = 0.0;
        for (int c = 0; c < n; ++c) {
            adv += u[c][i] * grad_theta[c][i];
            fu += f[c][i] * u[c][i];
        }
        lhs[i] = -lap[i] + adv;
        rhs[i] = -rotation_weight * rotation_at(gu, i) + fu - div_f[i];
    });
    const double diff = interior_sum_sq(g, [&](std::size_t i) { return lhs[i] - rhs[i]; });
    const double nl = interior_sum_sq(g, [&](std::size_t i) { return lhs[i]; });
    const double nr = interior_sum_sq(g, [&](std::size_t i) { return rhs[i]; });
    const double denom = std::sqrt(nl) + std::sqrt(nr);
    return denom > 0.0 ? std::sqrt(diff) / denom : 0.0;
}

double energy_gap(const GradientField& grad_u, const VectorField& u, const VectorField& f) {
    require_same_grid(grad_u.grid, u.grid, "energy_gap");
    require_same_grid(u.grid, f.grid, "energy_gap force");
    const double e = power_integral(flatten(grad_u), 2.0, Region::whole()).value;
    const double w = dot_integral(f, u);
    if (e == 0.0) {
        if (power_integral(f, 1.0, Region::whole()).value != 0.0)
            throw DomainError("energy_gap: int |grad u|^2 vanishes for nonzero f");
        return 0.0;
    }
    return std::abs(e - w) / e;
}

double scaled_vorticity(const GradientField& grad_u, std::span<const double> x0, double r) {
    if (!(r > 0.0)) throw DomainError("scaled_vorticity: radius must be positive");
    const GridSpec& g = grad_u.grid;
    double acc = 0.0;
    for_each_in_ball(g, x0, r, [&](std::size_t i, double) { acc += rotation_at(grad_u, i); });
    return std::pow(r, -(g.dim() - 4)) * acc * g.cell_volume();
}

VorticityScan scan_scaled_vorticity(const GradientField& grad_u, const MorreySample& sample) {
    if (sample.centers.empty() || sample.radii.empty()) throw DomainError("vorticity scan: empty sample");
    VorticityScan out;
    out.outside_theorem_regime = grad_u.dim() < 4;
    out.radii = sample.radii;
    out.max_per_radius.assign(sample.radii.size(), 0.0);
    out.max_value = -1.0;
    for (const auto& c : sample.centers)
        for (std::size_t k = 0; k < sample.radii.size(); ++k) {
            const double v = scaled_vorticity(grad_u, c, sample.radii[k]);
            out.max_per_radius[k] = std::max(out.max_per_radius[k], v);
            if (v > out.max_value) {
                out.max_value = v;
                out.argmax_center = c;
                out.argmax_radius = sample.radii[k];
            }
        }
    std::vector<double> lx;
    std::vector<double> ly;
    // Balls of radius h hold only a handful of cells, so the fit starts at 2h.
    const double r_min = 2.0 * grad_u.grid.spacing() * (1.0 - 1e-12);
    for (std::size_t k = 0; k < out.radii.size() && lx.size() < 3; ++k)
        if (out.radii[k] >= r_min && out.max_per_radius[k] > 0.0) {
            lx.push_back(std::log(out.radii[k]));
            ly.push_back(std::log(out.max_per_radius[k]));
        }
    if (lx.size() >= 2) out.small_r_slope = fit_line(lx, ly).slope;
    return out;
}

std::vector<std::pair<double, double>> tail_energy(const GradientField& grad_u, const std::vector<double>& radii) {
    const VectorField flat = flatten(grad_u);
    const std::vector<double> origin(static_cast<std::size_t>(grad_u.dim()), 0.0);
    std::vector<std::pair<double, double>> out;
    for (double r : radii) {
        if (!(r > 0.0 && r < grad_u.grid.half_width()))
            throw DomainError("tail_energy: radii must lie in (0, L)");
        out.emplace_back(r, power_integral(flat, 2.0, Region::outside_ball(origin, r)).value);
    }
    return out;
}

double momentum_residual(const VectorField& u, const ScalarField& p, const VectorField& f) {
    require_same_grid(u.grid, p.grid, "momentum_residual pressure");
    require_same_grid(u.grid, f.grid, "momentum_residual force");
    const GridSpec& g = u.grid;
    const int n = g.dim();
    const VectorField lap = laplacian(u, 4);
    const VectorField adv = apply_nonlinearity(u);
    const VectorField gp = gradient(p, 4);
    double num = 0.0;
    double den = 0.0;
    for (int c = 0; c < n; ++c) {
        num += interior_sum_sq(g, [&](std::size_t i) { return -lap[c][i] + adv[c][i] + gp[c][i] - f[c][i]; });
        den += interior_sum_sq(g, [&](std::size_t i) { return f[c][i]; });
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::sqrt(num);
    return std::sqrt(num / den);
}

double divergence_ratio(const VectorField& u) {
    const double d = lp_norm(divergence(u, 4), 2.0);
    const double gnorm = lp_norm(flatten(gradient(u, 4)), 2.0);
    return gnorm > 0.0 ? d / gnorm : 0.0;
}

GradientField combined_gradient(const ConvolutionPlan& plan, const VectorField& u, const VectorField& f) {
    require_same_grid(plan.grid(), u.grid, "combined_gradient velocity");
    require_same_grid(plan.grid(), f.grid, "combined_gradient force");
    GradientField fd = gradient(u, 4);
    if (!plan.has_gradient_tables()) return fd;
    const GradientField conv = velocity_gradient(plan, axpby(1.0, f, -1.0, apply_nonlinearity(u)));
    const int n = u.dim();
    for_each_index(u.grid.size(), Exec::parallel, [&](std::size_t i) {
        bool in_support = false;
        for (const auto& c : f.components) in_support = in_support || c[i] != 0.0;
        if (in_support) return;
        for (int a = 0; a < n; ++a)
            for (int k = 0; k < n; ++k) fd(a, k)[i] = conv(a, k)[i];
    });
    return fd;
}

double default_theta_exponent(int n) {
    const double q = 0.5 * (std::max(2.0, n / 4.0) + std::min(4.0, n / 2.0));
    // For n <= 4 the q-interval is empty or degenerate; any r > n/2 is admissible.
    if (!(n - 2.0 * q > 0.0)) return n;
    return n * q / (n - 2.0 * q);
}

DiagnosticsBundle full_bundle(const ConvolutionPlan& plan, const VectorField& u, const ScalarField& p,
                              const VectorField& f, const DiagnosticsParams& params) {
    require_same_grid(plan.grid(), u.grid, "diagnostics velocity");
    require_same_grid(plan.grid(), p.grid, "diagnostics pressure");
    require_same_grid(plan.grid(), f.grid, "diagnostics force");
    const GridSpec& g = plan.grid();
    const int n = g.dim();
    const double l = g.half_width();

    DiagnosticsBundle b;
    const GradientField gu = combined_gradient(plan, u, f);
    b.gradient_by_convolution = plan.has_gradient_tables();

    b.u_decay = radial_profile(u, params.profile);
    b.grad_u_decay = radial_profile(magnitude(gu), params.profile);
    b.p_decay = radial_profile(p, params.profile);

    b.grad_energy = power_integral(flatten(gu), 2.0, Region::whole()).value;
    b.work = dot_integral(f, u);
    b.energy_gap = b.grad_energy > 0.0 ? std::abs(b.grad_energy - b.work) / b.grad_energy : 0.0;

    b.head_pressure_residual = head_pressure_residual(u, p, f, 0.5);
    b.head_pressure_residual_ordered = head_pressure_residual(u, p, f, 1.0);

    b.theta_r = params.theta_r > 0.0 ? params.theta_r : default_theta_exponent(n);
    b.theta_plus_lr = lp_norm(positive_part(head_pressure(u, p)), b.theta_r);

    const MorreySample sample = default_morrey_sample(g, params.sample_lattice);
    b.vorticity = scan_scaled_vorticity(gu, sample);

    std::vector<double> radii = params.tail_radii;
    if (radii.empty()) radii = {g.spacing(), l / 8.0, l / 4.0, l / 2.0, 0.75 * l};
    b.tail_energy = tail_energy(gu, radii);

    b.cd1 = cd1_norm(u, gu);
    b.morrey_lambda = std::max(n - 4, 0);
    b.grad_u_morrey = morrey_norm(magnitude(gu), 2.0, b.morrey_lambda, sample);

    b.momentum_residual = momentum_residual(u, p, f);
    b.divergence_ratio = divergence_ratio(u);
    return b;
}

void write_diagnostics_csv(std::ostream& os, const DiagnosticsBundle& b) {
    os << "name,value,window_min,window_max,fit_residual,params\n";
    const auto row = [&](const std::string& name, double v, const std::string& lo = "", const std::string& hi = "",
                         const std::string& res = "", const std::string& params = "") {
        os << name << ',' << fmt(v) << ',' << lo << ',' << hi << ',' << res << ',' << params << '\n';
    };
    const auto decay = [&](const std::string& name, const DecayProfile& d) {
        row(name, d.fitted_exponent, fmt(d.fit_lo), fmt(d.fit_hi), fmt(d.fit_residual),
            "fit_points=" + std::to_string(d.fit_points));
    };
    decay("u_decay_exponent", b.u_decay);
    decay("grad_u_decay_exponent", b.grad_u_decay);
    decay("p_decay_exponent", b.p_decay);
    row("grad_energy", b.grad_energy);
    row("work_f_dot_u", b.work);
    row("energy_gap", b.energy_gap);
    row("head_pressure_residual", b.head_pressure_residual, "", "", "", "rotation_weight=0.5;region=interior");
    row("head_pressure_residual_ordered_sum", b.head_pressure_residual_ordered, "", "", "",
        "rotation_weight=1;region=interior");
    row("theta_plus_lr", b.theta_plus_lr, "", "", "", "r=" + fmt(b.theta_r));
    row("scaled_vorticity_max", b.vorticity.max_value, "", "", "",
        "sampled;radius=" + fmt(b.vorticity.argmax_radius) +
            (b.vorticity.outside_theorem_regime ? ";outside_regime=n<4" : ""));
    for (std::size_t k = 0; k < b.vorticity.radii.size(); ++k)
        row("scaled_vorticity_at_radius", b.vorticity.max_per_radius[k], "", "", "",
            "r=" + fmt(b.vorticity.radii[k]));
    row("scaled_vorticity_small_r_slope", b.vorticity.small_r_slope);
    for (const auto& [r, v] : b.tail_energy) row("tail_energy", v, "", "", "", "R=" + fmt(r));
    row("cd1_norm", b.cd1, "", "", "", "box_restricted");
    row("grad_u_morrey", b.grad_u_morrey.value, "", "", "",
        "sampled;p=2;lambda=" + fmt(b.morrey_lambda) + ";radius=" + fmt(b.grad_u_morrey.argmax_radius));
    row("momentum_residual", b.momentum_residual, "", "", "", "region=interior");
    row("divergence_ratio", b.divergence_ratio);
    row("gradient_by_convolution", b.gradient_by_convolution ? 1.0 : 0.0);
}

}  // namespace nsfs
