#include "nsfs/profile.hpp"

#include <cmath>

#include "nsfs/error.hpp"

namespace nsfs {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t m = x.size();
    if (m < 2 || y.size() != m) throw DomainError("line fit needs at least two (x, y) pairs");
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw DomainError("line fit abscissae are all equal");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double e = y[i] - (f.slope * x[i] + f.intercept);
        sse += e * e;
    }
    f.rms_residual = std::sqrt(sse / static_cast<double>(m));
    f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return f;
}

DecayProfile radial_profile(const ScalarField& s, const ProfileOptions& opts) {
    if (opts.shells < 4) throw DomainError("radial profile needs at least 4 shells");
    if (!(opts.window_lo > 0.0 && opts.window_lo < opts.window_hi && opts.window_hi <= 1.0))
        throw DomainError("fit window fractions must satisfy 0 < lo < hi <= 1");

    const GridSpec& g = s.grid;
    const double h = g.spacing();
    const double l = g.half_width();
    const int shells = opts.shells;
    const double log_lo = std::log(h);
    const double log_span = std::log(l) - log_lo;

    DecayProfile prof;
    std::vector<double> sum(static_cast<std::size_t>(shells), 0.0);
    prof.shell_sup.assign(static_cast<std::size_t>(shells), 0.0);
    prof.sup_radius.assign(static_cast<std::size_t>(shells), 0.0);
    prof.shell_count.assign(static_cast<std::size_t>(shells), 0);
    for (int k = 0; k < shells; ++k) {
        const double inner = std::exp(log_lo + log_span * k / shells);
        const double outer = std::exp(log_lo + log_span * (k + 1) / shells);
        prof.shell_inner.push_back(inner);
        prof.shell_outer.push_back(outer);
        prof.shell_radii.push_back(std::sqrt(inner * outer));
    }

    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.radius(i);
        if (r < h || r >= l) continue;
        auto k = static_cast<int>(std::floor((std::log(r) - log_lo) / log_span * shells));
        if (k < 0) k = 0;
        if (k >= shells) k = shells - 1;
        // Guard the floating-point edge of the binning.
        while (k > 0 && r < prof.shell_inner[static_cast<std::size_t>(k)]) --k;
        while (k + 1 < shells && r >= prof.shell_outer[static_cast<std::size_t>(k)]) ++k;
        const auto uk = static_cast<std::size_t>(k);
        const double a = std::abs(s[i]);
        sum[uk] += a;
        ++prof.shell_count[uk];
        if (prof.shell_count[uk] == 1 || a > prof.shell_sup[uk] ||
            (a == prof.shell_sup[uk] && r < prof.sup_radius[uk])) {
            prof.shell_sup[uk] = a;
            prof.sup_radius[uk] = r;
        }
    }
    for (int k = 0; k < shells; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        prof.shell_mean.push_back(prof.shell_count[uk] ? sum[uk] / static_cast<double>(prof.shell_count[uk]) : 0.0);
    }

    prof.fit_lo = opts.window_lo * l;
    prof.fit_hi = opts.window_hi * l;
    std::vector<double> lx;
    std::vector<double> ly;
    int nonempty = 0;
    bool all_zero = true;
    for (int k = 0; k < shells; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const double rc = prof.shell_radii[uk];
        if (rc < prof.fit_lo || rc > prof.fit_hi || prof.shell_count[uk] == 0) continue;
        ++nonempty;
        if (prof.shell_sup[uk] > 0.0) {
            all_zero = false;
            lx.push_back(std::log(prof.sup_radius[uk]));
            ly.push_back(std::log(prof.shell_sup[uk]));
        }
    }
    if (nonempty < 2) throw DomainError("fewer than 2 non-empty shells in the fit window");
    if (all_zero) return prof;  // identically zero: exponent 0, residual 0
    if (lx.size() < 2) throw DomainError("fewer than 2 non-zero shells in the fit window");
    const LineFit fit = fit_line(lx, ly);
    prof.fitted_exponent = -fit.slope;
    prof.fit_residual = fit.rms_residual;
    prof.fit_points = static_cast<int>(lx.size());
    return prof;
}

DecayProfile radial_profile(const VectorField& v, const ProfileOptions& opts) {
    return radial_profile(magnitude(v), opts);
}

}  // namespace nsfs
