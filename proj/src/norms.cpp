#include "nsfs/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nsfs/error.hpp"
#include "nsfs/kernel.hpp"

namespace nsfs {

namespace {

double weight(double r, double a) { return a == 0.0 ? 1.0 : std::pow(1.0 + r, a); }

double ball_volume(int n, double r) { return unit_ball_volume(n) * std::pow(r, n); }

double abs_pow(double v, double p) {
    const double a = std::abs(v);
    return p == 1.0 ? a : (p == 2.0 ? a * a : std::pow(a, p));
}

void check_region(const GridSpec& g, const Region& region) {
    if (region.kind == Region::Kind::whole) return;
    if (!(region.radius > 0.0)) throw DomainError("ball radius must be positive");
    if (static_cast<int>(region.center.size()) != g.dim())
        throw DomainError("ball centre has the wrong dimension");
}

// Integrates value(i) over the region with the midpoint rule.
template <class Value>
RegionIntegral integrate_region(const GridSpec& g, const Region& region, Exec exec, Value&& value) {
    const double dv = g.cell_volume();
    RegionIntegral out;
    switch (region.kind) {
        case Region::Kind::whole:
            out.value = chunked_sum(g.size(), exec, value) * dv;
            return out;
        case Region::Kind::ball: {
            double acc = 0.0;
            std::size_t count = 0;
            for_each_in_ball(g, region.center, region.radius, [&](std::size_t i, double) {
                acc += value(i);
                ++count;
            });
            out.value = acc * dv;
            out.clipped_fraction =
                std::max(0.0, 1.0 - static_cast<double>(count) * dv / ball_volume(g.dim(), region.radius));
            return out;
        }
        case Region::Kind::outside_ball: {
            const double r2 = region.radius * region.radius;
            const int n = g.dim();
            out.value = chunked_sum(g.size(), exec, [&](std::size_t i) {
                std::array<double, kMaxDim> x{};
                g.point(i, std::span<double>(x.data(), static_cast<std::size_t>(n)));
                double d2 = 0.0;
                for (int a = 0; a < n; ++a) {
                    const double d = x[static_cast<std::size_t>(a)] - region.center[static_cast<std::size_t>(a)];
                    d2 += d * d;
                }
                return d2 > r2 ? value(i) : 0.0;
            }) * dv;
            return out;
        }
    }
    return out;
}

}  // namespace

double weighted_sup_norm(const VectorField& v, double exponent, Exec exec) {
    const GridSpec& g = v.grid;
    return chunked_max(g.size(), exec, 0.0, [&](std::size_t i) {
        double s = 0.0;
        for (const auto& c : v.components) s += c[i] * c[i];
        return s == 0.0 ? 0.0 : weight(g.radius(i), exponent) * std::sqrt(s);
    });
}

double cd1_norm(const VectorField& v, const GradientField& grad_v) {
    require_same_grid(v.grid, grad_v.grid, "cd1_norm");
    const int n = v.grid.dim();
    return weighted_sup_norm(v, n - 3) + weighted_sup_norm(flatten(grad_v), n - 2);
}

RegionIntegral power_integral(const ScalarField& s, double p, const Region& region, Exec exec) {
    if (!(p >= 1.0)) throw DomainError("L^p exponent must be >= 1");
    check_region(s.grid, region);
    return integrate_region(s.grid, region, exec, [&](std::size_t i) { return abs_pow(s[i], p); });
}

RegionIntegral power_integral(const VectorField& v, double p, const Region& region, Exec exec) {
    if (!(p >= 1.0)) throw DomainError("L^p exponent must be >= 1");
    check_region(v.grid, region);
    return integrate_region(v.grid, region, exec, [&](std::size_t i) {
        double s = 0.0;
        for (const auto& c : v.components) s += c[i] * c[i];
        return p == 2.0 ? s : std::pow(s, 0.5 * p);
    });
}

double lp_norm(const ScalarField& s, double p, const Region& region, Exec exec) {
    return std::pow(power_integral(s, p, region, exec).value, 1.0 / p);
}

double lp_norm(const VectorField& v, double p, const Region& region, Exec exec) {
    return std::pow(power_integral(v, p, region, exec).value, 1.0 / p);
}

double l2_norm(const VectorField& v) { return lp_norm(v, 2.0); }

ScalarField positive_part(const ScalarField& s) {
    ScalarField out(s.grid);
    for (std::size_t i = 0; i < s.data.size(); ++i) out[i] = s[i] > 0.0 ? s[i] : 0.0;
    return out;
}

MorreySample default_morrey_sample(const GridSpec& g, int lattice_points_per_axis) {
    if (lattice_points_per_axis < 1) throw DomainError("Morrey lattice needs at least one point per axis");
    const int n = g.dim();
    const double l = g.half_width();
    const int k = lattice_points_per_axis;
    std::vector<double> axis_pos;
    for (int m = 1; m <= k; ++m) axis_pos.push_back(-l + 2.0 * l * m / (k + 1));

    MorreySample sample;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        std::vector<double> c(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) c[static_cast<std::size_t>(a)] = axis_pos[static_cast<std::size_t>(idx[a])];
        sample.centers.push_back(std::move(c));
        int a = n - 1;
        for (; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < k) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
        if (a < 0) break;
    }
    for (double r = g.spacing(); r <= l * (1.0 + 1e-12); r *= 2.0) sample.radii.push_back(r);
    return sample;
}

MorreyValue morrey_norm(const ScalarField& s, double p, double lambda, const MorreySample& sample) {
    const int n = s.grid.dim();
    if (!(p >= 1.0)) throw DomainError("Morrey exponent p must be >= 1");
    if (!(lambda >= 0.0 && lambda < n)) throw DomainError("Morrey lambda must lie in [0, n)");
    if (sample.centers.empty() || sample.radii.empty()) throw DomainError("Morrey sample set is empty");

    MorreyValue best;
    double best_scaled = -1.0;
    for (const auto& c : sample.centers) {
        for (double r : sample.radii) {
            const double integral = power_integral(s, p, Region::ball(c, r), Exec::serial).value;
            const double scaled = std::pow(r, -lambda) * integral;
            if (scaled > best_scaled) {
                best_scaled = scaled;
                best.argmax_center = c;
                best.argmax_radius = r;
            }
        }
    }
    best.value = std::pow(best_scaled, 1.0 / p);
    return best;
}

}  // namespace nsfs
