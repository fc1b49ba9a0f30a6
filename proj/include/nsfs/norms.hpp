#pragma once

#include <vector>

#include "nsfs/field.hpp"

namespace nsfs {

/// Integration region for the L^p norms.
struct Region {
    enum class Kind { whole, ball, outside_ball };
    Kind kind = Kind::whole;
    std::vector<double> center;
    double radius = 0.0;

    static Region whole() { return {}; }
    static Region ball(std::vector<double> c, double r) { return {Kind::ball, std::move(c), r}; }
    static Region outside_ball(std::vector<double> c, double r) {
        return {Kind::outside_ball, std::move(c), r};
    }
};

/// Midpoint-rule integral of |s|^p over a region, plus the fraction of a
/// ball region lying outside the box (0 for the other region kinds).
struct RegionIntegral {
    double value = 0.0;
    double clipped_fraction = 0.0;
};

/// max over grid points of (1 + |x|)^a |v(x)|, with |.| the Euclidean norm
/// over all components of v.
double weighted_sup_norm(const VectorField& v, double exponent, Exec exec = Exec::parallel);

/// Box-restricted C^1_d norm: weighted_sup_norm(v, n-3) + weighted_sup_norm(grad v, n-2).
double cd1_norm(const VectorField& v, const GradientField& grad_v);

RegionIntegral power_integral(const ScalarField& s, double p, const Region& region, Exec exec = Exec::parallel);
RegionIntegral power_integral(const VectorField& v, double p, const Region& region, Exec exec = Exec::parallel);

/// (sum |s|^p h^n)^{1/p} over the region. Throws DomainError for p < 1 or a
/// non-positive ball radius.
double lp_norm(const ScalarField& s, double p, const Region& region = Region::whole(), Exec exec = Exec::parallel);
double lp_norm(const VectorField& v, double p, const Region& region = Region::whole(), Exec exec = Exec::parallel);

/// L^2 norm over the whole box, the metric used by the solver residuals.
double l2_norm(const VectorField& v);

ScalarField positive_part(const ScalarField& s);

/// Finite sample of balls used to approximate a Morrey supremum.
struct MorreySample {
    std::vector<std::vector<double>> centers;
    std::vector<double> radii;
};

/// k centres per axis at -L + 2Lm/(k + 1), m = 1..k (odd k includes the
/// origin), and dyadic radii h 2^j <= L.
MorreySample default_morrey_sample(const GridSpec& g, int lattice_points_per_axis = 5);

struct MorreyValue {
    double value = 0.0;  // sampled lower bound of the Morrey norm
    std::vector<double> argmax_center;
    double argmax_radius = 0.0;
};

/// (max over sampled (x, r) of r^{-lambda} int_{B_r(x)} |s|^p)^{1/p}.
/// Requires p >= 1, 0 <= lambda < n and a non-empty sample.
MorreyValue morrey_norm(const ScalarField& s, double p, double lambda, const MorreySample& sample);

/// Visits every grid point inside the closed ball |x - c| <= r, calling
/// fn(flat_index, squared_distance). Only the bounding index box is scanned.
template <class Fn>
void for_each_in_ball(const GridSpec& g, std::span<const double> center, double r, Fn&& fn);

}  // namespace nsfs

#include "nsfs/norms_inl.hpp"
