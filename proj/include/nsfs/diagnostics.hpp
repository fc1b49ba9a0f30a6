#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nsfs/convolve.hpp"
#include "nsfs/norms.hpp"
#include "nsfs/profile.hpp"

namespace nsfs {

/// True for points of the cube |x_a| <= (2/3) L, where PDE residuals are
/// evaluated (one-sided stencils and truncation pollute the rim).
bool in_interior(const GridSpec& g, std::size_t flat);

/// theta = |u|^2 / 2 + p.
ScalarField head_pressure(const VectorField& u, const ScalarField& p);

/// Pointwise sum over ordered pairs (i, j) of (d_i u_j - d_j u_i)^2.
ScalarField rotation_density(const GradientField& grad_u);

/// Relative interior L^2 residual of
///   -Lap theta + u . grad theta = -w sum_{i,j} (d_i u_j - d_j u_i)^2 + f . u - div f
/// with order-4 stencils, normalized by ||LHS|| + ||RHS|| (0 when both vanish).
/// Smooth solutions satisfy it with w = 1/2 (each unordered pair once); w = 1
/// evaluates the ordered-pair sum literally.
double head_pressure_residual(const VectorField& u, const ScalarField& p, const VectorField& f,
                              double rotation_weight = 0.5);

/// |int |grad u|^2 - int f . u| / int |grad u|^2. Returns 0 when u, f vanish;
/// throws DomainError when int |grad u|^2 = 0 but f != 0.
double energy_gap(const GradientField& grad_u, const VectorField& u, const VectorField& f);

/// r^{-(n-4)} int_{B_r(x0)} sum_{i,j} (d_i u_j - d_j u_i)^2.
double scaled_vorticity(const GradientField& grad_u, std::span<const double> x0, double r);

struct VorticityScan {
    std::vector<double> radii;
    std::vector<double> max_per_radius;  // max over centres
    double max_value = 0.0;
    std::vector<double> argmax_center;
    double argmax_radius = 0.0;
    /// log-log slope of max_per_radius over the three smallest radii >= 2h
    /// with nonzero values.
    double small_r_slope = 0.0;
    bool outside_theorem_regime = false;  // n < 4
};

VorticityScan scan_scaled_vorticity(const GradientField& grad_u, const MorreySample& sample);

/// (R, int_{box minus B_R(0)} |grad u|^2) for each R.
std::vector<std::pair<double, double>> tail_energy(const GradientField& grad_u, const std::vector<double>& radii);

/// ||-Lap u + (u.grad) u + grad p - f|| / ||f|| on the interior cube (order 4).
double momentum_residual(const VectorField& u, const ScalarField& p, const VectorField& f);

/// ||div u|| / ||grad u|| with order-4 stencils over the box.
double divergence_ratio(const VectorField& u);

/// grad u for diagnostics: convolution with the grad U tables outside supp f
/// (source f - (u.grad)u), order-4 differences of u inside. Pure finite
/// differences when the plan has no gradient tables.
GradientField combined_gradient(const ConvolutionPlan& plan, const VectorField& u, const VectorField& f);

/// r = nq/(n - 2q) at q = (max{2, n/4} + min{4, n/2}) / 2 when n - 2q > 0
/// (n >= 5); r = n otherwise.
double default_theta_exponent(int n);

struct DiagnosticsParams {
    ProfileOptions profile;
    std::vector<double> tail_radii;  // empty: h, L/8, L/4, L/2, 3L/4
    double theta_r = 0.0;            // 0: default_theta_exponent(n)
    int sample_lattice = 3;          // centres per axis for the vorticity and Morrey scans
};

struct DiagnosticsBundle {
    DecayProfile u_decay;
    DecayProfile grad_u_decay;
    DecayProfile p_decay;
    double grad_energy = 0.0;  // int |grad u|^2
    double work = 0.0;         // int f . u
    double energy_gap = 0.0;
    double head_pressure_residual = 0.0;
    double head_pressure_residual_ordered = 0.0;
    double theta_plus_lr = 0.0;
    double theta_r = 0.0;
    VorticityScan vorticity;
    std::vector<std::pair<double, double>> tail_energy;
    double cd1 = 0.0;
    MorreyValue grad_u_morrey;  // p = 2, lambda = max(n - 4, 0), sampled
    double morrey_lambda = 0.0;
    double momentum_residual = 0.0;
    double divergence_ratio = 0.0;
    bool gradient_by_convolution = false;
};

DiagnosticsBundle full_bundle(const ConvolutionPlan& plan, const VectorField& u, const ScalarField& p,
                              const VectorField& f, const DiagnosticsParams& params = {});

/// One row per named diagnostic: name,value,window_min,window_max,fit_residual,params.
void write_diagnostics_csv(std::ostream& os, const DiagnosticsBundle& b);

}  // namespace nsfs
