#pragma once

#include <span>
#include <vector>

#include "nsfs/field.hpp"

namespace nsfs {

/// Ordinary least-squares line y = slope * x + intercept.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double rms_residual = 0.0;
};

/// Throws DomainError for fewer than two points or a degenerate abscissa.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct ProfileOptions {
    int shells = 24;
    double window_lo = 0.3;   // fraction of L
    double window_hi = 0.75;  // fraction of L
};

/// Radial decay statistics of |field| on equal-log-width shells over [h, L].
///
/// The power-law fit regresses log(shell_sup) on log(sup_radius), the radius
/// where the shell supremum is attained, so an exact power law is recovered
/// exactly. fitted_exponent = e for a field behaving like r^{-e}.
struct DecayProfile {
    std::vector<double> shell_radii;  // geometric shell centres, increasing
    std::vector<double> shell_inner;
    std::vector<double> shell_outer;
    std::vector<double> shell_sup;
    std::vector<double> sup_radius;
    std::vector<double> shell_mean;
    std::vector<std::size_t> shell_count;
    double fitted_exponent = 0.0;
    double fit_lo = 0.0;
    double fit_hi = 0.0;
    double fit_residual = 0.0;
    int fit_points = 0;
};

/// Requires shells >= 4; throws DomainError when fewer than two non-empty
/// shells fall in the fit window.
DecayProfile radial_profile(const ScalarField& s, const ProfileOptions& opts = {});
DecayProfile radial_profile(const VectorField& v, const ProfileOptions& opts = {});

}  // namespace nsfs
