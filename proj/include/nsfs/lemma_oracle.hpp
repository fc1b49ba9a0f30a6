#pragma once

#include <vector>

#include "nsfs/error.hpp"

namespace nsfs {

/// Quadrature could not reach the requested tolerance.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double achieved) : Error(what), achieved_tolerance(achieved) {}
    double achieved_tolerance;
};

/// Parameters of F(x) = int_{R^n} |x - y|^{-alpha} (1 + |y|)^{-beta} dy.
/// Construction enforces 0 <= alpha < n and alpha + beta > n.
struct LemmaParams {
    LemmaParams(int n, double alpha, double beta, std::vector<double> eval_radii = {10.0, 30.0, 100.0, 300.0});

    int n;
    double alpha;
    double beta;
    std::vector<double> eval_radii;

    /// min{alpha, alpha + beta - n}.
    double gamma() const;
    bool log_case() const { return beta == n; }
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    /// Refinement levels of the double-exponential rules.
    int max_refinements = 12;
};

/// F at |x| = r. The integral is reduced to (rho, s) = (|y|, |x - y|):
///   F = |S^{n-2}| / r int_0^inf rho^{n-2} (1 + rho)^{-beta}
///         int_{|r-rho|}^{r+rho} s^{1-alpha} sin^{n-3}(phi) ds drho,
/// with phi the angle between x and y. The rho integral is split at rho = r,
/// where the inner integral inherits the |x - y|^{-alpha} singularity.
/// Throws QuadratureError when the error estimate exceeds 1e-6 relative.
double riesz_convolution(const LemmaParams& params, double r, const QuadratureOptions& opts = {});

struct DecayCheck {
    double gamma_expected = 0.0;
    bool log_case = false;
    std::vector<double> radii;
    std::vector<double> values;
    /// Slope of log F against log(1 + r).
    double slope = 0.0;
    double slope_r_squared = 0.0;
    /// beta = n: slope and R^2 of F (1 + r)^alpha against log(2 + r).
    double log_slope = 0.0;
    double log_r_squared = 0.0;
    bool pass = false;
};

/// Evaluates F on params.eval_radii (span >= 1.45 decades, so 10..300
/// qualifies) and fits
/// the decay. For beta != n, passes when |slope + gamma| <= slope_tolerance;
/// for beta = n, when the log fit has positive slope and R^2 > 0.99.
DecayCheck verify_decay(const LemmaParams& params, double slope_tolerance = 0.15, const QuadratureOptions& opts = {});

struct LemmaCase {
    int n;
    double alpha;
    double beta;
};

/// Default grid for one dimension: six (alpha, beta) pairs with beta != n
/// followed by one beta = n pair.
std::vector<LemmaCase> default_lemma_grid(int n);

}  // namespace nsfs
