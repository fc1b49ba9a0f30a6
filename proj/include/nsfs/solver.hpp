#pragma once

#include <string>
#include <vector>

#include "nsfs/convolve.hpp"

namespace nsfs {

/// Continuation schedule and Picard controls. Viscosity is fixed at 1;
/// rescale f for other values.
struct SolverConfig {
    std::vector<double> schedule{0.25, 0.5, 0.75, 1.0};
    double damping = 1.0;
    double residual_tol = 1e-8;
    int max_iters_per_stage = 200;
    /// A stage restarts with halved damping once its residual exceeds this
    /// factor times the smallest residual seen in the stage.
    double divergence_guard = 10.0;
    /// Smallest damping tried before the solve is declared non-convergent.
    double damping_floor = 1.0 / 64.0;

    /// Throws DomainError naming the offending field.
    void validate() const;
};

struct PicardResult {
    VectorField u;
    ScalarField p;
};

/// F(t, v): the Stokes solution for the source t f - (v . grad) v.
PicardResult picard_step(const ConvolutionPlan& plan, double t, const VectorField& f, const VectorField& v,
                         Exec exec = Exec::parallel);

struct StageRecord {
    double t = 0.0;
    double damping = 0.0;  // damping of the final (accepted) attempt
    int iterations = 0;    // iterations of the final attempt
    int restarts = 0;
    bool converged = false;
    std::vector<double> residuals;  // final attempt
};

struct SolveReport {
    bool converged = false;
    std::string failure;  // empty on success
    std::vector<StageRecord> stages;
    VectorField u;
    ScalarField p;
    /// ||S f||_{L^2}, the linear Stokes response, used to normalize residuals.
    double linear_norm = 0.0;
    /// Upper estimate of diam supp f (0 for f = 0).
    double support_diameter = 0.0;
    std::vector<std::string> warnings;
};

/// Damped Picard continuation over config.schedule. Non-convergence is
/// reported through SolveReport::converged / failure with the partial fields
/// of the failing stage; it is not an exception.
SolveReport solve(const ConvolutionPlan& plan, const VectorField& f, const SolverConfig& config = {},
                  Exec exec = Exec::parallel);

/// Twice the largest distance from the centre of the bounding box of the
/// nonzero cells (cells counted whole). Exact for a ball, at most twice the
/// true diameter otherwise.
double support_diameter(const VectorField& f);

}  // namespace nsfs
