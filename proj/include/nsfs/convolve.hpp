#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nsfs/fft.hpp"
#include "nsfs/field.hpp"

namespace nsfs {

/// Value used for U at zero displacement, where the kernel is singular.
///
/// lattice_zeta: the weight that makes the punctured lattice sum exact for
///   the h^2 term of its error expansion, built from the analytically
///   continued Epstein zeta sum of the cubic lattice. The convolution is then
///   fourth-order accurate for smooth sources.
/// cell_average: mean of U over the origin cell from m^n - 1 midpoint
///   subsamples (the exact centre skipped). Second order.
enum class SingularCellRule { lattice_zeta, cell_average };

const char* to_string(SingularCellRule rule);

struct PlanOptions {
    /// Also tabulate grad U so velocity gradients can be computed by
    /// convolution. This multiplies the table memory by about n.
    bool gradient_tables = true;
    /// When gradient tables are requested but would exceed the budget, drop
    /// them instead of failing.
    bool gradient_tables_if_fit = false;
    std::size_t memory_budget_bytes = std::size_t{3} << 30;
    SingularCellRule singular_rule = SingularCellRule::lattice_zeta;
    /// Per-axis subsamples for SingularCellRule::cell_average (odd).
    int singular_subsamples = 5;
};

/// Analytic continuation of sum over nonzero d in Z^n of |d|^{-s}
/// (0 < s < n, s != n), evaluated with the theta-function splitting.
double lattice_zeta(int n, double s);

/// Average of U_ij over the cell [-h/2, h/2]^n, approximated by m^n - 1
/// midpoint subsamples (the exact centre is skipped).
double singular_cell_average(int n, double h, int i, int j, int subsamples);

/// Origin value of U_ij under the given rule (before the h^n weight).
double singular_cell_value(int n, double h, int i, int j, SingularCellRule rule, int subsamples = 5);

/// Precomputed free-space (Hockney) convolution with the Stokes kernels.
///
/// The kernels are sampled at the cell-centre displacements d h,
/// d in [-N, N-1]^n, of the zero-padded 2N^n lattice and multiplied by the
/// cell volume h^n; the origin cell uses the plan's singular-cell rule.
/// Entries with any d_a = -N are never reached by box-to-box interactions and
/// are set to zero, which makes the even tables exactly even and the odd
/// tables exactly odd. Their transforms are therefore real (U) or purely
/// imaginary (P, grad U) and are stored as one double per half-spectrum mode.
class ConvolutionPlan {
public:
    const GridSpec& grid() const { return grid_; }
    std::size_t padded_n() const { return static_cast<std::size_t>(2 * grid_.points_per_axis()); }
    bool has_gradient_tables() const { return !grad_tables_.empty(); }
    SingularCellRule singular_rule() const { return rule_; }
    int singular_subsamples() const { return subsamples_; }
    const AxisFFT& fft() const { return fft_; }

    /// Number of stored kernel tables: n(n+1)/2 + n (+ n^2(n+1)/2 with gradients).
    std::size_t table_count() const;
    /// Bytes held by the kernel tables.
    std::size_t table_bytes() const;
    /// Per-solve scratch bytes (n source spectra, one accumulator, one real array).
    std::size_t scratch_bytes() const;

    /// Spectral tables (length fft().spectral_size()). velocity(i, j) holds the
    /// real part of the transform of U_ij h^n; pressure(j) and gradient(i, j, k)
    /// hold imaginary parts of the transforms of P_j h^n and d_k U_ij h^n.
    std::span<const double> velocity_table(int i, int j) const;
    std::span<const double> pressure_table(int j) const;
    std::span<const double> gradient_table(int i, int j, int k) const;

    /// Largest |discarded part| / max |kept part| over all tables, recorded
    /// while building (a measure of parity / conjugate symmetry).
    double parity_defect() const { return parity_defect_; }

private:
    friend ConvolutionPlan build_plan(const GridSpec&, const PlanOptions&);
    ConvolutionPlan(const GridSpec& g, AxisFFT fft) : grid_(g), fft_(std::move(fft)) {}

    GridSpec grid_;
    AxisFFT fft_;
    SingularCellRule rule_ = SingularCellRule::lattice_zeta;
    int subsamples_ = 5;
    std::vector<std::vector<double>> u_tables_;
    std::vector<std::vector<double>> p_tables_;
    std::vector<std::vector<double>> grad_tables_;
    double parity_defect_ = 0.0;
};

/// Bytes needed by build_plan (tables + scratch) for the given options.
std::size_t plan_required_bytes(const GridSpec& g, bool gradient_tables);

/// Throws MemoryBudgetExceeded when the plan does not fit the budget.
ConvolutionPlan build_plan(const GridSpec& g, const PlanOptions& opts = {});

struct StokesFields {
    VectorField u;
    ScalarField p;
};

/// u_i = sum_j U_ij * g_j and p = sum_j P_j * g_j over the box (free space).
StokesFields stokes_solve(const ConvolutionPlan& plan, const VectorField& g, Exec exec = Exec::parallel);

/// grad u by convolution with the sampled grad U tables. Requires a plan
/// with gradient tables.
GradientField velocity_gradient(const ConvolutionPlan& plan, const VectorField& g, Exec exec = Exec::parallel);

enum class Quantity { velocity, pressure, velocity_gradient };

/// O(N^n) direct sum of kernel(x - y) g(y) h^n at one point x. When x is a
/// grid point, displacements are formed as exact multiples of h and the
/// origin cell uses the same singular-cell rule as the plan, so the result
/// equals the spectral path up to round-off. Returns n values (velocity), 1
/// (pressure) or n*n ((i, k) = d_k u_i).
std::vector<double> direct_quadrature(const VectorField& g, std::span<const double> x, Quantity which,
                                      SingularCellRule rule = SingularCellRule::lattice_zeta,
                                      int singular_subsamples = 5);

/// (u . grad) u with order-4 differences.
VectorField apply_nonlinearity(const VectorField& u, Exec exec = Exec::parallel);

namespace reference {

/// Serial Hockney convolution with a full complex M^n transform built on the
/// in-house mixed-radix DFT. Independent of FFTW; meant for small grids.
StokesFields stokes_solve(const VectorField& g, SingularCellRule rule = SingularCellRule::lattice_zeta,
                          int singular_subsamples = 5);

}  // namespace reference

}  // namespace nsfs
