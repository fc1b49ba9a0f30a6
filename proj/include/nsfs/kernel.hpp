#pragma once

#include <span>
#include <vector>

namespace nsfs {

/// Volume of the unit ball in R^n, pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);

/// Value of the Stokes fundamental solution at one point.
///
/// Holds the velocity tensor U_ij(x), the pressure covector P_j(x) and the
/// analytic gradient dU_ij/dx_k. Column j of U is the velocity induced by a
/// unit point force along e_j; P_j is the matching pressure.
struct KernelMatrix {
    int n = 0;
    std::vector<double> u_tensor;     // n*n, row-major (i, j)
    std::vector<double> p_vector;     // n
    std::vector<double> grad_tensor;  // n*n*n, index (i, j, k) = d_k U_ij

    double u(int i, int j) const { return u_tensor[i * n + j]; }
    double p(int j) const { return p_vector[j]; }
    double grad(int i, int j, int k) const { return grad_tensor[(i * n + j) * n + k]; }
};

/// Evaluates U, P and grad U at x != 0 in dimension n = x.size() >= 3.
/// Throws DomainError for x = 0 or n < 3.
KernelMatrix eval_kernel(std::span<const double> x);

/// Single-component evaluators used by the table builders. `x` is not checked.
double stokeslet_u(std::span<const double> x, int i, int j);
double stokeslet_p(std::span<const double> x, int j);
double stokeslet_grad(std::span<const double> x, int i, int j, int k);

/// Fourier symbol of the Stokes solution operator at frequency xi != 0.
///
/// velocity: (I - xi xi^T / |xi|^2) / |xi|^2  (n*n, row-major)
/// pressure_imag: imaginary part of the pressure symbol, -xi / |xi|^2; the
/// real part is zero. Convention: f^(xi) = int f(x) exp(-i x.xi) dx.
struct StokesSymbol {
    int n = 0;
    std::vector<double> velocity;
    std::vector<double> pressure_imag;
    double v(int i, int j) const { return velocity[i * n + j]; }
};

StokesSymbol stokes_symbol(std::span<const double> xi);

/// Central finite-difference evaluation of -Lap U_.j + grad P_j at x (n*n,
/// entry (i, j)). Second-order accurate in h; requires |x| > 4h.
std::vector<double> kernel_pde_residual(std::span<const double> x, double h);

/// Central finite-difference column divergence sum_i d_i U_ij at x (length n).
std::vector<double> kernel_fd_divergence(std::span<const double> x, double h);

/// Central finite-difference approximation of grad U (same layout as
/// KernelMatrix::grad_tensor).
std::vector<double> kernel_fd_gradient(std::span<const double> x, double h);

}  // namespace nsfs
