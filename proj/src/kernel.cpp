#include "nsfs/kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nsfs/error.hpp"

namespace nsfs {

namespace {

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

void require_dimension(int n) {
    if (n < 3) throw DomainError("n >= 3 required (got n = " + std::to_string(n) + ")");
}

// 1 / (2 n omega_n), cached per dimension.
double velocity_prefactor(int n) {
    thread_local int cached_n = -1;
    thread_local double cached = 0.0;
    if (n != cached_n) {
        cached = 1.0 / (2.0 * n * unit_ball_volume(n));
        cached_n = n;
    }
    return cached;
}

}  // namespace

double unit_ball_volume(int n) {
    if (n < 1) throw DomainError("unit_ball_volume: n >= 1 required");
    const double half = 0.5 * n;
    return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double stokeslet_u(std::span<const double> x, int i, int j) {
    const int n = static_cast<int>(x.size());
    const double r2 = norm2(x);
    const double r = std::sqrt(r2);
    const double rn = std::pow(r, n);
    double value = x[i] * x[j] / rn;
    if (i == j) value += r2 / ((n - 2) * rn);
    return velocity_prefactor(n) * value;
}

double stokeslet_p(std::span<const double> x, int j) {
    const int n = static_cast<int>(x.size());
    const double rn = std::pow(std::sqrt(norm2(x)), n);
    return 2.0 * velocity_prefactor(n) * x[j] / rn;
}

double stokeslet_grad(std::span<const double> x, int i, int j, int k) {
    const int n = static_cast<int>(x.size());
    const double r2 = norm2(x);
    const double rn = std::pow(std::sqrt(r2), n);
    double value = -n * x[i] * x[j] * x[k] / r2;
    if (i == j) value -= x[k];
    if (i == k) value += x[j];
    if (j == k) value += x[i];
    return velocity_prefactor(n) * value / rn;
}

KernelMatrix eval_kernel(std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    require_dimension(n);
    const double r2 = norm2(x);
    if (r2 == 0.0) throw DomainError("eval_kernel: x = 0 is the kernel singularity");

    const double c = velocity_prefactor(n);
    const double r = std::sqrt(r2);
    const double rn = std::pow(r, n);

    KernelMatrix k;
    k.n = n;
    k.u_tensor.assign(static_cast<std::size_t>(n * n), 0.0);
    k.p_vector.assign(static_cast<std::size_t>(n), 0.0);
    k.grad_tensor.assign(static_cast<std::size_t>(n * n * n), 0.0);

    const double diag = r2 / ((n - 2) * rn);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double v = x[i] * x[j] / rn;
            if (i == j) v += diag;
            k.u_tensor[i * n + j] = c * v;
            for (int m = 0; m < n; ++m) {
                double g = -n * x[i] * x[j] * x[m] / r2;
                if (i == j) g -= x[m];
                if (i == m) g += x[j];
                if (j == m) g += x[i];
                k.grad_tensor[(i * n + j) * n + m] = c * g / rn;
            }
        }
        k.p_vector[i] = 2.0 * c * x[i] / rn;
    }
    return k;
}

StokesSymbol stokes_symbol(std::span<const double> xi) {
    const int n = static_cast<int>(xi.size());
    const double k2 = norm2(xi);
    if (k2 == 0.0) throw DomainError("stokes_symbol: zero frequency has no symbol");
    StokesSymbol s;
    s.n = n;
    s.velocity.assign(static_cast<std::size_t>(n * n), 0.0);
    s.pressure_imag.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double proj = (i == j ? 1.0 : 0.0) - xi[i] * xi[j] / k2;
            s.velocity[i * n + j] = proj / k2;
        }
        s.pressure_imag[i] = -xi[i] / k2;
    }
    return s;
}

namespace {

void require_clearance(std::span<const double> x, double h) {
    require_dimension(static_cast<int>(x.size()));
    if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
    if (std::sqrt(norm2(x)) <= 4.0 * h)
        throw DomainError("finite-difference point too close to the singularity (|x| <= 4h)");
}

}  // namespace

std::vector<double> kernel_pde_residual(std::span<const double> x, double h) {
    require_clearance(x, h);
    const int n = static_cast<int>(x.size());
    std::vector<double> xp(x.begin(), x.end());
    std::vector<double> xm(x.begin(), x.end());
    std::vector<double> res(static_cast<std::size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double centre = stokeslet_u(x, i, j);
            double lap = 0.0;
            for (int k = 0; k < n; ++k) {
                xp[k] = x[k] + h;
                xm[k] = x[k] - h;
                lap += stokeslet_u(xp, i, j) - 2.0 * centre + stokeslet_u(xm, i, j);
                xp[k] = x[k];
                xm[k] = x[k];
            }
            lap /= h * h;
            xp[i] = x[i] + h;
            xm[i] = x[i] - h;
            const double dp = (stokeslet_p(xp, j) - stokeslet_p(xm, j)) / (2.0 * h);
            xp[i] = x[i];
            xm[i] = x[i];
            res[i * n + j] = -lap + dp;
        }
    }
    return res;
}

std::vector<double> kernel_fd_gradient(std::span<const double> x, double h) {
    require_clearance(x, h);
    const int n = static_cast<int>(x.size());
    std::vector<double> xp(x.begin(), x.end());
    std::vector<double> xm(x.begin(), x.end());
    std::vector<double> g(static_cast<std::size_t>(n * n * n), 0.0);
    for (int k = 0; k < n; ++k) {
        xp[k] = x[k] + h;
        xm[k] = x[k] - h;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                g[(i * n + j) * n + k] = (stokeslet_u(xp, i, j) - stokeslet_u(xm, i, j)) / (2.0 * h);
        xp[k] = x[k];
        xm[k] = x[k];
    }
    return g;
}

std::vector<double> kernel_fd_divergence(std::span<const double> x, double h) {
    const auto g = kernel_fd_gradient(x, h);
    const int n = static_cast<int>(x.size());
    std::vector<double> div(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) div[j] += g[(i * n + j) * n + i];
    return div;
}

}  // namespace nsfs
