#include "nsfs/convolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "nsfs/error.hpp"
#include "nsfs/kernel.hpp"
#include "nsfs/stencil.hpp"

namespace nsfs {

namespace {

enum class Kind { velocity, pressure, gradient };

struct Component {
    Kind kind;
    int i;
    int j;
    int k;
};

int tri_index(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    // rows 0..i-1 hold n, n-1, ... entries
    return i * n - i * (i - 1) / 2 + (j - i);
}

int tri_count(int n) { return n * (n + 1) / 2; }

double pressure_neighbour_weight(int n, double h, int j, std::span<const std::int64_t> d, SingularCellRule rule);

// Kernel value at the displacement d (in cells); the caller applies the cell
// volume. d = 0 uses the singular-cell rule.
double kernel_at(const Component& c, std::span<const std::int64_t> d, double h, SingularCellRule rule,
                 int subsamples) {
    const int n = static_cast<int>(d.size());
    bool origin = true;
    std::array<double, kMaxDim> x{};
    for (int a = 0; a < n; ++a) {
        x[static_cast<std::size_t>(a)] = static_cast<double>(d[static_cast<std::size_t>(a)]) * h;
        origin = origin && d[static_cast<std::size_t>(a)] == 0;
    }
    const std::span<const double> xs(x.data(), static_cast<std::size_t>(n));
    switch (c.kind) {
        case Kind::velocity:
            return origin ? singular_cell_value(n, h, c.i, c.j, rule, subsamples) : stokeslet_u(xs, c.i, c.j);
        case Kind::pressure:
            return origin ? 0.0 : stokeslet_p(xs, c.j) + pressure_neighbour_weight(n, h, c.j, d, rule);
        case Kind::gradient:
            return origin ? 0.0 : stokeslet_grad(xs, c.i, c.j, c.k);
    }
    return 0.0;
}

// Offset of grid row `row` (multi-index over axes 0..n-2) in the padded cube.
std::size_t padded_row_offset(std::size_t row, int n, std::size_t npts, std::size_t m) {
    std::size_t off = 0;
    std::size_t scale = m;
    for (int a = n - 2; a >= 0; --a) {
        off += (row % npts) * scale;
        row /= npts;
        scale *= m;
    }
    return off;
}

void pad_into(const ScalarField& s, RealBuffer& real, std::size_t m, Exec exec) {
    const GridSpec& g = s.grid;
    const int n = g.dim();
    const auto npts = static_cast<std::size_t>(g.points_per_axis());
    real.fill(0.0);
    for_each_index(g.size() / npts, exec, [&](std::size_t row) {
        const std::size_t off = padded_row_offset(row, n, npts, m);
        std::copy_n(s.data.data() + row * npts, npts, real.data() + off);
    });
}

void extract_from(const RealBuffer& real, ScalarField& s, std::size_t m, double scale, Exec exec) {
    const GridSpec& g = s.grid;
    const int n = g.dim();
    const auto npts = static_cast<std::size_t>(g.points_per_axis());
    for_each_index(g.size() / npts, exec, [&](std::size_t row) {
        const std::size_t off = padded_row_offset(row, n, npts, m);
        for (std::size_t q = 0; q < npts; ++q) s[row * npts + q] = scale * real[off + q];
    });
}

// Fills the padded real cube with h^n-weighted kernel samples.
void sample_table(const Component& c, const GridSpec& g, std::size_t m, SingularCellRule rule, int subsamples,
                  RealBuffer& real, Exec exec) {
    const int n = g.dim();
    const auto npts = g.points_per_axis();
    const double h = g.spacing();
    const double dv = g.cell_volume();
    for_each_index(real.size(), exec, [&](std::size_t flat) {
        std::array<std::int64_t, kMaxDim> d{};
        std::size_t rest = flat;
        bool unused = false;
        for (int a = n - 1; a >= 0; --a) {
            const auto idx = static_cast<std::int64_t>(rest % m);
            rest /= m;
            d[static_cast<std::size_t>(a)] = idx < npts ? idx : idx - static_cast<std::int64_t>(m);
            unused = unused || idx == npts;
        }
        real[flat] = unused ? 0.0
                            : dv * kernel_at(c, std::span<const std::int64_t>(d.data(), static_cast<std::size_t>(n)),
                                             h, rule, subsamples);
    });
}

}  // namespace

const char* to_string(SingularCellRule rule) {
    return rule == SingularCellRule::lattice_zeta ? "lattice-zeta" : "cell-average";
}

namespace {

// Upper incomplete gamma Gamma(a, x) for a in {1/2, 1, 3/2, 2, ...}, by
// upward recurrence from erfc (half-integers) or exp (integers).
double upper_gamma_half_integer(double a, double x) {
    const double twice = 2.0 * a;
    if (std::abs(twice - std::round(twice)) > 1e-12 || a < 0.5)
        throw DomainError("upper_gamma_half_integer: a must be a positive multiple of 1/2");
    double cur = 0.0;
    double b = 0.0;
    if (static_cast<long>(std::round(twice)) % 2 == 1) {
        cur = std::sqrt(std::numbers::pi) * std::erfc(std::sqrt(x));
        b = 0.5;
    } else {
        cur = std::exp(-x);
        b = 1.0;
    }
    while (b < a - 1e-12) {
        cur = b * cur + std::pow(x, b) * std::exp(-x);
        b += 1.0;
    }
    return cur;
}

}  // namespace

double lattice_zeta(int n, double s) {
    if (n < 1 || !(s > 0.0) || !(s < n))
        throw DomainError("lattice_zeta: need 0 < s < n");
    // Terms decay like exp(-pi |d|^2); |d|^2 <= 16 leaves < 1e-20.
    constexpr int kRadius = 4;
    const double a1 = 0.5 * s;
    const double a2 = 0.5 * (n - s);
    double sum = 0.0;
    std::array<int, kMaxDim> d{};
    for (int a = 0; a < n; ++a) d[static_cast<std::size_t>(a)] = -kRadius;
    while (true) {
        int q = 0;
        for (int a = 0; a < n; ++a) q += d[static_cast<std::size_t>(a)] * d[static_cast<std::size_t>(a)];
        if (q != 0 && q <= kRadius * kRadius) {
            const double x = std::numbers::pi * q;
            sum += upper_gamma_half_integer(a1, x) / std::pow(x, a1) + upper_gamma_half_integer(a2, x) / std::pow(x, a2);
        }
        int a = n - 1;
        for (; a >= 0; --a) {
            if (++d[static_cast<std::size_t>(a)] <= kRadius) break;
            d[static_cast<std::size_t>(a)] = -kRadius;
        }
        if (a < 0) break;
    }
    return std::pow(std::numbers::pi, a1) / std::tgamma(a1) * (sum - 1.0 / a2 - 1.0 / a1);
}

double singular_cell_value(int n, double h, int i, int j, SingularCellRule rule, int subsamples) {
    if (rule == SingularCellRule::cell_average) return singular_cell_average(n, h, i, j, subsamples);
    if (i != j) return 0.0;
    // U_ii at the origin: minus the zeta-regularized lattice sum of
    // c [1/((n-2)|d|^{n-2}) + d_i^2/|d|^n], using sum d_i^2/|d|^n = Z(n-2)/n.
    thread_local int cached_n = -1;
    thread_local double cached = 0.0;
    if (n != cached_n) {
        const double c = 1.0 / (2.0 * n * unit_ball_volume(n));
        cached = -c * (1.0 / (n - 2) + 1.0 / n) * lattice_zeta(n, n - 2.0);
        cached_n = n;
    }
    return cached * std::pow(h, 2 - n);
}

namespace {

// The punctured lattice sum of the odd kernel P leaves an error
// -h^2 Z(n-2) / (n^2 omega_n) div g. Adding the central difference of that
// term to the weights at d = -e_j (+) and d = +e_j (-) removes it.
double pressure_neighbour_weight(int n, double h, int j, std::span<const std::int64_t> d, SingularCellRule rule) {
    if (rule != SingularCellRule::lattice_zeta) return 0.0;
    int nonzero = 0;
    for (int a = 0; a < n; ++a) nonzero += d[static_cast<std::size_t>(a)] != 0 ? 1 : 0;
    const std::int64_t dj = d[static_cast<std::size_t>(j)];
    if (nonzero != 1 || (dj != 1 && dj != -1)) return 0.0;
    thread_local int cached_n = -1;
    thread_local double cached = 0.0;
    if (n != cached_n) {
        cached = lattice_zeta(n, n - 2.0) / (2.0 * n * n * unit_ball_volume(n));
        cached_n = n;
    }
    return -static_cast<double>(dj) * cached * std::pow(h, 1 - n);
}

}  // namespace

double singular_cell_average(int n, double h, int i, int j, int subsamples) {
    if (subsamples < 1) throw DomainError("singular-cell subsamples must be >= 1");
    const int m = subsamples;
    std::array<int, kMaxDim> s{};
    std::array<double, kMaxDim> x{};
    double sum = 0.0;
    std::size_t count = 0;
    while (true) {
        bool centre = true;
        for (int a = 0; a < n; ++a) {
            const double off = (s[static_cast<std::size_t>(a)] - 0.5 * (m - 1)) * (h / m);
            x[static_cast<std::size_t>(a)] = off;
            centre = centre && off == 0.0;
        }
        if (!centre) {
            sum += stokeslet_u(std::span<const double>(x.data(), static_cast<std::size_t>(n)), i, j);
            ++count;
        }
        int a = n - 1;
        for (; a >= 0; --a) {
            if (++s[static_cast<std::size_t>(a)] < m) break;
            s[static_cast<std::size_t>(a)] = 0;
        }
        if (a < 0) break;
    }
    return count ? sum / static_cast<double>(count) : 0.0;
}

std::size_t ConvolutionPlan::table_count() const {
    return u_tables_.size() + p_tables_.size() + grad_tables_.size();
}

std::size_t ConvolutionPlan::table_bytes() const { return table_count() * fft_.spectral_size() * sizeof(double); }

std::size_t ConvolutionPlan::scratch_bytes() const {
    const auto n = static_cast<std::size_t>(grid_.dim());
    return (n + 1) * fft_.spectral_size() * sizeof(std::complex<double>) + fft_.real_size() * sizeof(double);
}

std::span<const double> ConvolutionPlan::velocity_table(int i, int j) const {
    return u_tables_[static_cast<std::size_t>(tri_index(grid_.dim(), i, j))];
}

std::span<const double> ConvolutionPlan::pressure_table(int j) const { return p_tables_[static_cast<std::size_t>(j)]; }

std::span<const double> ConvolutionPlan::gradient_table(int i, int j, int k) const {
    if (grad_tables_.empty()) throw Error("convolution plan was built without gradient tables");
    const int n = grid_.dim();
    return grad_tables_[static_cast<std::size_t>(k * tri_count(n) + tri_index(n, i, j))];
}

std::size_t plan_required_bytes(const GridSpec& g, bool gradient_tables) {
    const auto n = static_cast<std::size_t>(g.dim());
    const auto m = static_cast<std::size_t>(2 * g.points_per_axis());
    std::size_t lines = 1;
    for (std::size_t a = 0; a + 1 < n; ++a) lines *= m;
    const std::size_t spectral = lines * (m / 2 + 1);
    const std::size_t real = lines * m;
    std::size_t tables = n * (n + 1) / 2 + n;
    if (gradient_tables) tables += n * n * (n + 1) / 2;
    const std::size_t table_bytes = tables * spectral * sizeof(double);
    const std::size_t scratch = (n + 1) * spectral * sizeof(std::complex<double>) + real * sizeof(double);
    return table_bytes + scratch;
}

ConvolutionPlan build_plan(const GridSpec& g, const PlanOptions& opts) {
    bool with_grad = opts.gradient_tables;
    if (with_grad && opts.gradient_tables_if_fit && plan_required_bytes(g, true) > opts.memory_budget_bytes)
        with_grad = false;
    const std::size_t required = plan_required_bytes(g, with_grad);
    if (required > opts.memory_budget_bytes) throw MemoryBudgetExceeded(required, opts.memory_budget_bytes);

    const int n = g.dim();
    const auto m = static_cast<std::size_t>(2 * g.points_per_axis());
    ConvolutionPlan plan(g, AxisFFT(n, m));
    plan.rule_ = opts.singular_rule;
    plan.subsamples_ = opts.singular_subsamples;

    std::vector<Component> comps;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) comps.push_back({Kind::velocity, i, j, 0});
    for (int j = 0; j < n; ++j) comps.push_back({Kind::pressure, 0, j, 0});
    if (with_grad)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) comps.push_back({Kind::gradient, i, j, k});

    const AxisFFT& fft = plan.fft_;
    RealBuffer real(fft.real_size());
    ComplexBuffer spec(fft.spectral_size());
    for (const auto& c : comps) {
        sample_table(c, g, m, opts.singular_rule, opts.singular_subsamples, real, Exec::parallel);
        fft.forward(real.data(), spec.data(), Exec::parallel);
        std::vector<double> table(fft.spectral_size());
        double kept = 0.0;
        double dropped = 0.0;
        const bool even = c.kind == Kind::velocity;
        for (std::size_t q = 0; q < table.size(); ++q) {
            const double keep = even ? spec[q].real() : spec[q].imag();
            const double drop = even ? spec[q].imag() : spec[q].real();
            table[q] = keep;
            kept = std::max(kept, std::abs(keep));
            dropped = std::max(dropped, std::abs(drop));
        }
        if (kept > 0.0) plan.parity_defect_ = std::max(plan.parity_defect_, dropped / kept);
        switch (c.kind) {
            case Kind::velocity: plan.u_tables_.push_back(std::move(table)); break;
            case Kind::pressure: plan.p_tables_.push_back(std::move(table)); break;
            case Kind::gradient: plan.grad_tables_.push_back(std::move(table)); break;
        }
    }
    return plan;
}

namespace {

std::vector<ComplexBuffer> transform_sources(const ConvolutionPlan& plan, const VectorField& g, Exec exec) {
    require_same_grid(plan.grid(), g.grid, "convolution source");
    const AxisFFT& fft = plan.fft();
    RealBuffer real(fft.real_size());
    std::vector<ComplexBuffer> spectra;
    spectra.reserve(static_cast<std::size_t>(g.dim()));
    for (int j = 0; j < g.dim(); ++j) {
        pad_into(g[j], real, plan.padded_n(), exec);
        spectra.emplace_back(fft.spectral_size());
        fft.forward(real.data(), spectra.back().data(), exec);
    }
    return spectra;
}

// out = inverse( sum_j table_j * src_j ), with table_j real (even kernels)
// or the imaginary part of a purely imaginary symbol (odd kernels).
template <class TableOf>
void convolve_component(const ConvolutionPlan& plan, const std::vector<ComplexBuffer>& src, bool odd,
                        TableOf&& table_of, ComplexBuffer& acc, RealBuffer& real, ScalarField& out, Exec exec) {
    const AxisFFT& fft = plan.fft();
    const int n = plan.grid().dim();
    std::vector<std::span<const double>> tables;
    for (int j = 0; j < n; ++j) tables.push_back(table_of(j));
    for_each_index(fft.spectral_size(), exec, [&](std::size_t q) {
        std::complex<double> s = 0.0;
        for (int j = 0; j < n; ++j) s += tables[static_cast<std::size_t>(j)][q] * src[static_cast<std::size_t>(j)][q];
        acc[q] = odd ? std::complex<double>(-s.imag(), s.real()) : s;
    });
    fft.inverse(acc.data(), real.data(), exec);
    const double scale = 1.0 / static_cast<double>(fft.real_size());
    extract_from(real, out, plan.padded_n(), scale, exec);
}

}  // namespace

StokesFields stokes_solve(const ConvolutionPlan& plan, const VectorField& g, Exec exec) {
    const auto src = transform_sources(plan, g, exec);
    const AxisFFT& fft = plan.fft();
    ComplexBuffer acc(fft.spectral_size());
    RealBuffer real(fft.real_size());
    StokesFields out{VectorField(g.grid), ScalarField(g.grid)};
    for (int i = 0; i < g.dim(); ++i)
        convolve_component(plan, src, false, [&](int j) { return plan.velocity_table(i, j); }, acc, real, out.u[i],
                           exec);
    convolve_component(plan, src, true, [&](int j) { return plan.pressure_table(j); }, acc, real, out.p, exec);
    return out;
}

GradientField velocity_gradient(const ConvolutionPlan& plan, const VectorField& g, Exec exec) {
    if (!plan.has_gradient_tables()) throw Error("velocity_gradient: plan has no gradient tables");
    const auto src = transform_sources(plan, g, exec);
    const AxisFFT& fft = plan.fft();
    ComplexBuffer acc(fft.spectral_size());
    RealBuffer real(fft.real_size());
    GradientField out(g.grid);
    for (int i = 0; i < g.dim(); ++i)
        for (int k = 0; k < g.dim(); ++k)
            convolve_component(plan, src, true, [&](int j) { return plan.gradient_table(i, j, k); }, acc, real,
                               out(i, k), exec);
    return out;
}

std::vector<double> direct_quadrature(const VectorField& g, std::span<const double> x, Quantity which,
                                      SingularCellRule rule, int singular_subsamples) {
    const GridSpec& grid = g.grid;
    const int n = grid.dim();
    if (static_cast<int>(x.size()) != n) throw DomainError("direct_quadrature: point has the wrong dimension");
    const double h = grid.spacing();
    const double l = grid.half_width();
    const double dv = grid.cell_volume();

    // Grid-point detection: displacements become exact multiples of h.
    std::array<std::int64_t, kMaxDim> xi{};
    bool on_grid = true;
    for (int a = 0; a < n; ++a) {
        const double t = (x[static_cast<std::size_t>(a)] + l) / h - 0.5;
        const double r = std::round(t);
        on_grid = on_grid && std::abs(t - r) < 1e-9 && r >= 0 && r < static_cast<double>(grid.points_per_axis());
        xi[static_cast<std::size_t>(a)] = static_cast<std::int64_t>(r);
    }

    const std::size_t outputs =
        which == Quantity::velocity ? static_cast<std::size_t>(n)
                                    : (which == Quantity::pressure ? 1 : static_cast<std::size_t>(n * n));
    std::vector<double> result(outputs, 0.0);
    std::array<std::int64_t, kMaxDim> yi{};
    std::array<std::int64_t, kMaxDim> d{};
    std::array<double, kMaxDim> disp{};
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        double gmax = 0.0;
        for (int j = 0; j < n; ++j) gmax = std::max(gmax, std::abs(g[j][flat]));
        if (gmax == 0.0) continue;
        grid.unflatten(flat, std::span<std::int64_t>(yi.data(), static_cast<std::size_t>(n)));
        bool origin = true;
        for (int a = 0; a < n; ++a) {
            const auto ua = static_cast<std::size_t>(a);
            if (on_grid) {
                d[ua] = xi[ua] - yi[ua];
                disp[ua] = static_cast<double>(d[ua]) * h;
            } else {
                disp[ua] = x[ua] - grid.coordinate(yi[ua]);
            }
            origin = origin && disp[ua] == 0.0;
        }
        const std::span<const double> ds(disp.data(), static_cast<std::size_t>(n));
        const std::span<const std::int64_t> dd(d.data(), static_cast<std::size_t>(n));
        // On the grid the weights are exactly the plan's table entries.
        const auto weight = [&](Kind kind, int i, int j, int k) {
            if (on_grid) return kernel_at(Component{kind, i, j, k}, dd, h, rule, singular_subsamples);
            if (origin) return 0.0;
            switch (kind) {
                case Kind::velocity:
                    return stokeslet_u(ds, i, j);
                case Kind::pressure:
                    return stokeslet_p(ds, j);
                case Kind::gradient:
                    return stokeslet_grad(ds, i, j, k);
            }
            return 0.0;
        };
        for (int j = 0; j < n; ++j) {
            const double gj = g[j][flat] * dv;
            if (gj == 0.0) continue;
            switch (which) {
                case Quantity::velocity:
                    for (int i = 0; i < n; ++i) result[static_cast<std::size_t>(i)] += gj * weight(Kind::velocity, i, j, 0);
                    break;
                case Quantity::pressure:
                    result[0] += gj * weight(Kind::pressure, 0, j, 0);
                    break;
                case Quantity::velocity_gradient:
                    for (int i = 0; i < n; ++i)
                        for (int k = 0; k < n; ++k)
                            result[static_cast<std::size_t>(i * n + k)] += gj * weight(Kind::gradient, i, j, k);
                    break;
            }
        }
    }
    return result;
}

VectorField apply_nonlinearity(const VectorField& u, Exec exec) {
    const GradientField grad = gradient(u, 4, exec);
    VectorField out(u.grid);
    const int n = u.dim();
    for (int j = 0; j < n; ++j) {
        auto& dst = out[j].data;
        for_each_index(dst.size(), exec, [&](std::size_t q) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += u[k][q] * grad(j, k)[q];
            dst[q] = s;
        });
    }
    return out;
}

namespace reference {

StokesFields stokes_solve(const VectorField& g, SingularCellRule rule, int singular_subsamples) {
    const GridSpec& grid = g.grid;
    const int n = grid.dim();
    const auto m = static_cast<std::size_t>(2 * grid.points_per_axis());
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) total *= m;

    using Cube = std::vector<std::complex<double>>;
    const auto to_cube = [&](const ScalarField& s) {
        Cube c(total, 0.0);
        RealBuffer real(total);
        pad_into(s, real, m, Exec::serial);
        for (std::size_t q = 0; q < total; ++q) c[q] = real[q];
        reference::dft_nd(c, n, m, -1);
        return c;
    };
    const auto kernel_cube = [&](const Component& c) {
        RealBuffer real(total);
        sample_table(c, grid, m, rule, singular_subsamples, real, Exec::serial);
        Cube k(total);
        for (std::size_t q = 0; q < total; ++q) k[q] = real[q];
        reference::dft_nd(k, n, m, -1);
        return k;
    };
    const auto back = [&](Cube& c, ScalarField& out) {
        reference::dft_nd(c, n, m, +1);
        RealBuffer real(total);
        for (std::size_t q = 0; q < total; ++q) real[q] = c[q].real();
        extract_from(real, out, m, 1.0 / static_cast<double>(total), Exec::serial);
    };

    std::vector<Cube> src;
    for (int j = 0; j < n; ++j) src.push_back(to_cube(g[j]));

    StokesFields out{VectorField(grid), ScalarField(grid)};
    for (int i = 0; i < n; ++i) {
        Cube acc(total, 0.0);
        for (int j = 0; j < n; ++j) {
            const Cube k = kernel_cube({Kind::velocity, std::min(i, j), std::max(i, j), 0});
            for (std::size_t q = 0; q < total; ++q) acc[q] += k[q] * src[static_cast<std::size_t>(j)][q];
        }
        back(acc, out.u[i]);
    }
    Cube acc(total, 0.0);
    for (int j = 0; j < n; ++j) {
        const Cube k = kernel_cube({Kind::pressure, 0, j, 0});
        for (std::size_t q = 0; q < total; ++q) acc[q] += k[q] * src[static_cast<std::size_t>(j)][q];
    }
    back(acc, out.p);
    return out;
}

}  // namespace reference

}  // namespace nsfs
