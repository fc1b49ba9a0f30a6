#include "nsfs/stencil.hpp"

#include <cmath>

#include "stencil_coeffs.hpp"

namespace nsfs {

namespace {

ScalarField apply_axis(const ScalarField& s, int axis, int deriv, int order, Exec exec) {
    const GridSpec& g = s.grid;
    const std::int64_t n = g.points_per_axis();
    detail::check_stencil_args(order, n);
    const auto stride = static_cast<std::ptrdiff_t>(g.stride(axis));
    const double scale = deriv == 1 ? 1.0 / g.spacing() : 1.0 / (g.spacing() * g.spacing());
    ScalarField out(g);
    const double* in = s.data.data();
    double* dst = out.data.data();
    for_each_index(g.size(), exec, [&](std::size_t i) {
        const auto k = static_cast<std::int64_t>((i / static_cast<std::size_t>(stride)) % static_cast<std::size_t>(n));
        const auto& st = detail::select_stencil(deriv, order, k, n);
        dst[i] = scale * detail::apply_stencil(st, in + i, stride);
    });
    return out;
}

}  // namespace

ScalarField derivative(const ScalarField& s, int axis, int order, Exec exec) {
    return apply_axis(s, axis, 1, order, exec);
}

ScalarField second_derivative(const ScalarField& s, int axis, int order, Exec exec) {
    return apply_axis(s, axis, 2, order, exec);
}

GradientField gradient(const VectorField& v, int order, Exec exec) {
    GradientField g(v.grid);
    const int n = v.dim();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) g(i, k) = derivative(v[i], k, order, exec);
    return g;
}

VectorField gradient(const ScalarField& s, int order, Exec exec) {
    VectorField out(s.grid);
    for (int k = 0; k < s.grid.dim(); ++k) out[k] = derivative(s, k, order, exec);
    return out;
}

ScalarField divergence(const VectorField& v, int order, Exec exec) {
    ScalarField out(v.grid);
    for (int k = 0; k < v.dim(); ++k) {
        const ScalarField d = derivative(v[k], k, order, exec);
        for_each_index(out.data.size(), exec, [&](std::size_t i) { out[i] += d[i]; });
    }
    return out;
}

ScalarField laplacian(const ScalarField& s, int order, Exec exec) {
    ScalarField out(s.grid);
    for (int k = 0; k < s.grid.dim(); ++k) {
        const ScalarField d = second_derivative(s, k, order, exec);
        for_each_index(out.data.size(), exec, [&](std::size_t i) { out[i] += d[i]; });
    }
    return out;
}

VectorField laplacian(const VectorField& v, int order, Exec exec) {
    VectorField out(v.grid);
    for (int c = 0; c < v.dim(); ++c) out[c] = laplacian(v[c], order, exec);
    return out;
}

namespace reference {

namespace {

ScalarField axis_lines(const ScalarField& s, int axis, int deriv, int order) {
    const GridSpec& g = s.grid;
    const std::int64_t n = g.points_per_axis();
    detail::check_stencil_args(order, n);
    const std::size_t stride = g.stride(axis);
    const std::size_t block = stride * static_cast<std::size_t>(n);
    const double scale = deriv == 1 ? 1.0 / g.spacing() : 1.0 / (g.spacing() * g.spacing());
    ScalarField out(g);
    // Lines along `axis` start at outer * block + inner.
    for (std::size_t outer = 0; outer < g.size() / block; ++outer) {
        for (std::size_t inner = 0; inner < stride; ++inner) {
            const std::size_t base = outer * block + inner;
            for (std::int64_t k = 0; k < n; ++k) {
                const std::size_t at = base + static_cast<std::size_t>(k) * stride;
                const auto& st = detail::select_stencil(deriv, order, k, n);
                out[at] = scale * detail::apply_stencil(st, s.data.data() + at, static_cast<std::ptrdiff_t>(stride));
            }
        }
    }
    return out;
}

}  // namespace

ScalarField derivative(const ScalarField& s, int axis, int order) { return axis_lines(s, axis, 1, order); }

ScalarField second_derivative(const ScalarField& s, int axis, int order) {
    return axis_lines(s, axis, 2, order);
}

}  // namespace reference

}  // namespace nsfs
