#include "nsfs/field.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "nsfs/error.hpp"

namespace nsfs {

namespace {
constexpr std::size_t kMaxGridPoints = std::size_t{1} << 36;
}

GridSpec::GridSpec(int dim, std::int64_t points_per_axis, double half_width)
    : dim_(dim), n_(points_per_axis), l_(half_width) {
    if (dim < 3 || dim > kMaxDim)
        throw DomainError("grid dimension must be in [3, " + std::to_string(kMaxDim) + "], got " +
                          std::to_string(dim));
    if (points_per_axis < 2 || points_per_axis % 2 != 0)
        throw DomainError("points per axis must be even and >= 2, got " + std::to_string(points_per_axis));
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw DomainError("half width must be positive and finite");

    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) {
        if (total > kMaxGridPoints / static_cast<std::size_t>(points_per_axis))
            throw DomainError("grid has too many points: " + std::to_string(points_per_axis) + "^" +
                              std::to_string(dim));
        total *= static_cast<std::size_t>(points_per_axis);
    }
    size_ = total;
    std::size_t s = 1;
    for (int a = dim - 1; a >= 0; --a) {
        strides_[static_cast<std::size_t>(a)] = s;
        s *= static_cast<std::size_t>(points_per_axis);
    }
}

double GridSpec::cell_volume() const { return std::pow(spacing(), dim_); }

std::int64_t GridSpec::nearest_index(double x) const {
    const auto k = static_cast<std::int64_t>(std::floor((x + l_) / spacing()));
    return k < 0 ? 0 : (k >= n_ ? n_ - 1 : k);
}

void GridSpec::unflatten(std::size_t flat, std::span<std::int64_t> idx) const {
    for (int a = dim_ - 1; a >= 0; --a) {
        idx[static_cast<std::size_t>(a)] = static_cast<std::int64_t>(flat % static_cast<std::size_t>(n_));
        flat /= static_cast<std::size_t>(n_);
    }
}

std::size_t GridSpec::flatten(std::span<const std::int64_t> idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim_; ++a) flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[a]);
    return flat;
}

void GridSpec::point(std::size_t flat, std::span<double> x) const {
    const double h = spacing();
    for (int a = dim_ - 1; a >= 0; --a) {
        const auto k = static_cast<double>(flat % static_cast<std::size_t>(n_));
        x[static_cast<std::size_t>(a)] = (k + 0.5) * h - l_;
        flat /= static_cast<std::size_t>(n_);
    }
}

double GridSpec::radius(std::size_t flat) const {
    const double h = spacing();
    double r2 = 0.0;
    for (int a = 0; a < dim_; ++a) {
        const auto k = static_cast<double>(flat % static_cast<std::size_t>(n_));
        const double x = (k + 0.5) * h - l_;
        r2 += x * x;
        flat /= static_cast<std::size_t>(n_);
    }
    return std::sqrt(r2);
}

std::string describe(const GridSpec& g) {
    std::ostringstream os;
    os << "n=" << g.dim() << " N=" << g.points_per_axis() << " L=" << g.half_width();
    return os.str();
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (a != b)
        throw GridMismatch(std::string(what) + ": grid mismatch (" + describe(a) + " vs " + describe(b) + ")");
}

ScalarField sample_scalar(const GridSpec& g, const ScalarFunction& fn) {
    ScalarField s(g);
    for_each_index(g.size(), Exec::parallel, [&](std::size_t i) {
        std::array<double, kMaxDim> x{};
        g.point(i, std::span<double>(x.data(), static_cast<std::size_t>(g.dim())));
        s[i] = fn(std::span<const double>(x.data(), static_cast<std::size_t>(g.dim())));
    });
    return s;
}

VectorField sample_vector(const GridSpec& g, const VectorFunction& fn) {
    VectorField v(g);
    const int n = g.dim();
    for_each_index(g.size(), Exec::parallel, [&](std::size_t i) {
        std::array<double, kMaxDim> x{};
        std::array<double, kMaxDim> out{};
        g.point(i, std::span<double>(x.data(), static_cast<std::size_t>(n)));
        fn(std::span<const double>(x.data(), static_cast<std::size_t>(n)),
           std::span<double>(out.data(), static_cast<std::size_t>(n)));
        for (int c = 0; c < n; ++c) v[c][i] = out[static_cast<std::size_t>(c)];
    });
    return v;
}

ScalarField magnitude(const VectorField& v) {
    ScalarField m(v.grid);
    for_each_index(v.grid.size(), Exec::parallel, [&](std::size_t i) {
        double s = 0.0;
        for (const auto& c : v.components) s += c[i] * c[i];
        m[i] = std::sqrt(s);
    });
    return m;
}

ScalarField magnitude(const GradientField& g) {
    ScalarField m(g.grid);
    for_each_index(g.grid.size(), Exec::parallel, [&](std::size_t i) {
        double s = 0.0;
        for (const auto& c : g.entries) s += c[i] * c[i];
        m[i] = std::sqrt(s);
    });
    return m;
}

VectorField axpby(double a, const VectorField& x, double b, const VectorField& y) {
    require_same_grid(x.grid, y.grid, "axpby");
    VectorField out(x.grid);
    for (int c = 0; c < x.dim(); ++c) {
        const auto& xs = x[c].data;
        const auto& ys = y[c].data;
        auto& os = out[c].data;
        for_each_index(xs.size(), Exec::parallel, [&](std::size_t i) { os[i] = a * xs[i] + b * ys[i]; });
    }
    return out;
}

VectorField scaled(const VectorField& v, double s) {
    VectorField out(v.grid);
    for (int c = 0; c < v.dim(); ++c)
        for (std::size_t i = 0; i < v.grid.size(); ++i) out[c][i] = s * v[c][i];
    return out;
}

VectorField flatten(const GradientField& g) {
    VectorField out;
    out.grid = g.grid;
    out.components = g.entries;
    return out;
}

}  // namespace nsfs
