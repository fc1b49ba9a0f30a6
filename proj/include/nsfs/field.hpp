#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nsfs/parallel.hpp"

namespace nsfs {

/// Largest supported dimension.
inline constexpr int kMaxDim = 7;

/// Cell-centred regular grid over [-L, L)^n with N points per axis.
///
/// Point k along an axis sits at (k + 1/2) h - L, h = 2L/N. Flat indices are
/// row-major with axis 0 slowest.
class GridSpec {
public:
    GridSpec() = default;
    GridSpec(int dim, std::int64_t points_per_axis, double half_width);

    int dim() const { return dim_; }
    std::int64_t points_per_axis() const { return n_; }
    double half_width() const { return l_; }
    double spacing() const { return 2.0 * l_ / static_cast<double>(n_); }
    double cell_volume() const;
    std::size_t size() const { return size_; }

    /// Stride of `axis` in the flat layout.
    std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

    double coordinate(std::int64_t k) const { return (static_cast<double>(k) + 0.5) * spacing() - l_; }
    /// Nearest grid index for a coordinate (clamped to [0, N)).
    std::int64_t nearest_index(double x) const;

    void unflatten(std::size_t flat, std::span<std::int64_t> idx) const;
    std::size_t flatten(std::span<const std::int64_t> idx) const;
    void point(std::size_t flat, std::span<double> x) const;
    double radius(std::size_t flat) const;

    bool operator==(const GridSpec& o) const { return dim_ == o.dim_ && n_ == o.n_ && l_ == o.l_; }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }

private:
    int dim_ = 0;
    std::int64_t n_ = 0;
    double l_ = 0.0;
    std::size_t size_ = 0;
    std::array<std::size_t, kMaxDim> strides_{};
};

/// Human-readable shape, e.g. "n=3 N=64 L=8".
std::string describe(const GridSpec& g);

/// Throws GridMismatch naming both shapes when the grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

struct ScalarField {
    GridSpec grid;
    std::vector<double> data;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g) : grid(g), data(g.size(), 0.0) {}

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }
};

struct VectorField {
    GridSpec grid;
    std::vector<ScalarField> components;

    VectorField() = default;
    explicit VectorField(const GridSpec& g)
        : grid(g), components(static_cast<std::size_t>(g.dim()), ScalarField(g)) {}

    int dim() const { return grid.dim(); }
    ScalarField& operator[](int i) { return components[static_cast<std::size_t>(i)]; }
    const ScalarField& operator[](int i) const { return components[static_cast<std::size_t>(i)]; }
};

/// n x n field of partial derivatives; entry (i, k) is d_k v_i.
struct GradientField {
    GridSpec grid;
    std::vector<ScalarField> entries;

    GradientField() = default;
    explicit GradientField(const GridSpec& g)
        : grid(g), entries(static_cast<std::size_t>(g.dim() * g.dim()), ScalarField(g)) {}

    int dim() const { return grid.dim(); }
    ScalarField& operator()(int i, int k) { return entries[static_cast<std::size_t>(i * grid.dim() + k)]; }
    const ScalarField& operator()(int i, int k) const {
        return entries[static_cast<std::size_t>(i * grid.dim() + k)];
    }
};

using ScalarFunction = std::function<double(std::span<const double>)>;
using VectorFunction = std::function<void(std::span<const double>, std::span<double>)>;

ScalarField sample_scalar(const GridSpec& g, const ScalarFunction& fn);
VectorField sample_vector(const GridSpec& g, const VectorFunction& fn);

/// Pointwise Euclidean magnitude.
ScalarField magnitude(const VectorField& v);
/// Pointwise Frobenius magnitude.
ScalarField magnitude(const GradientField& g);

/// a*x + b*y on matching grids.
VectorField axpby(double a, const VectorField& x, double b, const VectorField& y);
VectorField scaled(const VectorField& v, double s);

/// Flattened view of a gradient field as a vector field with n*n components,
/// so the vector norms apply to it directly.
VectorField flatten(const GradientField& g);

}  // namespace nsfs
