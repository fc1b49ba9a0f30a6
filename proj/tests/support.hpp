#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <algorithm>
#include <random>
#include <span>
#include <vector>

#include "nsfs/field.hpp"

namespace testing {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed * 0x9E3779B97F4A7C15ull + 17); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

/// Random point with lo <= |x| <= hi.
inline std::vector<double> random_point(std::mt19937_64& g, int n, double lo, double hi) {
    std::normal_distribution<double> normal;
    std::vector<double> x(static_cast<std::size_t>(n));
    double r2 = 0.0;
    for (double& v : x) {
        v = normal(g);
        r2 += v * v;
    }
    const double target = uniform(g, lo, hi) / std::sqrt(r2);
    for (double& v : x) v *= target;
    return x;
}

inline nsfs::ScalarField random_scalar(const nsfs::GridSpec& grid, std::mt19937_64& g) {
    nsfs::ScalarField s(grid);
    for (double& v : s.data) v = uniform(g, -1.0, 1.0);
    return s;
}

inline nsfs::VectorField random_vector(const nsfs::GridSpec& grid, std::mt19937_64& g) {
    nsfs::VectorField v(grid);
    for (auto& c : v.components) c = random_scalar(grid, g);
    return v;
}

inline bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::memcmp(&a[i], &b[i], sizeof(double)) != 0) return false;
    return true;
}

inline bool bitwise_equal(const nsfs::VectorField& a, const nsfs::VectorField& b) {
    if (a.grid != b.grid) return false;
    for (int c = 0; c < a.dim(); ++c)
        if (!bitwise_equal(a[c].data, b[c].data)) return false;
    return true;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

inline double sq(double x) { return x * x; }

inline double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

}  // namespace testing
