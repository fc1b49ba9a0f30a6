#pragma once

#include <cstddef>
#include <cstdint>

#include "nsfs/error.hpp"

namespace nsfs::detail {

// Stencil weights for one point of a line. `first` is the offset of the
// leftmost sample relative to the evaluation point; weights are already
// divided by the common denominator.
struct Stencil {
    int first;
    int count;
    double w[6];
};

// First derivative, order 2: central, then forward/backward 3-point.
inline constexpr Stencil d1o2_central{-1, 3, {-0.5, 0.0, 0.5}};
inline constexpr Stencil d1o2_left{0, 3, {-1.5, 2.0, -0.5}};
inline constexpr Stencil d1o2_right{-2, 3, {0.5, -2.0, 1.5}};

// First derivative, order 4 (denominator 12).
inline constexpr Stencil d1o4_central{-2, 5, {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12}};
inline constexpr Stencil d1o4_left0{0, 5, {-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12}};
inline constexpr Stencil d1o4_left1{-1, 5, {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12}};
inline constexpr Stencil d1o4_right1{-3, 5, {-1.0 / 12, 6.0 / 12, -18.0 / 12, 10.0 / 12, 3.0 / 12}};
inline constexpr Stencil d1o4_right0{-4, 5, {3.0 / 12, -16.0 / 12, 36.0 / 12, -48.0 / 12, 25.0 / 12}};

// Second derivative, order 2.
inline constexpr Stencil d2o2_central{-1, 3, {1.0, -2.0, 1.0}};
inline constexpr Stencil d2o2_left{0, 4, {2.0, -5.0, 4.0, -1.0}};
inline constexpr Stencil d2o2_right{-3, 4, {-1.0, 4.0, -5.0, 2.0}};

// Second derivative, order 4 (denominator 12).
inline constexpr Stencil d2o4_central{-2, 5, {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12}};
inline constexpr Stencil d2o4_left0{0, 6, {45.0 / 12, -154.0 / 12, 214.0 / 12, -156.0 / 12, 61.0 / 12, -10.0 / 12}};
inline constexpr Stencil d2o4_left1{-1, 6, {10.0 / 12, -15.0 / 12, -4.0 / 12, 14.0 / 12, -6.0 / 12, 1.0 / 12}};
inline constexpr Stencil d2o4_right1{-4, 6, {1.0 / 12, -6.0 / 12, 14.0 / 12, -4.0 / 12, -15.0 / 12, 10.0 / 12}};
inline constexpr Stencil d2o4_right0{-5, 6, {-10.0 / 12, 61.0 / 12, -156.0 / 12, 214.0 / 12, -154.0 / 12, 45.0 / 12}};

inline const Stencil& select_stencil(int deriv, int order, std::int64_t k, std::int64_t n) {
    if (deriv == 1 && order == 2) {
        if (k == 0) return d1o2_left;
        if (k == n - 1) return d1o2_right;
        return d1o2_central;
    }
    if (deriv == 1) {
        if (k == 0) return d1o4_left0;
        if (k == 1) return d1o4_left1;
        if (k == n - 2) return d1o4_right1;
        if (k == n - 1) return d1o4_right0;
        return d1o4_central;
    }
    if (order == 2) {
        if (k == 0) return d2o2_left;
        if (k == n - 1) return d2o2_right;
        return d2o2_central;
    }
    if (k == 0) return d2o4_left0;
    if (k == 1) return d2o4_left1;
    if (k == n - 2) return d2o4_right1;
    if (k == n - 1) return d2o4_right0;
    return d2o4_central;
}

inline double apply_stencil(const Stencil& st, const double* centre, std::ptrdiff_t stride) {
    double acc = 0.0;
    for (int m = 0; m < st.count; ++m) acc += st.w[m] * centre[(st.first + m) * stride];
    return acc;
}

inline void check_stencil_args(int order, std::int64_t n) {
    if (order != 2 && order != 4) throw DomainError("stencil order must be 2 or 4");
    if (n < 8) throw DomainError("finite differences need N >= 8");
}

}  // namespace nsfs::detail
