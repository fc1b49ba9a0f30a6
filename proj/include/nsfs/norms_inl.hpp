#pragma once

#include <array>
#include <cmath>

namespace nsfs {

template <class Fn>
void for_each_in_ball(const GridSpec& g, std::span<const double> center, double r, Fn&& fn) {
    const int n = g.dim();
    const double h = g.spacing();
    const double l = g.half_width();
    const std::int64_t npts = g.points_per_axis();
    std::array<std::int64_t, kMaxDim> lo{};
    std::array<std::int64_t, kMaxDim> hi{};
    for (int a = 0; a < n; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        auto first = static_cast<std::int64_t>(std::ceil((center[ua] - r + l) / h - 0.5));
        auto last = static_cast<std::int64_t>(std::floor((center[ua] + r + l) / h - 0.5));
        lo[ua] = first < 0 ? 0 : first;
        hi[ua] = last >= npts ? npts - 1 : last;
        if (lo[ua] > hi[ua]) return;
    }
    const double r2 = r * r;
    std::array<std::int64_t, kMaxDim> idx = lo;
    while (true) {
        double d2 = 0.0;
        std::size_t flat = 0;
        for (int a = 0; a < n; ++a) {
            const auto ua = static_cast<std::size_t>(a);
            const double d = g.coordinate(idx[ua]) - center[ua];
            d2 += d * d;
            flat = flat * static_cast<std::size_t>(npts) + static_cast<std::size_t>(idx[ua]);
        }
        if (d2 <= r2) fn(flat, d2);
        int a = n - 1;
        for (; a >= 0; --a) {
            const auto ua = static_cast<std::size_t>(a);
            if (++idx[ua] <= hi[ua]) break;
            idx[ua] = lo[ua];
        }
        if (a < 0) break;
    }
}

}  // namespace nsfs
