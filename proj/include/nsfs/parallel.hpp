#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nsfs {

/// Selects between the OpenMP kernels and the serial reference loops.
/// Both paths use the same fixed chunking for reductions, so results are
/// bitwise identical regardless of the policy or the thread count.
enum class Exec { parallel, serial };

/// Applies the NS_THREADS environment variable (0 or unset = OpenMP default).
/// Returns the thread count that will be used by parallel kernels.
int configure_threads_from_env();

int max_threads();

/// Reduction chunk length. Partial sums are formed per chunk and combined in
/// chunk order, which keeps the summation order independent of scheduling.
inline constexpr std::size_t kReduceChunk = 4096;

/// Deterministic sum of body(i) for i in [0, count).
template <class Body>
double chunked_sum(std::size_t count, Exec exec, Body&& body) {
    const std::size_t nchunks = (count + kReduceChunk - 1) / kReduceChunk;
    std::vector<double> partial(nchunks, 0.0);
    const auto chunk = [&](std::int64_t c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kReduceChunk;
        const std::size_t end = begin + kReduceChunk < count ? begin + kReduceChunk : count;
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) acc += body(i);
        partial[static_cast<std::size_t>(c)] = acc;
    };
    const auto n = static_cast<std::int64_t>(nchunks);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < n; ++c) chunk(c);
    } else {
        for (std::int64_t c = 0; c < n; ++c) chunk(c);
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

/// Deterministic max of body(i) for i in [0, count); returns `init` when empty.
template <class Body>
double chunked_max(std::size_t count, Exec exec, double init, Body&& body) {
    const std::size_t nchunks = (count + kReduceChunk - 1) / kReduceChunk;
    std::vector<double> partial(nchunks, init);
    const auto chunk = [&](std::int64_t c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kReduceChunk;
        const std::size_t end = begin + kReduceChunk < count ? begin + kReduceChunk : count;
        double acc = init;
        for (std::size_t i = begin; i < end; ++i) {
            const double v = body(i);
            if (v > acc) acc = v;
        }
        partial[static_cast<std::size_t>(c)] = acc;
    };
    const auto n = static_cast<std::int64_t>(nchunks);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < n; ++c) chunk(c);
    } else {
        for (std::int64_t c = 0; c < n; ++c) chunk(c);
    }
    double total = init;
    for (double p : partial)
        if (p > total) total = p;
    return total;
}

/// Runs body(i) for i in [0, count) under the given policy.
template <class Body>
void for_each_index(std::size_t count, Exec exec, Body&& body) {
    const auto n = static_cast<std::int64_t>(count);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
    } else {
        for (std::int64_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
    }
}

}  // namespace nsfs
