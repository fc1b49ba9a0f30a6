// OpenMP kernels against their serial counterparts.
//   ./nsfs_bench --benchmark_filter=Convolve
// Thread count follows NS_THREADS (or OMP_NUM_THREADS).

#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "nsfs/convolve.hpp"
#include "nsfs/parallel.hpp"
#include "nsfs/stencil.hpp"

using namespace nsfs;

namespace {

VectorField bump(const GridSpec& g) {
    return sample_vector(g, [](auto x, auto out) {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        for (std::size_t a = 0; a < x.size(); ++a) out[a] = std::exp(-r2) * (1.0 + 0.1 * static_cast<double>(a));
    });
}

const ConvolutionPlan& plan_for(std::int64_t n) {
    static std::int64_t cached_n = 0;
    static std::unique_ptr<ConvolutionPlan> plan;
    if (cached_n != n) {
        PlanOptions opts;
        opts.gradient_tables = false;
        plan.reset();
        plan = std::make_unique<ConvolutionPlan>(build_plan(GridSpec(3, n, 4.0), opts));
        cached_n = n;
    }
    return *plan;
}

void BM_ConvolveParallel(benchmark::State& state) {
    const ConvolutionPlan& plan = plan_for(state.range(0));
    const VectorField f = bump(plan.grid());
    for (auto _ : state) benchmark::DoNotOptimize(stokes_solve(plan, f, Exec::parallel));
}

void BM_ConvolveSerial(benchmark::State& state) {
    const ConvolutionPlan& plan = plan_for(state.range(0));
    const VectorField f = bump(plan.grid());
    for (auto _ : state) benchmark::DoNotOptimize(stokes_solve(plan, f, Exec::serial));
}

// Full complex transform on the in-house DFT; small grids only.
void BM_ConvolveReference(benchmark::State& state) {
    const VectorField f = bump(GridSpec(3, state.range(0), 4.0));
    for (auto _ : state) benchmark::DoNotOptimize(reference::stokes_solve(f));
}

void BM_StencilParallel(benchmark::State& state) {
    const VectorField f = bump(GridSpec(3, state.range(0), 4.0));
    for (auto _ : state) benchmark::DoNotOptimize(derivative(f[0], 1, 4, Exec::parallel));
}

void BM_StencilSerial(benchmark::State& state) {
    const VectorField f = bump(GridSpec(3, state.range(0), 4.0));
    for (auto _ : state) benchmark::DoNotOptimize(derivative(f[0], 1, 4, Exec::serial));
}

void BM_StencilReference(benchmark::State& state) {
    const VectorField f = bump(GridSpec(3, state.range(0), 4.0));
    for (auto _ : state) benchmark::DoNotOptimize(reference::derivative(f[0], 1, 4));
}

}  // namespace

BENCHMARK(BM_ConvolveParallel)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveSerial)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveReference)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StencilParallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StencilSerial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StencilReference)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
    nsfs::configure_threads_from_env();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
