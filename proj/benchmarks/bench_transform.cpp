#include <benchmark/benchmark.h>

#include <random>

#include "specmerge/transform.hpp"

namespace {

specmerge::ImagePlane noise_plane(std::size_t rows, std::size_t cols) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> samples(rows * cols);
    for (double& s : samples) s = dist(rng);
    return specmerge::ImagePlane(rows, cols, std::move(samples));
}

std::vector<specmerge::Complex> noise_signal(std::size_t n) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<specmerge::Complex> out(n);
    for (auto& z : out) z = {dist(rng), dist(rng)};
    return out;
}

void BM_Fft1d(benchmark::State& state) {
    const auto signal = noise_signal(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(specmerge::fft1d(signal));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fft1d)->RangeMultiplier(4)->Range(16, 16384)->Complexity(benchmark::oNLogN);

void BM_Dft1dDirect(benchmark::State& state) {
    const auto signal = noise_signal(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(specmerge::dft1d_direct(signal));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dft1dDirect)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oNSquared);

void BM_Forward2d(benchmark::State& state) {
    const auto size = static_cast<std::size_t>(state.range(0));
    const auto plane = noise_plane(size, size);
    const specmerge::Parallelism parallelism{static_cast<unsigned>(state.range(1))};
    for (auto _ : state) benchmark::DoNotOptimize(specmerge::forward2d(plane, parallelism));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(size * size));
}
BENCHMARK(BM_Forward2d)->ArgsProduct({{64, 256, 512}, {1, 4}})->Unit(benchmark::kMillisecond);

// Non-power-of-two sizes take the direct per-axis fallback.
void BM_Forward2dFallback(benchmark::State& state) {
    const auto size = static_cast<std::size_t>(state.range(0));
    const auto plane = noise_plane(size, size);
    for (auto _ : state) benchmark::DoNotOptimize(specmerge::forward2d(plane));
}
BENCHMARK(BM_Forward2dFallback)->Arg(60)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_RoundTrip(benchmark::State& state) {
    const auto plane = noise_plane(256, 256);
    for (auto _ : state) benchmark::DoNotOptimize(specmerge::inverse2d(specmerge::forward2d(plane)));
}
BENCHMARK(BM_RoundTrip)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
