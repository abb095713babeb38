#include <benchmark/benchmark.h>

#include <random>

#include "specmerge/merge.hpp"
#include "specmerge/sparse.hpp"

namespace {

std::vector<specmerge::ImagePlane> noise_planes(std::size_t count, std::size_t size) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> level(0, 255);
    std::vector<specmerge::ImagePlane> planes;
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<double> samples(size * size);
        for (double& s : samples) s = level(rng) / 255.0;
        planes.emplace_back(size, size, std::move(samples));
    }
    return planes;
}

void BM_MergeSpatial(benchmark::State& state) {
    const auto planes = noise_planes(static_cast<std::size_t>(state.range(0)), 256);
    for (auto _ : state) benchmark::DoNotOptimize(specmerge::merge_spatial(planes));
}
BENCHMARK(BM_MergeSpatial)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_MergeSpectral(benchmark::State& state) {
    const auto planes = noise_planes(static_cast<std::size_t>(state.range(0)), 256);
    const specmerge::MergeConfig config{.threshold_fraction = 0.01};
    for (auto _ : state) benchmark::DoNotOptimize(specmerge::merge_spectral(planes, config));
}
BENCHMARK(BM_MergeSpectral)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_ThresholdForRatio(benchmark::State& state) {
    const auto spectrum = specmerge::integrate_spectra(noise_planes(2, 256), {});
    for (auto _ : state) benchmark::DoNotOptimize(specmerge::threshold_for_ratio(spectrum, 8.0));
}
BENCHMARK(BM_ThresholdForRatio)->Unit(benchmark::kMillisecond);

void BM_EncodeDecodeFmg(benchmark::State& state) {
    const auto merge = specmerge::merge_spectral_to_ratio(noise_planes(2, 256), {}, 8.0);
    for (auto _ : state) {
        const auto bytes = specmerge::encode_fmg(merge.sparse);
        benchmark::DoNotOptimize(specmerge::decode_fmg(bytes));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(merge.sparse.entries.size()));
}
BENCHMARK(BM_EncodeDecodeFmg);

}  // namespace
