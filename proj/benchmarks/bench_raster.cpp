#include <benchmark/benchmark.h>

#include <random>

#include "barnmap/raster.hpp"

using namespace barnmap;

static void BM_Stitch(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const PatchGrid grid = make_patch_grid(n, n, 256, 64);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<float> value(0.0f, 1.0f);
    std::vector<float> patch(256 * 256);
    for (float& v : patch) v = value(rng);
    for (auto _ : state) {
        Stitcher stitcher(n, n);
        for (const PatchOrigin& origin : grid.origins) stitcher.add(origin, patch, 256);
        benchmark::DoNotOptimize(stitcher.finalize(Geotransform{}));
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Stitch)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_PatchGrid(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(make_patch_grid(8500, 7000, 256, 64));
    }
}
BENCHMARK(BM_PatchGrid);
