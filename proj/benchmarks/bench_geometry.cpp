#include <benchmark/benchmark.h>

#include <random>

#include "barnmap/geometry.hpp"
#include "barnmap/objects.hpp"
#include "barnmap/raster.hpp"

using namespace barnmap;

namespace {

Ring random_ring(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> radius(5.0, 60.0);
    Ring ring;
    for (int i = 0; i < n; ++i) {
        const double angle = 2.0 * M_PI * i / n;
        const double r = radius(rng);
        ring.push_back({r * std::cos(angle), r * std::sin(angle)});
    }
    return ring;
}

}  // namespace

static void BM_MinRotatedRect(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::vector<Ring> rings;
    for (int i = 0; i < 256; ++i) rings.push_back(random_ring(rng, static_cast<int>(state.range(0))));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(min_rotated_rect(rings[i++ & 255]));
    }
}
BENCHMARK(BM_MinRotatedRect)->Arg(8)->Arg(30)->Arg(100);

static void BM_ConnectedComponents(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const int n = static_cast<int>(state.range(0));
    RasterTile mask(n, n, 1, Dtype::u8);
    std::bernoulli_distribution bit(0.4);
    for (std::uint8_t& v : mask.u8_data()) v = bit(rng) ? 1 : 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(connected_components(mask));
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_ConnectedComponents)->Arg(128)->Arg(512);

static void BM_TracePolygon(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const int n = 256;
    RasterTile mask(n, n, 1, Dtype::u8);
    std::bernoulli_distribution bit(0.45);
    for (std::uint8_t& v : mask.u8_data()) v = bit(rng) ? 1 : 0;
    const auto comps = connected_components(mask);
    Geotransform geo;
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(trace_polygon(comps[i++ % comps.size()], geo));
    }
}
BENCHMARK(BM_TracePolygon);
