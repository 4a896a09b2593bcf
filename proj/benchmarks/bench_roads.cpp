#include <benchmark/benchmark.h>

#include <random>

#include "barnmap/roads.hpp"

using namespace barnmap;

namespace {

RoadNetwork make_network(int edges, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-5000.0, 5000.0);
    RoadNetwork net;
    for (int e = 0; e < edges; ++e) {
        net.edges.push_back({{coord(rng), coord(rng)}, {coord(rng), coord(rng)}});
    }
    net.normalize();
    return net;
}

Ring square_at(double x, double y) {
    return {{x - 10, y - 10}, {x + 10, y - 10}, {x + 10, y + 10}, {x - 10, y + 10}};
}

}  // namespace

static void BM_BuildRoadIndex(benchmark::State& state) {
    const RoadNetwork net = make_network(static_cast<int>(state.range(0)), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_road_index(net, 100.0));
    }
}
BENCHMARK(BM_BuildRoadIndex)->Arg(200)->Arg(2000);

static void BM_NearestRoadDistance(benchmark::State& state) {
    const RoadNetwork net = make_network(static_cast<int>(state.range(0)), 11);
    const RoadIndex index = build_road_index(net, 100.0);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> coord(-5000.0, 5000.0);
    std::vector<Ring> polygons;
    for (int i = 0; i < 256; ++i) polygons.push_back(square_at(coord(rng), coord(rng)));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(nearest_road_distance(polygons[i++ & 255], index, net));
    }
}
BENCHMARK(BM_NearestRoadDistance)->Arg(200)->Arg(2000)->Arg(20000);

static void BM_RadiusQuery(benchmark::State& state) {
    const RoadNetwork net = make_network(20000, 17);
    const RoadIndex index = build_road_index(net, 100.0);
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> coord(-5000.0, 5000.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(index.tree.radius_query({coord(rng), coord(rng)}, 200.0));
    }
}
BENCHMARK(BM_RadiusQuery);
