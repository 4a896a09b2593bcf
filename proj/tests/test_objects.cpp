#include <doctest.h>

#include <random>
#include <set>

#include "barnmap/objects.hpp"
#include "test_support.hpp"

using namespace barnmap;

TEST_CASE("threshold uses the >= convention") {
    RasterTile prob(3, 1, 1, Dtype::f32);
    prob.f32_at(0, 0, 0) = 0.49f;
    prob.f32_at(0, 0, 1) = 0.5f;
    prob.f32_at(0, 0, 2) = 0.51f;
    const RasterTile mask = threshold(prob, 0.5);
    CHECK(mask.u8_at(0, 0, 0) == 0);
    CHECK(mask.u8_at(0, 0, 1) == 1);
    CHECK(mask.u8_at(0, 0, 2) == 1);

    const RasterTile all = threshold(prob, 0.0);
    CHECK(all.u8_at(0, 0, 0) == 1);
    const RasterTile none = threshold(prob, 1.0);
    CHECK(none.u8_at(0, 0, 0) == 0);
    CHECK(none.u8_at(0, 0, 2) == 0);

    CHECK_THROWS_AS(threshold(prob, 1.5), std::invalid_argument);
}

TEST_CASE("connected components basics") {
    SUBCASE("single pixel") {
        const RasterTile mask = testsupport::make_mask(8, 8, {{3, 4}});
        const auto comps = connected_components(mask);
        REQUIRE(comps.size() == 1);
        CHECK(comps[0].pixels.size() == 1);
    }

    SUBCASE("diagonal pixels split under 4-connectivity") {
        const RasterTile mask = testsupport::make_mask(8, 8, {{2, 2}, {3, 3}});
        const auto comps = connected_components(mask);
        CHECK(comps.size() == 2);
    }

    SUBCASE("empty mask gives an empty list") {
        const RasterTile mask(8, 8, 1, Dtype::u8);
        CHECK(connected_components(mask).empty());
    }

    SUBCASE("components are maximal and ordered by first scan pixel") {
        const RasterTile mask = testsupport::make_mask(8, 8, {{0, 5}, {1, 5}, {2, 0}, {2, 1}});
        const auto comps = connected_components(mask);
        REQUIRE(comps.size() == 2);
        CHECK(comps[0].pixels.front() == Pixel{0, 5});
        CHECK(comps[1].pixels.front() == Pixel{2, 0});
    }
}

TEST_CASE("connected components match flood fill on random masks") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const RasterTile mask = testsupport::random_mask(rng, 64, 64, 0.35);
        const auto comps = connected_components(mask);
        const auto oracle = testsupport::flood_fill_partition(mask);
        REQUIRE(comps.size() == oracle.size());
        for (std::size_t i = 0; i < comps.size(); ++i) {
            CHECK(comps[i].pixels == oracle[i]);
        }
    }
}

TEST_CASE("trace polygon produces counter-clockwise rings with exact areas") {
    Geotransform geo;  // 1 m/px at the origin

    SUBCASE("one pixel is a unit square") {
        const RasterTile mask = testsupport::make_mask(4, 4, {{0, 0}});
        const auto comps = connected_components(mask);
        const Ring ring = trace_polygon(comps[0], geo);
        CHECK(ring.size() == 4);
        CHECK(signed_area(ring) == doctest::Approx(1.0));
    }

    SUBCASE("3x2 solid block is a 6 m^2 rectangle with 4 vertices") {
        RasterTile mask(8, 8, 1, Dtype::u8);
        testsupport::fill_block(mask, 2, 3, 2, 3);  // 2 rows x 3 cols
        const auto comps = connected_components(mask);
        REQUIRE(comps.size() == 1);
        const Ring ring = trace_polygon(comps[0], geo);
        CHECK(ring.size() == 4);
        CHECK(signed_area(ring) == doctest::Approx(6.0));
    }

    SUBCASE("random blobs: shoelace area equals pixels plus enclosed holes") {
        std::mt19937_64 rng(41);
        for (int trial = 0; trial < 60; ++trial) {
            const RasterTile mask = testsupport::random_mask(rng, 32, 32, 0.45);
            for (const ConnectedComponent& comp : connected_components(mask)) {
                const Ring ring = trace_polygon(comp, geo);
                CHECK(signed_area(ring) > 0.0);  // counter-clockwise

                // Enclosed holes: pixels inside the bbox not reachable from
                // the outside through non-component pixels. The complement
                // of a 4-connected region is 8-connected, so corner pinches
                // leak to the outside, matching the traced ring.
                const int bw = comp.max_col - comp.min_col + 3;
                const int bh = comp.max_row - comp.min_row + 3;
                std::vector<char> in(static_cast<std::size_t>(bw) * bh, 0);
                for (const Pixel& p : comp.pixels) {
                    in[static_cast<std::size_t>(p.row - comp.min_row + 1) * bw +
                       (p.col - comp.min_col + 1)] = 1;
                }
                std::vector<char> outside(in.size(), 0);
                std::vector<int> stack{0};
                outside[0] = 1;
                while (!stack.empty()) {
                    const int i = stack.back();
                    stack.pop_back();
                    const int r = i / bw, c = i % bw;
                    for (int dr = -1; dr <= 1; ++dr) {
                        for (int dc = -1; dc <= 1; ++dc) {
                            const int nr = r + dr, nc = c + dc;
                            if (nr < 0 || nr >= bh || nc < 0 || nc >= bw) continue;
                            const int j = nr * bw + nc;
                            if (!outside[j] && !in[j]) {
                                outside[j] = 1;
                                stack.push_back(j);
                            }
                        }
                    }
                }
                std::int64_t holes = 0;
                for (std::size_t i = 0; i < in.size(); ++i) {
                    if (!in[i] && !outside[i]) ++holes;
                }
                CHECK(signed_area(ring) ==
                      doctest::Approx(static_cast<double>(comp.pixels.size() + holes)));
            }
        }
    }

    SUBCASE("donut: the exterior ring spans the hole") {
        RasterTile mask(8, 8, 1, Dtype::u8);
        testsupport::fill_block(mask, 1, 1, 5, 5);
        mask.u8_at(0, 3, 3) = 0;  // enclosed hole
        const auto comps = connected_components(mask);
        REQUIRE(comps.size() == 1);
        CHECK(comps[0].pixels.size() == 24);
        const Ring ring = trace_polygon(comps[0], geo);
        CHECK(ring.size() == 4);
        CHECK(signed_area(ring) == doctest::Approx(25.0));  // 24 pixels + 1 hole
    }

    SUBCASE("diagonal pinch: the cavity drains through the corner") {
        // C-shaped component whose cavity touches the outside only at a
        // corner; the traced ring must wrap through the pinch and exclude
        // the cavity pixel.
        const RasterTile mask = testsupport::make_mask(
            8, 8, {{0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 3}, {2, 2}, {2, 3}});
        const auto comps = connected_components(mask);
        REQUIRE(comps.size() == 1);
        REQUIRE(comps[0].pixels.size() == 7);
        const Ring ring = trace_polygon(comps[0], geo);
        CHECK(signed_area(ring) == doctest::Approx(7.0));  // cavity (1,2) excluded
    }

    SUBCASE("pixel size scales the traced area") {
        Geotransform half;
        half.pixel_width = 0.5;
        half.pixel_height = 2.0;
        const RasterTile mask = testsupport::make_mask(4, 4, {{1, 1}});
        const auto comps = connected_components(mask);
        const Ring ring = trace_polygon(comps[0], half);
        CHECK(signed_area(ring) == doctest::Approx(1.0));  // 0.5 m x 2 m
    }
}

TEST_CASE("object features") {
    SUBCASE("barn-shaped block: 155 x 14 m") {
        RasterTile prob(200, 40, 1, Dtype::f32);
        prob.timestamp = 2016;
        for (int r = 10; r < 24; ++r) {
            for (int c = 20; c < 175; ++c) prob.f32_at(0, r, c) = 0.9f;
        }
        const auto objects = extract_objects(prob, 0.5);
        REQUIRE(objects.size() == 1);
        const DetectedObject& obj = objects[0];
        CHECK(obj.area_m2 == doctest::Approx(155.0 * 14.0));
        CHECK(obj.aspect_ratio == doctest::Approx(155.0 / 14.0));  // ~11.07
        CHECK(obj.mean_probability == doctest::Approx(0.9));
        CHECK(obj.orientation_deg == doctest::Approx(0.0));
        CHECK(obj.timestamp == 2016);
        CHECK_FALSE(obj.road_distance_m.has_value());
    }

    SUBCASE("square block has aspect 1") {
        RasterTile prob(40, 40, 1, Dtype::f32);
        for (int r = 10; r < 30; ++r) {
            for (int c = 10; c < 30; ++c) prob.f32_at(0, r, c) = 1.0f;
        }
        const auto objects = extract_objects(prob, 0.5);
        REQUIRE(objects.size() == 1);
        CHECK(objects[0].aspect_ratio == doctest::Approx(1.0));
        CHECK(objects[0].area_m2 == doctest::Approx(400.0));
    }

    SUBCASE("vertical block is oriented at 90 degrees") {
        RasterTile prob(40, 60, 1, Dtype::f32);
        for (int r = 5; r < 55; ++r) {
            for (int c = 18; c < 23; ++c) prob.f32_at(0, r, c) = 1.0f;
        }
        const auto objects = extract_objects(prob, 0.5);
        REQUIRE(objects.size() == 1);
        CHECK(objects[0].orientation_deg == doctest::Approx(90.0));
    }
}

TEST_CASE("min rect area always covers the traced polygon") {
    std::mt19937_64 rng(53);
    Geotransform geo;
    for (int trial = 0; trial < 40; ++trial) {
        RasterTile prob(48, 48, 1, Dtype::f32);
        const RasterTile mask = testsupport::random_mask(rng, 48, 48, 0.4);
        for (int r = 0; r < 48; ++r) {
            for (int c = 0; c < 48; ++c) {
                prob.f32_at(0, r, c) = mask.u8_at(0, r, c) ? 1.0f : 0.0f;
            }
        }
        for (const DetectedObject& obj : extract_objects(prob, 0.5)) {
            CHECK(obj.area_m2 >= signed_area(obj.polygon) - 1e-9);
            CHECK(obj.aspect_ratio >= 1.0);
            CHECK(obj.orientation_deg >= 0.0);
            CHECK(obj.orientation_deg < 180.0);
        }
    }
}

TEST_CASE("components of a rotated mask are in bijection with equal sizes") {
    std::mt19937_64 rng(67);
    const RasterTile mask = testsupport::random_mask(rng, 40, 40, 0.35);
    RasterTile rotated(40, 40, 1, Dtype::u8);
    for (int r = 0; r < 40; ++r) {
        for (int c = 0; c < 40; ++c) {
            rotated.u8_at(0, c, 40 - 1 - r) = mask.u8_at(0, r, c);
        }
    }
    const auto a = connected_components(mask);
    const auto b = connected_components(rotated);
    REQUIRE(a.size() == b.size());
    std::multiset<std::size_t> sizes_a, sizes_b;
    for (const auto& comp : a) sizes_a.insert(comp.pixels.size());
    for (const auto& comp : b) sizes_b.insert(comp.pixels.size());
    CHECK(sizes_a == sizes_b);
}
