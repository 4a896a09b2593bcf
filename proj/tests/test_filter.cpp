#include <doctest.h>

#include "barnmap/filter.hpp"
#include "test_support.hpp"

using namespace barnmap;

namespace {

DetectedObject make_object(double area, double aspect, double road_dist) {
    DetectedObject obj;
    obj.area_m2 = area;
    obj.aspect_ratio = aspect;
    obj.road_distance_m = road_dist;
    return obj;
}

}  // namespace

TEST_CASE("derive_rules takes feature ranges") {
    SUBCASE("singleton gives min = max") {
        const std::vector<DetectedObject> labeled{make_object(2000, 8, 10)};
        const RuleSet r = derive_rules(labeled);
        CHECK(r.area_min_m2 == 2000);
        CHECK(r.area_max_m2 == 2000);
        CHECK(r.aspect_min == 8);
        CHECK(r.aspect_max == 8);
        CHECK(r.road_buffer_m == 0.0);
    }

    SUBCASE("ranges span the inputs") {
        const std::vector<DetectedObject> labeled{
            make_object(600, 5, 1), make_object(3000, 4, 1), make_object(8000, 12, 1)};
        const RuleSet r = derive_rules(labeled);
        CHECK(r.area_min_m2 == 600);
        CHECK(r.area_max_m2 == 8000);
        CHECK(r.aspect_min == 4);
        CHECK(r.aspect_max == 12);
    }

    SUBCASE("a generator spanning the reference ranges recovers them") {
        std::vector<DetectedObject> labeled;
        // Endpoints included deliberately; derive_rules must return exactly
        // the span of its input.
        labeled.push_back(make_object(525.0, 3.4, 5));
        labeled.push_back(make_object(8106.0, 20.49, 5));
        for (int i = 1; i < 40; ++i) {
            const double t = i / 40.0;
            labeled.push_back(make_object(525.0 + t * (8106.0 - 525.0), 3.4 + t * (20.49 - 3.4), 5));
        }
        const RuleSet r = derive_rules(labeled);
        CHECK(r.area_min_m2 == doctest::Approx(525.0));
        CHECK(r.area_max_m2 == doctest::Approx(8106.0));
        CHECK(r.aspect_min == doctest::Approx(3.4));
        CHECK(r.aspect_max == doctest::Approx(20.49));
    }

    SUBCASE("empty input is an error") {
        CHECK_THROWS_AS(derive_rules({}), std::invalid_argument);
    }
}

TEST_CASE("classify applies area, aspect, then road rules") {
    const RuleSet rules = RuleSet::barn_defaults();

    CHECK(classify(make_object(2170, 11.07, 50), rules) == RejectReason::none);
    CHECK(classify(make_object(400, 8, 50), rules) == RejectReason::area_below_min);
    CHECK(classify(make_object(9000, 8, 50), rules) == RejectReason::area_above_max);
    CHECK(classify(make_object(2000, 2, 50), rules) == RejectReason::aspect_below_min);
    CHECK(classify(make_object(2000, 30, 50), rules) == RejectReason::aspect_above_max);
    CHECK(classify(make_object(2000, 8, 0), rules) == RejectReason::road_intersection);

    // First failure wins: bad area and on a road reports the area rule.
    CHECK(classify(make_object(400, 8, 0), rules) == RejectReason::area_below_min);

    // Bounds are inclusive.
    CHECK(classify(make_object(525, 3.4, 1), rules) == RejectReason::none);
    CHECK(classify(make_object(8106, 20.49, 1), rules) == RejectReason::none);

    DetectedObject unset = make_object(2000, 8, 0);
    unset.road_distance_m.reset();
    CHECK_THROWS_AS(classify(unset, rules), std::invalid_argument);
}

TEST_CASE("road buffer widens the intersection rule") {
    RuleSet rules = RuleSet::barn_defaults();
    rules.road_buffer_m = 10.0;
    CHECK(classify(make_object(2000, 8, 10.0), rules) == RejectReason::road_intersection);
    CHECK(classify(make_object(2000, 8, 10.5), rules) == RejectReason::none);
}

TEST_CASE("filter_objects partitions and preserves order") {
    SUBCASE("empty input") {
        const FilterResult r = filter_objects({}, RuleSet::barn_defaults());
        CHECK(r.kept.empty());
        CHECK(r.rejected.empty());
    }

    SUBCASE("all-passing set is kept verbatim") {
        std::vector<DetectedObject> objs;
        for (int i = 0; i < 5; ++i) objs.push_back(make_object(1000 + i, 5 + i, 3));
        const FilterResult r = filter_objects(objs, RuleSet::barn_defaults());
        CHECK(r.kept.size() == 5);
        CHECK(r.rejected.empty());
        for (std::size_t i = 0; i < r.kept.size(); ++i) {
            CHECK(r.kept[i].area_m2 == objs[i].area_m2);
        }
    }

    SUBCASE("constructed mix rejects exactly the planted road/strip shapes") {
        std::vector<DetectedObject> objs;
        objs.push_back(make_object(2170, 11.07, 40));  // barn
        objs.push_back(make_object(3000, 66.0, 0));    // road-hugging strip
        objs.push_back(make_object(2170, 11.07, 35));  // barn
        objs.push_back(make_object(100, 1.0, 50));     // small blob
        objs.push_back(make_object(1500, 9.0, 0.0));   // on a road
        const FilterResult r = filter_objects(objs, RuleSet::barn_defaults());
        REQUIRE(r.kept.size() == 2);
        REQUIRE(r.rejected.size() == 3);
        CHECK(r.rejected[0].second == RejectReason::aspect_above_max);
        CHECK(r.rejected[1].second == RejectReason::area_below_min);
        CHECK(r.rejected[2].second == RejectReason::road_intersection);
    }
}

TEST_CASE("ruleset file round trip and defaults") {
    testsupport::TempDir dir("rules");
    const std::string path = dir.str() + "/rules.json";
    write_rules(RuleSet::barn_defaults(), path);
    const RuleSet back = read_rules(path);
    CHECK(back.area_min_m2 == 525.0);
    CHECK(back.area_max_m2 == 8106.0);
    CHECK(back.aspect_min == 3.4);
    CHECK(back.aspect_max == 20.49);
    CHECK(back.road_buffer_m == 0.0);

    RuleSet bad;
    bad.area_min_m2 = 10;
    bad.area_max_m2 = 5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
