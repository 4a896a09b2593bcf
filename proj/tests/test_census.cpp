#include <doctest.h>

#include <fstream>
#include <random>

#include "barnmap/census.hpp"
#include "test_support.hpp"

using namespace barnmap;

TEST_CASE("spearman on monotone data") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> inc{10, 20, 30, 40, 50};
    const std::vector<double> dec{9, 7, 5, 3, 1};
    CHECK(spearman(x, inc) == doctest::Approx(1.0));
    CHECK(spearman(x, dec) == doctest::Approx(-1.0));
    CHECK(spearman(x, x) == doctest::Approx(1.0));
}

TEST_CASE("spearman is invariant under strictly increasing transforms") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> value(0.0, 100.0);
    std::vector<double> x, y, fx;
    for (int i = 0; i < 50; ++i) {
        x.push_back(value(rng));
        y.push_back(value(rng));
    }
    for (double v : x) fx.push_back(std::exp(v / 25.0) + 3.0);
    CHECK(spearman(fx, y) == doctest::Approx(spearman(x, y)).epsilon(1e-12));
}

TEST_CASE("spearman with ties matches the hand-computed example") {
    const std::vector<double> x{1, 2, 2, 4};
    const std::vector<double> y{10, 20, 30, 40};
    // Ranks: x -> 1, 2.5, 2.5, 4; y -> 1..4; rho = 4.5 / sqrt(4.5 * 5).
    CHECK(spearman(x, y) == doctest::Approx(4.5 / std::sqrt(22.5)).epsilon(1e-12));
    CHECK(spearman(x, y) == doctest::Approx(testsupport::spearman_oracle(x, y)).epsilon(1e-12));
}

TEST_CASE("spearman equals the tie-corrected closed formula on random tied vectors") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> small(0, 9);  // heavy ties
    std::uniform_int_distribution<int> len(2, 60);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = len(rng);
        std::vector<double> x, y;
        for (int i = 0; i < n; ++i) {
            x.push_back(small(rng));
            y.push_back(small(rng));
        }
        const bool x_const = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
        const bool y_const = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
        if (x_const || y_const) {
            CHECK_THROWS_AS(spearman(x, y), std::domain_error);
            continue;
        }
        CHECK(spearman(x, y) ==
              doctest::Approx(testsupport::spearman_oracle(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("spearman input validation") {
    CHECK_THROWS_AS(spearman(std::vector<double>{1.0}, std::vector<double>{2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}),
                    std::invalid_argument);
    CHECK_THROWS_AS(spearman(std::vector<double>{5, 5, 5}, std::vector<double>{1, 2, 3}),
                    std::domain_error);
}

namespace {

CountyRecord county(const std::string& fips, std::int64_t barns,
                    std::map<int, std::int64_t> ops, std::optional<double> cv = {}) {
    CountyRecord rec;
    rec.fips = fips;
    rec.predicted_barns = barns;
    rec.census_operations = std::move(ops);
    rec.cv = cv;
    return rec;
}

}  // namespace

TEST_CASE("threshold sweep") {
    SUBCASE("predictions equal to the 10k-head counts give rho = 1 there") {
        std::vector<CountyRecord> records;
        std::mt19937_64 rng(19);
        for (int i = 0; i < 40; ++i) {
            const std::int64_t barns = static_cast<std::int64_t>(rng() % 1000);
            records.push_back(county("c" + std::to_string(i), barns,
                                     {{400, static_cast<std::int64_t>(rng() % 50)},
                                      {10000, barns}}));
        }
        const std::vector<int> thresholds{400, 10000};
        const auto sweep = threshold_sweep(records, thresholds);
        REQUIRE(sweep.size() == 2);
        CHECK(sweep[1].first == 10000);
        CHECK(sweep[1].second == doctest::Approx(1.0));
    }

    SUBCASE("independent counts have near-zero correlation at n=500") {
        std::vector<CountyRecord> records;
        std::mt19937_64 rng(23);
        for (int i = 0; i < 500; ++i) {
            records.push_back(county("c" + std::to_string(i),
                                     static_cast<std::int64_t>(rng() % 10000),
                                     {{400, static_cast<std::int64_t>(rng() % 10000)}}));
        }
        const std::vector<int> thresholds{400};
        const auto sweep = threshold_sweep(records, thresholds);
        CHECK(std::abs(sweep[0].second) < 0.2);
    }

    SUBCASE("monotone-noise model peaks at the designed threshold") {
        // Predictions track large operations; small-operation counts are
        // noise, so correlation should rise with the size threshold.
        std::mt19937_64 rng(29);
        std::vector<CountyRecord> records;
        for (int i = 0; i < 300; ++i) {
            const std::int64_t large = static_cast<std::int64_t>(rng() % 500);
            const std::int64_t small = static_cast<std::int64_t>(rng() % 500);
            const std::int64_t barns = large * 4 + static_cast<std::int64_t>(rng() % 40);
            records.push_back(county("c" + std::to_string(i), barns,
                                     {{400, small}, {10000, large}}));
        }
        const std::vector<int> thresholds{400, 10000};
        const auto sweep = threshold_sweep(records, thresholds);
        CHECK(sweep[1].second > sweep[0].second);
        CHECK(sweep[1].second > 0.9);
    }
}

TEST_CASE("cv subset sweep") {
    std::vector<CountyRecord> records;
    std::mt19937_64 rng(31);
    // Low-cv counties accurate, high-cv noisy.
    for (int i = 0; i < 200; ++i) {
        const bool low_cv = i < 100;
        const std::int64_t ops = static_cast<std::int64_t>(rng() % 1000);
        const std::int64_t barns =
            low_cv ? ops * 3 + static_cast<std::int64_t>(rng() % 5)
                   : static_cast<std::int64_t>(rng() % 3000);
        records.push_back(county("c" + std::to_string(i), barns, {{400, ops}},
                                 low_cv ? 0.05 : 0.8));
    }

    SUBCASE("cutoff below every cv yields an undefined entry") {
        const std::vector<double> cutoffs{0.01};
        const auto sweep = cv_subset_sweep(records, cutoffs, 400);
        REQUIRE(sweep.size() == 1);
        CHECK_FALSE(sweep[0].rho.has_value());
        CHECK(sweep[0].county_count == 0);
    }

    SUBCASE("infinite cutoff equals plain spearman over all counties") {
        const std::vector<double> cutoffs{std::numeric_limits<double>::infinity()};
        const auto sweep = cv_subset_sweep(records, cutoffs, 400);
        std::vector<double> x, y;
        for (const CountyRecord& rec : records) {
            x.push_back(static_cast<double>(rec.predicted_barns));
            y.push_back(static_cast<double>(rec.census_operations.at(400)));
        }
        REQUIRE(sweep[0].rho.has_value());
        CHECK(*sweep[0].rho == doctest::Approx(spearman(x, y)));
    }

    SUBCASE("correlation decreases as noisier counties enter") {
        const std::vector<double> cutoffs{0.1, 1.0};
        const auto sweep = cv_subset_sweep(records, cutoffs, 400);
        REQUIRE(sweep.size() == 2);
        REQUIRE(sweep[0].rho.has_value());
        REQUIRE(sweep[1].rho.has_value());
        CHECK(*sweep[0].rho > *sweep[1].rho);
        CHECK(*sweep[0].rho > 0.95);
        // Subsets are nested.
        CHECK(sweep[0].county_count <= sweep[1].county_count);
    }

    SUBCASE("descending cutoffs are rejected") {
        const std::vector<double> cutoffs{1.0, 0.5};
        CHECK_THROWS_AS(cv_subset_sweep(records, cutoffs, 400), std::invalid_argument);
    }
}

TEST_CASE("aggregate_by_county assigns centroids") {
    auto square_boundary = [](const std::string& fips, double x0, double y0, double size) {
        CountyBoundary b;
        b.fips = fips;
        b.rings = {Ring{{x0, y0}, {x0 + size, y0}, {x0 + size, y0 + size}, {x0, y0 + size}}};
        return b;
    };
    const std::vector<CountyBoundary> counties{square_boundary("A", 0, 0, 100),
                                               square_boundary("B", 100, 0, 100)};

    auto object_at = [](double x, double y) {
        DetectedObject obj;
        obj.polygon = {{x - 1, y - 1}, {x + 1, y - 1}, {x + 1, y + 1}, {x - 1, y + 1}};
        return obj;
    };

    SUBCASE("basic containment and the unassigned bin") {
        const std::vector<DetectedObject> objects{object_at(50, 50), object_at(150, 20),
                                                  object_at(500, 500)};
        const CountyCounts counts = aggregate_by_county(objects, counties);
        CHECK(counts.per_county.at("A") == 1);
        CHECK(counts.per_county.at("B") == 1);
        CHECK(counts.unassigned == 1);
        CHECK(counts.overlap_warnings == 0);
    }

    SUBCASE("random scatter matches a point-in-polygon oracle") {
        std::mt19937_64 rng(37);
        std::uniform_real_distribution<double> coord(-20.0, 220.0);
        std::vector<DetectedObject> objects;
        for (int i = 0; i < 500; ++i) objects.push_back(object_at(coord(rng), coord(rng)));
        const CountyCounts counts = aggregate_by_county(objects, counties);
        std::int64_t a = 0, b = 0, none = 0;
        for (const DetectedObject& obj : objects) {
            const Point c = ring_centroid(obj.polygon);
            const bool in_a = testsupport::oracle_point_in_ring(c, counties[0].rings[0]);
            const bool in_b = testsupport::oracle_point_in_ring(c, counties[1].rings[0]);
            if (in_a) {
                ++a;
            } else if (in_b) {
                ++b;
            } else {
                ++none;
            }
        }
        CHECK(counts.per_county.at("A") == a);
        CHECK(counts.per_county.at("B") == b);
        CHECK(counts.unassigned == none);
    }

    SUBCASE("overlapping counties warn and assign to the first match") {
        const std::vector<CountyBoundary> overlapping{square_boundary("A", 0, 0, 100),
                                                      square_boundary("B", 50, 0, 100)};
        const std::vector<DetectedObject> objects{object_at(75, 50)};
        const CountyCounts counts = aggregate_by_county(objects, overlapping);
        CHECK(counts.per_county.at("A") == 1);
        CHECK(counts.per_county.at("B") == 0);
        CHECK(counts.overlap_warnings == 1);
    }
}

TEST_CASE("county CSV parsing") {
    testsupport::TempDir dir("census");
    const std::string path = dir.str() + "/counties.csv";
    {
        std::ofstream out(path);
        out << "fips,predicted_barns,ops_400,ops_10000,cv\n";
        out << "10001,120,5,2,0.12\n";
        out << "10003,89,,1,\n";     // masked ops_400, absent cv
        out << "10005,0,0,0,0.9\n";
    }
    const auto records = read_county_csv(path);
    REQUIRE(records.size() == 3);
    CHECK(records[0].fips == "10001");
    CHECK(records[0].predicted_barns == 120);
    CHECK(records[0].census_operations.at(400) == 5);
    CHECK(records[0].census_operations.at(10000) == 2);
    CHECK(records[0].cv == doctest::Approx(0.12));
    CHECK(records[1].census_operations.count(400) == 0);
    CHECK(records[1].census_operations.at(10000) == 1);
    CHECK_FALSE(records[1].cv.has_value());

    const std::string bad = dir.str() + "/bad.csv";
    std::ofstream(bad) << "fips,barns\n";
    CHECK_THROWS_AS(read_county_csv(bad), std::runtime_error);
}
