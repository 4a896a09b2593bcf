#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "barnmap/geometry.hpp"
#include "barnmap/objects.hpp"

namespace barnmap {

// County-level comparison of predicted barn counts against census operation
// counts.

struct CountyRecord {
    std::string fips;
    std::int64_t predicted_barns = 0;
    // operation-size threshold (heads) -> reported operation count; masked
    // counties simply lack the entry.
    std::map<int, std::int64_t> census_operations;
    std::optional<double> cv;  // coefficient of variation
};

struct CountyBoundary {
    std::string fips;
    std::vector<Ring> rings;  // polygon or multipolygon parts
};

struct CountyCounts {
    std::map<std::string, std::int64_t> per_county;
    std::int64_t unassigned = 0;
    std::int64_t overlap_warnings = 0;  // centroids claimed by multiple counties
};

// Objects are assigned to the county containing their polygon centroid;
// with overlapping boundaries the first match wins and a warning is counted.
CountyCounts aggregate_by_county(std::span<const DetectedObject> objects,
                                 std::span<const CountyBoundary> counties);

// Spearman rank correlation with average ranks for ties. Throws on length
// mismatch, fewer than 2 elements, or zero rank variance on either side.
double spearman(std::span<const double> x, std::span<const double> y);

// One correlation per operation-size threshold, over counties where the
// census value is present.
std::vector<std::pair<int, double>> threshold_sweep(std::span<const CountyRecord> records,
                                                    std::span<const int> thresholds);

// Correlations over nested subsets {county : cv <= cutoff}. Entries with
// fewer than 2 counties (or constant ranks) are left empty.
struct CvSweepEntry {
    double cutoff = 0.0;
    std::optional<double> rho;
    std::size_t county_count = 0;
};
std::vector<CvSweepEntry> cv_subset_sweep(std::span<const CountyRecord> records,
                                          std::span<const double> cv_cutoffs,
                                          int census_threshold);

// CSV with header fips,predicted_barns,ops_<T1>,ops_<T2>,...,cv. Empty cells
// mean a masked census value or an absent cv.
std::vector<CountyRecord> read_county_csv(const std::string& path);

}  // namespace barnmap
