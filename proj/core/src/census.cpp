#include "barnmap/census.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace barnmap {

CountyCounts aggregate_by_county(std::span<const DetectedObject> objects,
                                 std::span<const CountyBoundary> counties) {
    CountyCounts counts;
    for (const CountyBoundary& county : counties) counts.per_county[county.fips];  // zero-init

    for (const DetectedObject& obj : objects) {
        const Point centroid = ring_centroid(obj.polygon);
        const CountyBoundary* first = nullptr;
        int matches = 0;
        for (const CountyBoundary& county : counties) {
            for (const Ring& ring : county.rings) {
                if (point_in_ring(centroid, ring)) {
                    ++matches;
                    if (!first) first = &county;
                    break;
                }
            }
        }
        if (first == nullptr) {
            ++counts.unassigned;
        } else {
            ++counts.per_county[first->fips];
            if (matches > 1) ++counts.overlap_warnings;
        }
    }
    return counts;
}

namespace {

// Average ranks (ties get the mean of their rank positions), 1-based.
std::vector<double> average_ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("spearman: need at least 2 observations");

    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mean = (n + 1.0) / 2.0;

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw std::domain_error("spearman: zero rank variance (constant input)");
    }
    return sxy / std::sqrt(sxx * syy);
}

namespace {

// Paired (predicted, census) values at one threshold; masked counties are
// dropped pairwise.
std::pair<std::vector<double>, std::vector<double>> paired_at_threshold(
    std::span<const CountyRecord> records, int threshold) {
    std::vector<double> x, y;
    for (const CountyRecord& rec : records) {
        const auto it = rec.census_operations.find(threshold);
        if (it == rec.census_operations.end()) continue;
        x.push_back(static_cast<double>(rec.predicted_barns));
        y.push_back(static_cast<double>(it->second));
    }
    return {std::move(x), std::move(y)};
}

}  // namespace

std::vector<std::pair<int, double>> threshold_sweep(std::span<const CountyRecord> records,
                                                    std::span<const int> thresholds) {
    std::vector<std::pair<int, double>> out;
    for (int t : thresholds) {
        auto [x, y] = paired_at_threshold(records, t);
        out.emplace_back(t, spearman(x, y));
    }
    return out;
}

std::vector<CvSweepEntry> cv_subset_sweep(std::span<const CountyRecord> records,
                                          std::span<const double> cv_cutoffs,
                                          int census_threshold) {
    for (std::size_t i = 1; i < cv_cutoffs.size(); ++i) {
        if (cv_cutoffs[i] < cv_cutoffs[i - 1]) {
            throw std::invalid_argument("cv_subset_sweep: cutoffs must be ascending");
        }
    }
    std::vector<CvSweepEntry> out;
    for (double cutoff : cv_cutoffs) {
        CvSweepEntry entry;
        entry.cutoff = cutoff;
        std::vector<double> x, y;
        for (const CountyRecord& rec : records) {
            if (!rec.cv || *rec.cv > cutoff) continue;
            const auto it = rec.census_operations.find(census_threshold);
            if (it == rec.census_operations.end()) continue;
            x.push_back(static_cast<double>(rec.predicted_barns));
            y.push_back(static_cast<double>(it->second));
        }
        entry.county_count = x.size();
        if (x.size() >= 2) {
            try {
                entry.rho = spearman(x, y);
            } catch (const std::domain_error&) {
                // constant ranks: leave undefined
            }
        }
        out.push_back(std::move(entry));
    }
    return out;
}

std::vector<CountyRecord> read_county_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open county CSV: " + path);

    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        return cells;
    };

    std::string header_line;
    if (!std::getline(in, header_line)) throw std::runtime_error("empty county CSV: " + path);
    if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
    const std::vector<std::string> header = split(header_line);
    if (header.size() < 2 || header[0] != "fips" || header[1] != "predicted_barns") {
        throw std::runtime_error("county CSV must start with fips,predicted_barns: " + path);
    }
    std::vector<std::pair<std::size_t, int>> ops_columns;  // column index -> head threshold
    std::optional<std::size_t> cv_column;
    for (std::size_t i = 2; i < header.size(); ++i) {
        if (header[i] == "cv") {
            cv_column = i;
        } else if (header[i].rfind("ops_", 0) == 0) {
            ops_columns.emplace_back(i, std::stoi(header[i].substr(4)));
        } else {
            throw std::runtime_error("unexpected county CSV column '" + header[i] + "' in " + path);
        }
    }

    std::vector<CountyRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cells = split(line);
        if (cells.size() < 2) throw std::runtime_error("short county CSV row: " + line);
        CountyRecord rec;
        rec.fips = cells[0];
        rec.predicted_barns = std::stoll(cells[1]);
        for (const auto& [col, threshold] : ops_columns) {
            if (col < cells.size() && !cells[col].empty()) {
                rec.census_operations[threshold] = std::stoll(cells[col]);
            }
        }
        if (cv_column && *cv_column < cells.size() && !cells[*cv_column].empty()) {
            rec.cv = std::stod(cells[*cv_column]);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace barnmap
