#include "barnmap/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace barnmap {

std::vector<Pixel> rasterize_ring(const Ring& ring, const Geotransform& geo, int width, int height) {
    std::vector<Pixel> out;
    if (ring.size() < 3) return out;

    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_y = min_x, max_y = -min_x;
    for (const Point& p : ring) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const auto [row_lo_f, col_lo_f] = geo.geo_to_pixel({min_x, max_y});
    const auto [row_hi_f, col_hi_f] = geo.geo_to_pixel({max_x, min_y});
    if (row_hi_f < 0.0 || col_hi_f < 0.0 || row_lo_f > height || col_lo_f > width) {
        return out;  // entirely outside the tile
    }
    const int row_lo = std::max(0, static_cast<int>(std::floor(row_lo_f)) - 1);
    const int col_lo = std::max(0, static_cast<int>(std::floor(col_lo_f)) - 1);
    const int row_hi = std::min(height - 1, static_cast<int>(std::ceil(row_hi_f)) + 1);
    const int col_hi = std::min(width - 1, static_cast<int>(std::ceil(col_hi_f)) + 1);

    for (int r = row_lo; r <= row_hi; ++r) {
        for (int c = col_lo; c <= col_hi; ++c) {
            const Point center = geo.pixel_to_geo(r + 0.5, c + 0.5);
            if (point_in_ring(center, ring)) out.push_back({r, c});
        }
    }
    return out;
}

namespace {

std::vector<std::uint64_t> pixel_keys(std::span<const Pixel> pixels) {
    std::vector<std::uint64_t> keys;
    keys.reserve(pixels.size());
    for (const Pixel& p : pixels) {
        keys.push_back((static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.row)) << 32) |
                       static_cast<std::uint32_t>(p.col));
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

double iou_keys(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::size_t inter = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++inter;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

double iou(std::span<const Pixel> a, std::span<const Pixel> b) {
    if (a.empty() && b.empty()) throw std::invalid_argument("iou: both pixel sets are empty");
    return iou_keys(pixel_keys(a), pixel_keys(b));
}

MatchReport match_objects(std::span<const std::vector<Pixel>> preds,
                          std::span<const std::vector<Pixel>> labels, double iou_thresh) {
    if (iou_thresh < 0.0) throw std::invalid_argument("match_objects: negative IoU threshold");

    std::vector<std::vector<std::uint64_t>> pred_keys(preds.size());
    std::vector<std::vector<std::uint64_t>> label_keys(labels.size());
    for (std::size_t i = 0; i < preds.size(); ++i) pred_keys[i] = pixel_keys(preds[i]);
    for (std::size_t j = 0; j < labels.size(); ++j) label_keys[j] = pixel_keys(labels[j]);

    MatchReport report;
    std::vector<bool> label_matched(labels.size(), false);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        bool matched = false;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            const double v = iou_keys(pred_keys[i], label_keys[j]);
            if (v > iou_thresh) {
                // For thresholds >= 0.5 at most one label can clear the bar,
                // and each label at most once across predictions.
                matched = true;
                if (!label_matched[j]) {
                    label_matched[j] = true;
                    report.pairs.push_back({i, j, v});
                }
                break;
            }
        }
        if (matched) {
            ++report.true_positives;
        } else {
            ++report.false_positives;
        }
    }
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (!label_matched[j]) ++report.false_negatives;
    }
    const std::int64_t tp = report.true_positives;
    report.precision = tp + report.false_positives > 0
                           ? static_cast<double>(tp) / static_cast<double>(tp + report.false_positives)
                           : 0.0;
    report.recall = tp + report.false_negatives > 0
                        ? static_cast<double>(tp) / static_cast<double>(tp + report.false_negatives)
                        : 0.0;
    report.f2 = f_beta(report.precision, report.recall, 2.0);
    return report;
}

double f_beta(double precision, double recall, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("f_beta: beta must be positive");
    if (precision < 0.0 || precision > 1.0 || recall < 0.0 || recall > 1.0) {
        throw std::invalid_argument("f_beta: precision and recall must be in [0, 1]");
    }
    const double b2 = beta * beta;
    const double denom = b2 * precision + recall;
    if (denom == 0.0) return 0.0;
    return (1.0 + b2) * precision * recall / denom;
}

FacilityValidationReport facility_validation(std::span<const Ring> predictions,
                                             std::span<const Facility> facilities,
                                             std::span<const Ring> validated_area,
                                             double radius_m) {
    if (radius_m < 0.0) throw std::invalid_argument("facility_validation: negative radius");

    auto in_validated_area = [&](const Ring& pred) {
        const Point c = ring_centroid(pred);
        for (const Ring& area : validated_area) {
            if (point_in_ring(c, area)) return true;
        }
        return false;
    };

    FacilityValidationReport report;
    report.predictions_total = static_cast<std::int64_t>(predictions.size());
    std::vector<bool> facility_hit(facilities.size(), false);

    for (const Ring& pred : predictions) {
        const bool in_area = in_validated_area(pred);
        if (in_area) ++report.predictions_in_area;
        bool near_facility = false;
        for (std::size_t f = 0; f < facilities.size(); ++f) {
            if (facilities[f].cls != FacilityClass::poultry) continue;
            if (polygon_polygon_distance(pred, facilities[f].polygon) <= radius_m) {
                near_facility = true;
                facility_hit[f] = true;
            }
        }
        // Precision is judged only inside the validated area; predictions
        // outside it cannot be verified and count against the lower bound.
        if (near_facility && in_area) {
            ++report.true_positives;
        } else if (in_area) {
            ++report.false_positives_in_area;
        }
    }
    for (std::size_t f = 0; f < facilities.size(); ++f) {
        if (facilities[f].cls != FacilityClass::poultry) continue;
        if (facility_hit[f]) {
            ++report.facilities_matched;
        } else {
            ++report.facilities_missed;
        }
    }

    const double tp = static_cast<double>(report.true_positives);
    report.precision_in_area = report.predictions_in_area > 0
                                   ? tp / static_cast<double>(report.predictions_in_area)
                                   : 0.0;
    report.precision_lower_bound =
        report.predictions_total > 0 ? tp / static_cast<double>(report.predictions_total) : 0.0;
    const std::int64_t poultry_total = report.facilities_matched + report.facilities_missed;
    report.recall = poultry_total > 0
                        ? static_cast<double>(report.facilities_matched) / static_cast<double>(poultry_total)
                        : 0.0;
    return report;
}

std::vector<std::int64_t> orientation_histogram(std::span<const double> orientations_deg,
                                                int bin_width_deg) {
    if (bin_width_deg <= 0 || 180 % bin_width_deg != 0) {
        throw std::invalid_argument("orientation_histogram: bin width must divide 180");
    }
    std::vector<std::int64_t> counts(180 / bin_width_deg, 0);
    for (double deg : orientations_deg) {
        double folded = std::fmod(deg, 180.0);
        if (folded < 0.0) folded += 180.0;
        const int bin = std::min(static_cast<int>(folded) / bin_width_deg,
                                 static_cast<int>(counts.size()) - 1);
        ++counts[bin];
    }
    return counts;
}

}  // namespace barnmap
