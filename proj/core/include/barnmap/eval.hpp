#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "barnmap/objects.hpp"

namespace barnmap {

// Detection evaluation: raster-space IoU matching, F-beta scores, the
// facility-proximity protocol, and orientation histograms.

// Pixels whose centers fall inside the ring, in the grid addressed by geo.
std::vector<Pixel> rasterize_ring(const Ring& ring, const Geotransform& geo, int width, int height);

// |a n b| / |a u b| over pixel sets. Inputs need not be sorted. Throws when
// both sets are empty.
double iou(std::span<const Pixel> a, std::span<const Pixel> b);

struct MatchPair {
    std::size_t pred = 0;
    std::size_t label = 0;
    double iou = 0.0;
};

struct MatchReport {
    std::int64_t true_positives = 0;
    std::int64_t false_positives = 0;
    std::int64_t false_negatives = 0;
    std::vector<MatchPair> pairs;
    double precision = 0.0;
    double recall = 0.0;
    double f2 = 0.0;
};

// A prediction is a true positive iff its IoU with some label is strictly
// greater than iou_thresh; an unmatched label is a false negative. For
// thresholds >= 0.5 the pairing is unambiguous.
MatchReport match_objects(std::span<const std::vector<Pixel>> preds,
                          std::span<const std::vector<Pixel>> labels, double iou_thresh = 0.5);

// (1 + beta^2) p r / (beta^2 p + r); 0 when p = r = 0. beta must be > 0.
double f_beta(double precision, double recall, double beta = 2.0);

enum class FacilityClass : std::uint8_t { poultry, other, empty };

struct Facility {
    Ring polygon;
    FacilityClass cls = FacilityClass::empty;
};

struct FacilityValidationReport {
    std::int64_t true_positives = 0;  // in-area predictions near a poultry facility
    std::int64_t false_positives_in_area = 0;
    std::int64_t predictions_total = 0;
    std::int64_t predictions_in_area = 0;
    std::int64_t facilities_matched = 0;
    std::int64_t facilities_missed = 0;
    double precision_in_area = 0.0;    // over predictions inside the validated area
    double precision_lower_bound = 0.0;  // every prediction outside the area counted as FP
    double recall = 0.0;
};

// A prediction counts as a true positive when its minimum polygon-polygon
// distance to some poultry facility is <= radius_m. Recall is over poultry
// facilities; precision is reported both restricted to the validated area
// and as the everything-outside-is-wrong lower bound.
FacilityValidationReport facility_validation(std::span<const Ring> predictions,
                                             std::span<const Facility> facilities,
                                             std::span<const Ring> validated_area,
                                             double radius_m = 100.0);

// Counts over [0, 180) with bin k covering [k*w, (k+1)*w). bin_width_deg
// must divide 180.
std::vector<std::int64_t> orientation_histogram(std::span<const double> orientations_deg,
                                                int bin_width_deg = 5);

}  // namespace barnmap
