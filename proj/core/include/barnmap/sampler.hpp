#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "barnmap/raster.hpp"

namespace barnmap {

// Training-patch manifest construction: alpha-weighted background rejection,
// rotation/flip augmentation flags, and temporal pairing of one label year
// with earlier imagery years.

struct SamplerConfig {
    double alpha = 0.5;  // background-discard probability, in [0, 1)
    int patch_size = 256;
    int n_samples = 0;
    bool rotation_augment = false;
    std::uint64_t seed = 0;

    void validate() const;
};

struct PatchSample {
    std::string tile_id;
    int row = 0;
    int col = 0;
    int imagery_year = 0;
    int rotation_deg = 0;  // multiples of 45; multiples of 90 are exact permutations
    bool hflip = false;
    bool vflip = false;
    bool has_positive = false;
};

struct SamplerStats {
    std::int64_t candidates = 0;
    std::int64_t background_candidates = 0;
    std::int64_t background_accepted = 0;

    double background_acceptance_rate() const {
        return background_candidates == 0
                   ? 1.0
                   : static_cast<double>(background_accepted) / background_candidates;
    }
};

struct SamplerTile {
    std::string tile_id;
    const RasterTile* imagery = nullptr;  // optional; dimensions checked when present
    const RasterTile* mask = nullptr;     // binary label mask, single band
    int imagery_year = 0;
};

struct SampleResult {
    std::vector<PatchSample> samples;
    SamplerStats stats;
};

// Draws uniform candidate origins (with replacement) across all tiles,
// discards background-only candidates with probability alpha, and redraws
// until n_samples are accepted.
SampleResult sample_patches(const std::vector<SamplerTile>& tiles, const SamplerConfig& cfg);

// Temporal pairing of a fixed label year with historical imagery years.
enum class TemporalMode : std::uint8_t { single, all, augmented };

struct TemporalPairing {
    TemporalMode mode = TemporalMode::single;
    int label_year = 0;
    std::vector<int> imagery_years;
    // Estimated first year each barn is present (input attribute).
    std::map<std::string, int> construction_years;
};

struct TemporalPair {
    int imagery_year = 0;
    bool mask_valid = false;
};

// barns_in_tile lists the labeled barns intersecting the tile. For augmented
// mode a year is valid only when every such barn already exists in it.
std::vector<TemporalPair> temporal_pairs(const TemporalPairing& pairing,
                                         const std::vector<std::string>& barns_in_tile);

// Applies sample.rotation_deg then hflip then vflip. Rotations that are
// multiples of 90 are exact pixel permutations of a square patch. Odd
// 45-degree multiples resample nearest-neighbor about the patch center into
// an out_size x out_size result; pass a sqrt(2)-padded crop to avoid blank
// corners (out-of-bounds samples read 0).
RasterTile apply_augmentation(const RasterTile& patch, const PatchSample& sample,
                              int out_size = 0);

}  // namespace barnmap
