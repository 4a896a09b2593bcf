#pragma once

#include <cstdint>
#include <optional>

#include "barnmap/raster.hpp"

namespace barnmap {

// Per-patch probability producer standing in for a segmentation model. Two
// kinds:
//   oracle    - derives probabilities from a truth mask: mask*(1-eps) +
//               (1-mask)*eps, then flips each pixel to 1-v with probability
//               flip_rate.
//   heuristic - matched filter against an elongated bright-rectangle template
//               at 8 orientations over 4-band imagery, max-pooled. Fires on
//               barns and, deliberately, on bright straight road segments.
enum class ScorerKind : std::uint8_t { oracle, heuristic };

struct ScorerConfig {
    ScorerKind kind = ScorerKind::oracle;
    double oracle_noise = 0.0;      // eps in [0, 0.5)
    double oracle_flip_rate = 0.0;  // in [0, 1)
    std::uint64_t seed = 0;

    void validate() const;
};

// Returns a 1-band f32 probability patch matching the input patch size.
// The oracle kind requires truth_mask (same dimensions, single band); the
// heuristic kind requires 4-band imagery. Random flips draw from a stream
// seeded by cfg.seed alone, so callers derive a per-patch seed with
// patch_seed() to keep parallel and serial runs identical.
RasterTile score_patch(const RasterTile& patch, const RasterTile* truth_mask,
                       const ScorerConfig& cfg);

// Substream seed for the patch at (row, col) of a named tile.
std::uint64_t patch_seed(std::uint64_t base_seed, const std::string& tile_id, int row, int col);

}  // namespace barnmap
