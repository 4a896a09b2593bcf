#include "barnmap/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "barnmap/rng.hpp"

namespace barnmap {

void SamplerConfig::validate() const {
    if (alpha < 0.0 || alpha >= 1.0) {
        // alpha = 1 would reject every background patch and never terminate
        // on barn-free tiles.
        throw std::invalid_argument("sampler: alpha must be in [0, 1)");
    }
    if (patch_size <= 0) throw std::invalid_argument("sampler: patch_size must be positive");
    if (n_samples < 0) throw std::invalid_argument("sampler: n_samples must be non-negative");
}

namespace {

// Summed-area table over mask positives for O(1) any-positive window checks.
struct PositiveIntegral {
    int w = 0, h = 0;
    std::vector<std::int64_t> acc;  // (h+1) x (w+1)

    explicit PositiveIntegral(const RasterTile& mask) : w(mask.width()), h(mask.height()) {
        acc.assign(static_cast<std::size_t>(w + 1) * (h + 1), 0);
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                const std::int64_t v = mask.value(0, r, c) > 0.0 ? 1 : 0;
                acc[idx(r + 1, c + 1)] = v + acc[idx(r, c + 1)] + acc[idx(r + 1, c)] - acc[idx(r, c)];
            }
        }
    }
    std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * (w + 1) + c; }
    bool any_positive(int row, int col, int size) const {
        const std::int64_t s = acc[idx(row + size, col + size)] - acc[idx(row, col + size)] -
                               acc[idx(row + size, col)] + acc[idx(row, col)];
        return s > 0;
    }
};

}  // namespace

SampleResult sample_patches(const std::vector<SamplerTile>& tiles, const SamplerConfig& cfg) {
    cfg.validate();

    struct Eligible {
        const SamplerTile* tile;
        PositiveIntegral integral;
        int row_span;
        int col_span;
    };
    std::vector<Eligible> eligible;
    std::vector<std::uint64_t> cum_positions;  // cumulative valid-origin counts for uniform draws
    std::uint64_t total_positions = 0;
    for (const SamplerTile& t : tiles) {
        if (t.mask == nullptr) throw std::invalid_argument("sampler: tile without label mask");
        if (t.imagery != nullptr &&
            (t.imagery->width() != t.mask->width() || t.imagery->height() != t.mask->height())) {
            throw std::invalid_argument("sampler: imagery and mask dimensions differ for tile " +
                                        t.tile_id);
        }
        if (t.mask->width() < cfg.patch_size || t.mask->height() < cfg.patch_size) continue;
        const int row_span = t.mask->height() - cfg.patch_size + 1;
        const int col_span = t.mask->width() - cfg.patch_size + 1;
        eligible.push_back({&t, PositiveIntegral(*t.mask), row_span, col_span});
        total_positions += static_cast<std::uint64_t>(row_span) * col_span;
        cum_positions.push_back(total_positions);
    }
    if (cfg.n_samples > 0 && eligible.empty()) {
        throw std::invalid_argument("sampler: no tile is at least patch_size on both axes");
    }

    SampleResult result;
    result.samples.reserve(cfg.n_samples);
    Rng rng(cfg.seed);
    while (static_cast<int>(result.samples.size()) < cfg.n_samples) {
        // Uniform over all valid origins across tiles.
        const std::uint64_t pos = rng.next_below(total_positions);
        const std::size_t ti = static_cast<std::size_t>(
            std::upper_bound(cum_positions.begin(), cum_positions.end(), pos) -
            cum_positions.begin());
        const Eligible& e = eligible[ti];
        const std::uint64_t local = pos - (ti == 0 ? 0 : cum_positions[ti - 1]);
        const int row = static_cast<int>(local / e.col_span);
        const int col = static_cast<int>(local % e.col_span);

        ++result.stats.candidates;
        const bool positive = e.integral.any_positive(row, col, cfg.patch_size);
        if (!positive) {
            ++result.stats.background_candidates;
            if (rng.next_bernoulli(cfg.alpha)) continue;  // discarded; redraw
            ++result.stats.background_accepted;
        }

        PatchSample s;
        s.tile_id = e.tile->tile_id;
        s.row = row;
        s.col = col;
        s.imagery_year = e.tile->imagery_year;
        s.has_positive = positive;
        if (cfg.rotation_augment) {
            s.rotation_deg = static_cast<int>(rng.next_below(8)) * 45;
            s.hflip = rng.next_bernoulli(0.5);
            s.vflip = rng.next_bernoulli(0.5);
        }
        result.samples.push_back(std::move(s));
    }
    return result;
}

std::vector<TemporalPair> temporal_pairs(const TemporalPairing& pairing,
                                         const std::vector<std::string>& barns_in_tile) {
    std::vector<TemporalPair> out;
    switch (pairing.mode) {
        case TemporalMode::single:
            out.push_back({pairing.label_year, true});
            return out;
        case TemporalMode::all:
            for (int y : pairing.imagery_years) out.push_back({y, true});
            return out;
        case TemporalMode::augmented:
            break;
    }

    // Latest construction year among the tile's barns gates mask validity.
    int latest = pairing.label_year;
    bool any = false;
    for (const std::string& barn : barns_in_tile) {
        const auto it = pairing.construction_years.find(barn);
        if (it == pairing.construction_years.end()) {
            throw std::invalid_argument("temporal_pairs: barn '" + barn +
                                        "' has no construction year estimate");
        }
        latest = any ? std::max(latest, it->second) : it->second;
        any = true;
    }
    for (int y : pairing.imagery_years) {
        out.push_back({y, !any || y >= latest});
    }
    return out;
}

namespace {

RasterTile rotate90_multiple(const RasterTile& patch, int quarter_turns) {
    const int n = patch.width();
    RasterTile out(n, n, patch.bands(), patch.dtype());
    out.geo = patch.geo;
    out.timestamp = patch.timestamp;
    for (int b = 0; b < patch.bands(); ++b) {
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                int sr = r, sc = c;
                switch (quarter_turns) {
                    case 1: sr = c; sc = n - 1 - r; break;          // 90 CCW
                    case 2: sr = n - 1 - r; sc = n - 1 - c; break;  // 180
                    case 3: sr = n - 1 - c; sc = r; break;          // 270 CCW
                    default: break;
                }
                if (patch.dtype() == Dtype::f32) {
                    out.f32_at(b, r, c) = patch.f32_at(b, sr, sc);
                } else {
                    out.u8_at(b, r, c) = patch.u8_at(b, sr, sc);
                }
            }
        }
    }
    return out;
}

RasterTile rotate_nn(const RasterTile& patch, int degrees, int out_size) {
    const int in = patch.width();
    RasterTile out(out_size, out_size, patch.bands(), patch.dtype());
    out.geo = patch.geo;
    out.timestamp = patch.timestamp;
    const double rad = degrees * M_PI / 180.0;
    const double cu = std::cos(rad), su = std::sin(rad);
    const double in_c = 0.5 * in;
    const double out_c = 0.5 * out_size;
    for (int r = 0; r < out_size; ++r) {
        for (int c = 0; c < out_size; ++c) {
            // Inverse-rotate the output pixel center into source coordinates.
            const double dy = r + 0.5 - out_c;
            const double dx = c + 0.5 - out_c;
            const double sx = cu * dx - su * dy + in_c;
            const double sy = su * dx + cu * dy + in_c;
            const int sr = static_cast<int>(std::floor(sy));
            const int sc = static_cast<int>(std::floor(sx));
            const bool inside = sr >= 0 && sr < in && sc >= 0 && sc < in;
            for (int b = 0; b < patch.bands(); ++b) {
                if (patch.dtype() == Dtype::f32) {
                    out.f32_at(b, r, c) = inside ? patch.f32_at(b, sr, sc) : 0.0f;
                } else {
                    out.u8_at(b, r, c) = inside ? patch.u8_at(b, sr, sc) : 0;
                }
            }
        }
    }
    return out;
}

RasterTile flip(const RasterTile& patch, bool horizontal, bool vertical) {
    RasterTile out(patch.width(), patch.height(), patch.bands(), patch.dtype());
    out.geo = patch.geo;
    out.timestamp = patch.timestamp;
    for (int b = 0; b < patch.bands(); ++b) {
        for (int r = 0; r < patch.height(); ++r) {
            for (int c = 0; c < patch.width(); ++c) {
                const int sr = vertical ? patch.height() - 1 - r : r;
                const int sc = horizontal ? patch.width() - 1 - c : c;
                if (patch.dtype() == Dtype::f32) {
                    out.f32_at(b, r, c) = patch.f32_at(b, sr, sc);
                } else {
                    out.u8_at(b, r, c) = patch.u8_at(b, sr, sc);
                }
            }
        }
    }
    return out;
}

}  // namespace

RasterTile apply_augmentation(const RasterTile& patch, const PatchSample& sample, int out_size) {
    int rot = sample.rotation_deg % 360;
    if (rot < 0) rot += 360;
    if (rot % 45 != 0) throw std::invalid_argument("apply_augmentation: rotation must be a 45-degree multiple");
    if (rot != 0 && patch.width() != patch.height()) {
        throw std::invalid_argument("apply_augmentation: rotations require a square patch");
    }
    if (out_size <= 0) out_size = std::min(patch.width(), patch.height());

    RasterTile rotated;
    if (rot % 90 == 0) {
        rotated = rotate90_multiple(patch, rot / 90);
    } else {
        rotated = rotate_nn(patch, rot, out_size);
    }
    if (!sample.hflip && !sample.vflip) return rotated;
    return flip(rotated, sample.hflip, sample.vflip);
}

}  // namespace barnmap
