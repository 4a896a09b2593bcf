#include "barnmap/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "barnmap/rng.hpp"

namespace barnmap {

void ScorerConfig::validate() const {
    if (oracle_noise < 0.0 || oracle_noise >= 0.5) {
        throw std::invalid_argument("scorer: oracle_noise must be in [0, 0.5)");
    }
    if (oracle_flip_rate < 0.0 || oracle_flip_rate >= 1.0) {
        throw std::invalid_argument("scorer: oracle_flip_rate must be in [0, 1)");
    }
}

std::uint64_t patch_seed(std::uint64_t base_seed, const std::string& tile_id, int row, int col) {
    std::uint64_t s = mix_seed(base_seed, hash_string(tile_id.c_str()));
    s = mix_seed(s, static_cast<std::uint64_t>(static_cast<std::uint32_t>(row)));
    return mix_seed(s, static_cast<std::uint64_t>(static_cast<std::uint32_t>(col)));
}

namespace {

RasterTile score_oracle(const RasterTile& patch, const RasterTile* mask, const ScorerConfig& cfg) {
    if (mask == nullptr) throw std::invalid_argument("oracle scorer requires a truth mask");
    if (mask->width() != patch.width() || mask->height() != patch.height()) {
        throw std::invalid_argument("oracle scorer: mask dimensions do not match the patch");
    }
    if (mask->bands() != 1) throw std::invalid_argument("oracle scorer: mask must be single band");

    RasterTile out(patch.width(), patch.height(), 1, Dtype::f32);
    out.geo = patch.geo;
    out.timestamp = patch.timestamp;

    const double eps = cfg.oracle_noise;
    Rng rng(cfg.seed);
    for (int r = 0; r < patch.height(); ++r) {
        for (int c = 0; c < patch.width(); ++c) {
            const double m = mask->value(0, r, c) > 0.0 ? 1.0 : 0.0;
            double v = m * (1.0 - eps) + (1.0 - m) * eps;
            if (cfg.oracle_flip_rate > 0.0 && rng.next_bernoulli(cfg.oracle_flip_rate)) {
                v = 1.0 - v;
            }
            out.f32_at(0, r, c) = static_cast<float>(v);
        }
    }
    return out;
}

// Mean in/out contrast of an elongated rectangle footprint centered on each
// pixel, evaluated at 8 orientations and max-pooled. Offsets are precomputed
// per orientation.
struct TemplateOffsets {
    std::vector<std::pair<int, int>> inner;
    std::vector<std::pair<int, int>> outer;
};

std::vector<TemplateOffsets> build_templates() {
    constexpr double kHalfLength = 12.5;
    constexpr double kHalfWidth = 2.5;
    constexpr double kRingWidth = 3.0;
    constexpr int kOrientations = 8;

    std::vector<TemplateOffsets> out(kOrientations);
    const int reach = static_cast<int>(std::ceil(kHalfLength + kRingWidth));
    for (int k = 0; k < kOrientations; ++k) {
        const double theta = k * M_PI / kOrientations;
        const double cu = std::cos(theta), su = std::sin(theta);
        for (int dy = -reach; dy <= reach; ++dy) {
            for (int dx = -reach; dx <= reach; ++dx) {
                const double along = dx * cu + dy * su;
                const double across = -dx * su + dy * cu;
                const double a = std::abs(along), b = std::abs(across);
                if (a <= kHalfLength && b <= kHalfWidth) {
                    out[k].inner.emplace_back(dy, dx);
                } else if (a <= kHalfLength + kRingWidth && b <= kHalfWidth + kRingWidth) {
                    out[k].outer.emplace_back(dy, dx);
                }
            }
        }
    }
    return out;
}

RasterTile score_heuristic(const RasterTile& patch) {
    if (patch.bands() != 4) {
        throw std::invalid_argument("heuristic scorer requires 4-band (RGB+NIR) imagery");
    }
    static const std::vector<TemplateOffsets> templates = build_templates();

    const int h = patch.height();
    const int w = patch.width();
    const double scale = patch.dtype() == Dtype::u8 ? 1.0 / 255.0 : 1.0;

    // Grayscale brightness from the RGB bands.
    std::vector<double> gray(static_cast<std::size_t>(w) * h);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double v =
                (patch.value(0, r, c) + patch.value(1, r, c) + patch.value(2, r, c)) / 3.0;
            gray[static_cast<std::size_t>(r) * w + c] = v * scale;
        }
    }
    auto gray_at = [&](int r, int c) {
        r = std::clamp(r, 0, h - 1);
        c = std::clamp(c, 0, w - 1);
        return gray[static_cast<std::size_t>(r) * w + c];
    };

    RasterTile out(w, h, 1, Dtype::f32);
    out.geo = patch.geo;
    out.timestamp = patch.timestamp;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double best = 0.0;
            for (const TemplateOffsets& t : templates) {
                double inner = 0.0;
                for (auto [dy, dx] : t.inner) inner += gray_at(r + dy, c + dx);
                inner /= static_cast<double>(t.inner.size());
                double outer = 0.0;
                for (auto [dy, dx] : t.outer) outer += gray_at(r + dy, c + dx);
                outer /= static_cast<double>(t.outer.size());
                best = std::max(best, inner - outer);
            }
            out.f32_at(0, r, c) = static_cast<float>(std::clamp(2.0 * best, 0.0, 1.0));
        }
    }
    return out;
}

}  // namespace

RasterTile score_patch(const RasterTile& patch, const RasterTile* truth_mask,
                       const ScorerConfig& cfg) {
    cfg.validate();
    return cfg.kind == ScorerKind::oracle ? score_oracle(patch, truth_mask, cfg)
                                          : score_heuristic(patch);
}

}  // namespace barnmap
