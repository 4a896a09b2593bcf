#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "barnmap/geometry.hpp"

namespace barnmap {

// Affine map between pixel indices and projected coordinates in meters.
// Pixel (row r, col c) top-left corner sits at
//   (origin_x + c * pixel_width, origin_y - r * pixel_height).
struct Geotransform {
    double origin_x = 0.0;
    double origin_y = 0.0;
    double pixel_width = 1.0;   // meters per pixel, > 0
    double pixel_height = 1.0;  // meters per pixel, > 0
    std::string crs = "EPSG:5070";

    Point pixel_to_geo(double row, double col) const {
        return {origin_x + col * pixel_width, origin_y - row * pixel_height};
    }
    // Inverse of pixel_to_geo; returns fractional (row, col).
    std::pair<double, double> geo_to_pixel(Point p) const {
        return {(origin_y - p.y) / pixel_height, (p.x - origin_x) / pixel_width};
    }

    void validate() const;  // throws on non-positive pixel size or degree CRS
};

enum class Dtype : std::uint8_t { u8, f32 };

const char* dtype_name(Dtype d);
Dtype dtype_from_name(const std::string& name);

// Georeferenced pixel grid, row-major and band-sequential (planar). One
// buffer is populated according to dtype.
class RasterTile {
public:
    RasterTile() = default;
    RasterTile(int width, int height, int bands, Dtype dtype);

    int width() const { return width_; }
    int height() const { return height_; }
    int bands() const { return bands_; }
    Dtype dtype() const { return dtype_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
    std::size_t value_count() const { return pixel_count() * bands_; }

    Geotransform geo;
    std::optional<int> timestamp;  // imagery year

    float& f32_at(int band, int row, int col) { return f32_[index(band, row, col)]; }
    float f32_at(int band, int row, int col) const { return f32_[index(band, row, col)]; }
    std::uint8_t& u8_at(int band, int row, int col) { return u8_[index(band, row, col)]; }
    std::uint8_t u8_at(int band, int row, int col) const { return u8_[index(band, row, col)]; }

    // dtype-agnostic read (u8 returned as its numeric value, not rescaled).
    double value(int band, int row, int col) const {
        return dtype_ == Dtype::f32 ? static_cast<double>(f32_[index(band, row, col)])
                                    : static_cast<double>(u8_[index(band, row, col)]);
    }

    std::span<float> f32_data() { return f32_; }
    std::span<const float> f32_data() const { return f32_; }
    std::span<std::uint8_t> u8_data() { return u8_; }
    std::span<const std::uint8_t> u8_data() const { return u8_; }

    std::size_t index(int band, int row, int col) const {
        return (static_cast<std::size_t>(band) * height_ + row) * width_ + col;
    }

private:
    int width_ = 0;
    int height_ = 0;
    int bands_ = 0;
    Dtype dtype_ = Dtype::f32;
    std::vector<float> f32_;
    std::vector<std::uint8_t> u8_;
};

// Raster container on disk: little-endian binary payload `<stem>.bin` plus a
// JSON sidecar `<stem>.json` holding width/height/bands/dtype/geotransform/
// crs/timestamp. read/write round-trips are byte identical.
RasterTile read_raster(const std::string& payload_path);
void write_raster(const RasterTile& tile, const std::string& payload_path);

// Sidecar-only read for dimensions and georeferencing.
struct RasterHeader {
    int width = 0;
    int height = 0;
    int bands = 0;
    Dtype dtype = Dtype::f32;
    Geotransform geo;
    std::optional<int> timestamp;
};
RasterHeader read_raster_header(const std::string& payload_path);
std::string sidecar_path(const std::string& payload_path);

struct PatchOrigin {
    int row = 0;
    int col = 0;
    bool operator==(const PatchOrigin&) const = default;
};

// Row-major grid of patch origins with a fixed stride of
// patch_size - overlap; the last origin per axis is clamped so the patch
// ends exactly at the tile edge. Every pixel is covered by at least one
// patch.
struct PatchGrid {
    int patch_size = 256;
    int overlap = 64;
    std::vector<PatchOrigin> origins;
};

PatchGrid make_patch_grid(int width, int height, int patch_size = 256, int overlap = 64);

// Extract one band-complete patch (any dtype) as f32 values.
RasterTile extract_patch(const RasterTile& tile, PatchOrigin origin, int patch_size);

// Overlap-averaged stitching of probability patches. Accumulates sums and
// coverage counts in double precision so constant inputs come back bit-equal.
class Stitcher {
public:
    Stitcher(int width, int height);

    // patch holds patch_size*patch_size probabilities, row-major.
    void add(PatchOrigin origin, std::span<const float> patch, int patch_size);

    // Per-pixel arithmetic mean over covering patches.
    RasterTile finalize(const Geotransform& geo) const;

    int width() const { return width_; }
    int height() const { return height_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> sum_;
    std::vector<std::uint32_t> count_;
};

// One-call form used when all patches are already materialized.
RasterTile stitch(const std::vector<std::pair<PatchOrigin, std::vector<float>>>& patches,
                  int width, int height, int patch_size, const Geotransform& geo);

}  // namespace barnmap
