#include "barnmap/raster.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace barnmap {

static_assert(std::endian::native == std::endian::little,
              "raster payloads are little-endian; big-endian hosts are unsupported");

namespace {

// Degree-based CRSs break every distance/area computation downstream, so the
// common geographic codes are rejected outright at load time.
const char* kGeographicCrs[] = {"EPSG:4326", "EPSG:4269", "EPSG:4267", "EPSG:4258", "EPSG:4979"};

}  // namespace

void Geotransform::validate() const {
    if (!(pixel_width > 0.0) || !(pixel_height > 0.0)) {
        throw std::invalid_argument("geotransform: pixel sizes must be positive");
    }
    for (const char* code : kGeographicCrs) {
        if (crs == code) {
            throw std::invalid_argument("geotransform: geographic (degree) CRS " + crs +
                                        " is not supported; reproject to a meter CRS");
        }
    }
}

const char* dtype_name(Dtype d) { return d == Dtype::u8 ? "u8" : "f32"; }

Dtype dtype_from_name(const std::string& name) {
    if (name == "u8") return Dtype::u8;
    if (name == "f32") return Dtype::f32;
    throw std::invalid_argument("unknown raster dtype '" + name + "' (expected u8 or f32)");
}

RasterTile::RasterTile(int width, int height, int bands, Dtype dtype)
    : width_(width), height_(height), bands_(bands), dtype_(dtype) {
    if (width <= 0 || height <= 0 || bands <= 0) {
        throw std::invalid_argument("raster dimensions must be positive");
    }
    if (dtype_ == Dtype::f32) {
        f32_.assign(value_count(), 0.0f);
    } else {
        u8_.assign(value_count(), 0);
    }
}

std::string sidecar_path(const std::string& payload_path) {
    const auto slash = payload_path.find_last_of('/');
    const auto dot = payload_path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return payload_path + ".json";
    }
    return payload_path.substr(0, dot) + ".json";
}

RasterHeader read_raster_header(const std::string& payload_path) {
    const std::string header_path = sidecar_path(payload_path);
    std::ifstream in(header_path);
    if (!in) throw std::runtime_error("missing raster sidecar header: " + header_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed raster header " + header_path + ": " + e.what());
    }

    RasterHeader h;
    try {
        h.width = j.at("width").get<int>();
        h.height = j.at("height").get<int>();
        h.bands = j.at("bands").get<int>();
        h.dtype = dtype_from_name(j.at("dtype").get<std::string>());
        const auto& gt = j.at("geotransform");
        if (!gt.is_array() || gt.size() != 6) {
            throw std::runtime_error("geotransform must be a 6-element array");
        }
        h.geo.origin_x = gt[0].get<double>();
        h.geo.pixel_width = gt[1].get<double>();
        h.geo.origin_y = gt[3].get<double>();
        h.geo.pixel_height = -gt[5].get<double>();
        h.geo.crs = j.at("crs").get<std::string>();
        if (j.contains("timestamp") && !j["timestamp"].is_null()) {
            h.timestamp = j["timestamp"].get<int>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed raster header " + header_path + ": " + e.what());
    }
    if (h.width <= 0 || h.height <= 0 || h.bands <= 0) {
        throw std::runtime_error("malformed raster header " + header_path + ": non-positive dimensions");
    }
    h.geo.validate();
    return h;
}

RasterTile read_raster(const std::string& payload_path) {
    const RasterHeader h = read_raster_header(payload_path);

    std::ifstream in(payload_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open raster payload: " + payload_path);
    in.seekg(0, std::ios::end);
    const std::streamoff size = in.tellg();
    in.seekg(0, std::ios::beg);

    RasterTile tile(h.width, h.height, h.bands, h.dtype);
    tile.geo = h.geo;
    tile.timestamp = h.timestamp;

    const std::size_t value_size = h.dtype == Dtype::f32 ? 4 : 1;
    const std::size_t expected = tile.value_count() * value_size;
    if (static_cast<std::size_t>(size) != expected) {
        throw std::runtime_error("raster payload length mismatch for " + payload_path + ": header implies " +
                                 std::to_string(expected) + " bytes, file has " + std::to_string(size));
    }
    if (h.dtype == Dtype::f32) {
        in.read(reinterpret_cast<char*>(tile.f32_data().data()), static_cast<std::streamsize>(expected));
    } else {
        in.read(reinterpret_cast<char*>(tile.u8_data().data()), static_cast<std::streamsize>(expected));
    }
    if (!in) throw std::runtime_error("short read on raster payload: " + payload_path);
    return tile;
}

void write_raster(const RasterTile& tile, const std::string& payload_path) {
    tile.geo.validate();

    nlohmann::json j;
    j["width"] = tile.width();
    j["height"] = tile.height();
    j["bands"] = tile.bands();
    j["dtype"] = dtype_name(tile.dtype());
    j["geotransform"] = {tile.geo.origin_x, tile.geo.pixel_width, 0.0,
                         tile.geo.origin_y, 0.0, -tile.geo.pixel_height};
    j["crs"] = tile.geo.crs;
    if (tile.timestamp) {
        j["timestamp"] = *tile.timestamp;
    } else {
        j["timestamp"] = nullptr;
    }

    std::ofstream header(sidecar_path(payload_path));
    if (!header) throw std::runtime_error("cannot write raster sidecar: " + sidecar_path(payload_path));
    header << j.dump(2) << "\n";

    std::ofstream out(payload_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write raster payload: " + payload_path);
    if (tile.dtype() == Dtype::f32) {
        out.write(reinterpret_cast<const char*>(tile.f32_data().data()),
                  static_cast<std::streamsize>(tile.value_count() * 4));
    } else {
        out.write(reinterpret_cast<const char*>(tile.u8_data().data()),
                  static_cast<std::streamsize>(tile.value_count()));
    }
    if (!out) throw std::runtime_error("short write on raster payload: " + payload_path);
}

PatchGrid make_patch_grid(int width, int height, int patch_size, int overlap) {
    if (overlap < 0 || patch_size <= overlap) {
        throw std::invalid_argument("make_patch_grid: need patch_size > overlap >= 0");
    }
    if (width < patch_size || height < patch_size) {
        throw std::invalid_argument("make_patch_grid: tile smaller than one patch");
    }
    const int stride = patch_size - overlap;
    auto axis_origins = [&](int dim) {
        std::vector<int> out;
        for (int o = 0;; o += stride) {
            if (o + patch_size >= dim) {
                out.push_back(dim - patch_size);  // clamp to the edge
                break;
            }
            out.push_back(o);
        }
        return out;
    };

    PatchGrid grid;
    grid.patch_size = patch_size;
    grid.overlap = overlap;
    const std::vector<int> rows = axis_origins(height);
    const std::vector<int> cols = axis_origins(width);
    grid.origins.reserve(rows.size() * cols.size());
    for (int r : rows) {
        for (int c : cols) grid.origins.push_back({r, c});
    }
    return grid;
}

RasterTile extract_patch(const RasterTile& tile, PatchOrigin origin, int patch_size) {
    if (origin.row < 0 || origin.col < 0 || origin.row + patch_size > tile.height() ||
        origin.col + patch_size > tile.width()) {
        throw std::invalid_argument("extract_patch: origin outside tile");
    }
    RasterTile patch(patch_size, patch_size, tile.bands(), Dtype::f32);
    patch.geo = tile.geo;
    patch.geo.origin_x = tile.geo.pixel_to_geo(origin.row, origin.col).x;
    patch.geo.origin_y = tile.geo.pixel_to_geo(origin.row, origin.col).y;
    patch.timestamp = tile.timestamp;
    for (int b = 0; b < tile.bands(); ++b) {
        for (int r = 0; r < patch_size; ++r) {
            for (int c = 0; c < patch_size; ++c) {
                patch.f32_at(b, r, c) = static_cast<float>(tile.value(b, origin.row + r, origin.col + c));
            }
        }
    }
    return patch;
}

Stitcher::Stitcher(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("stitcher: dimensions must be positive");
    sum_.assign(static_cast<std::size_t>(width) * height, 0.0);
    count_.assign(static_cast<std::size_t>(width) * height, 0);
}

void Stitcher::add(PatchOrigin origin, std::span<const float> patch, int patch_size) {
    if (origin.row < 0 || origin.col < 0 || origin.row + patch_size > height_ ||
        origin.col + patch_size > width_) {
        throw std::invalid_argument("stitch: patch origin outside tile");
    }
    if (patch.size() != static_cast<std::size_t>(patch_size) * patch_size) {
        throw std::invalid_argument("stitch: patch has wrong shape");
    }
    for (int r = 0; r < patch_size; ++r) {
        const std::size_t base = static_cast<std::size_t>(origin.row + r) * width_ + origin.col;
        const float* src = patch.data() + static_cast<std::size_t>(r) * patch_size;
        for (int c = 0; c < patch_size; ++c) {
            sum_[base + c] += src[c];
            ++count_[base + c];
        }
    }
}

RasterTile Stitcher::finalize(const Geotransform& geo) const {
    RasterTile out(width_, height_, 1, Dtype::f32);
    out.geo = geo;
    std::span<float> data = out.f32_data();
    for (std::size_t i = 0; i < sum_.size(); ++i) {
        data[i] = count_[i] ? static_cast<float>(sum_[i] / count_[i]) : 0.0f;
    }
    return out;
}

RasterTile stitch(const std::vector<std::pair<PatchOrigin, std::vector<float>>>& patches,
                  int width, int height, int patch_size, const Geotransform& geo) {
    Stitcher acc(width, height);
    for (const auto& [origin, values] : patches) acc.add(origin, values, patch_size);
    return acc.finalize(geo);
}

}  // namespace barnmap
