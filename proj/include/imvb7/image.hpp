#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "imvb7/schema.hpp"

namespace imvb7 {

// Row-major 8-bit RGB raster.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data; // interleaved RGB, 3 * width * height bytes

  std::size_t pixel_count() const { return data.size() / 3; }
  std::array<std::uint8_t, 3> pixel(std::size_t index) const {
    return {data[3 * index], data[3 * index + 1], data[3 * index + 2]};
  }

  bool operator==(const RasterImage&) const = default;
};

enum class PpmFormat { P3, P6 };

// PPM reader: P3 (ASCII) and P6 (binary), maxval 255 only, `#` comments
// allowed in the header. Pixel data round-trips bit-exactly.
RasterImage parse_ppm(const std::string& bytes);
std::string write_ppm(const RasterImage& image, PpmFormat format);
RasterImage load_ppm(const std::string& path);

struct PaletteEntry {
  std::string label;
  std::array<std::uint8_t, 3> anchor;
};

// Named anchor colors; dominant_color maps a cluster centroid to the label
// of the nearest anchor.
struct ColorPalette {
  std::vector<PaletteEntry> entries;
};

// Raises EmptyPalette / InvalidConfig (duplicate labels or anchors).
void validate_palette(const ColorPalette& palette);
// Additionally requires the labels to cover the schema's dominant_color
// vocabulary exactly.
void validate_palette_covers(const ColorPalette& palette, const AttributeSchema& schema);

/// Palette file: JSON array of {"label": ..., "rgb": [r, g, b]}.
ColorPalette load_palette(const std::string& path);
ColorPalette palette_from_json(const std::string& json_text);
std::string palette_to_json(const ColorPalette& palette);

// K-means in RGB space (centroids seeded from the first k distinct pixels
// in row-major order, at most 50 iterations, assignments-stable stop, empty
// clusters keep their centroid), then the label of the palette anchor
// nearest the most populous cluster's centroid. The fixed initialization
// makes the result independent of `seed`; the parameter is kept so callers
// can pin it in configs.
std::string dominant_color(const RasterImage& image, const ColorPalette& palette,
                           std::size_t k, std::uint64_t seed);

// Normalized color histogram with bins_per_channel^3 cells; cells index as
// (r_bin * b + g_bin) * b + b_bin with channel bin floor(c*b/256).
std::vector<double> rgb_histogram(const RasterImage& image, int bins_per_channel);

} // namespace imvb7
