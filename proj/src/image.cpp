#include "imvb7/image.hpp"

#include <cctype>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "imvb7/errors.hpp"
#include "imvb7/kernels.hpp"
#include "imvb7/util.hpp"

namespace imvb7 {

namespace {

bool is_ppm_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Whitespace-and-comment tokenizer for PPM headers and P3 payloads.
class PpmReader {
public:
  explicit PpmReader(const std::string& bytes) : bytes_(bytes) {}

  bool skip_separators() {
    bool skipped = false;
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (is_ppm_space(c)) {
        ++pos_;
        skipped = true;
      } else if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
        skipped = true;
      } else {
        break;
      }
    }
    return skipped;
  }

  std::string next_token() {
    skip_separators();
    std::string token;
    while (pos_ < bytes_.size() && !is_ppm_space(bytes_[pos_]) && bytes_[pos_] != '#') {
      token.push_back(bytes_[pos_++]);
    }
    return token;
  }

  // P6 payload begins after exactly one whitespace byte.
  void consume_single_space() {
    if (pos_ >= bytes_.size() || !is_ppm_space(bytes_[pos_])) {
      raise(ErrorCode::BadHeader, "expected a whitespace byte before the binary payload");
    }
    ++pos_;
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

long parse_header_number(const std::string& token, const char* what) {
  if (token.empty()) raise(ErrorCode::BadHeader, std::string("missing ") + what);
  for (char c : token) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      raise(ErrorCode::BadHeader, std::string("bad ") + what + " '" + token + "'");
    }
  }
  if (token.size() > 9) raise(ErrorCode::BadHeader, std::string(what) + " out of range");
  return std::stol(token);
}

} // namespace

RasterImage parse_ppm(const std::string& bytes) {
  PpmReader reader(bytes);
  const std::string magic = reader.next_token();
  if (magic != "P3" && magic != "P6") {
    raise(ErrorCode::BadMagic, "'" + magic + "' is not a P3/P6 magic");
  }
  const long width = parse_header_number(reader.next_token(), "width");
  const long height = parse_header_number(reader.next_token(), "height");
  const long maxval = parse_header_number(reader.next_token(), "maxval");
  if (maxval != 255) {
    raise(ErrorCode::MaxvalUnsupported, "maxval " + std::to_string(maxval) + " (only 255)");
  }

  RasterImage image;
  image.width = static_cast<int>(width);
  image.height = static_cast<int>(height);
  const std::size_t payload = 3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height);

  if (magic == "P6") {
    reader.consume_single_space();
    if (reader.remaining() < payload) {
      raise(ErrorCode::TruncatedPixelData,
            "payload holds " + std::to_string(reader.remaining()) + " of " +
                std::to_string(payload) + " bytes");
    }
    image.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(reader.position()),
                      bytes.begin() + static_cast<std::ptrdiff_t>(reader.position() + payload));
    return image;
  }

  image.data.reserve(payload);
  for (std::size_t i = 0; i < payload; ++i) {
    const std::string token = reader.next_token();
    if (token.empty()) {
      raise(ErrorCode::TruncatedPixelData,
            "pixel data ends after " + std::to_string(i) + " of " + std::to_string(payload) +
                " samples");
    }
    for (char c : token) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        raise(ErrorCode::BadHeader, "bad pixel sample '" + token + "'");
      }
    }
    if (token.size() > 3) raise(ErrorCode::BadHeader, "pixel sample '" + token + "' exceeds 255");
    const long value = std::stol(token);
    if (value > 255) raise(ErrorCode::BadHeader, "pixel sample '" + token + "' exceeds 255");
    image.data.push_back(static_cast<std::uint8_t>(value));
  }
  return image;
}

std::string write_ppm(const RasterImage& image, PpmFormat format) {
  if (image.data.size() != 3 * static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height)) {
    raise(ErrorCode::Internal, "raster data does not match its dimensions");
  }
  std::string out = format == PpmFormat::P6 ? "P6\n" : "P3\n";
  out += std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  if (format == PpmFormat::P6) {
    out.append(reinterpret_cast<const char*>(image.data.data()), image.data.size());
    return out;
  }
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    const auto px = image.pixel(i);
    out += std::to_string(px[0]) + " " + std::to_string(px[1]) + " " + std::to_string(px[2]) + "\n";
  }
  return out;
}

RasterImage load_ppm(const std::string& path) {
  try {
    return parse_ppm(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::FileError) throw;
    throw Error(e.code(), path + ": " + e.what());
  }
}

void validate_palette(const ColorPalette& palette) {
  if (palette.entries.empty()) raise(ErrorCode::EmptyPalette, "palette has no entries");
  std::set<std::string> labels;
  std::set<std::array<std::uint8_t, 3>> anchors;
  for (const auto& entry : palette.entries) {
    if (!labels.insert(entry.label).second) {
      raise(ErrorCode::InvalidConfig, "palette repeats label '" + entry.label + "'");
    }
    if (!anchors.insert(entry.anchor).second) {
      raise(ErrorCode::InvalidConfig, "palette anchors must be distinct");
    }
  }
}

void validate_palette_covers(const ColorPalette& palette, const AttributeSchema& schema) {
  validate_palette(palette);
  auto attr = schema.attribute_index("dominant_color");
  if (!attr) raise(ErrorCode::InvalidConfig, "schema has no dominant_color attribute");
  const auto& vocabulary = schema.attributes()[*attr].values;
  std::set<std::string> wanted(vocabulary.begin(), vocabulary.end());
  std::set<std::string> got;
  for (const auto& entry : palette.entries) got.insert(entry.label);
  if (wanted != got) {
    raise(ErrorCode::InvalidConfig,
          "palette labels must cover the dominant_color vocabulary exactly");
  }
}

ColorPalette palette_from_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ParseError, std::string("palette JSON: ") + e.what());
  }
  if (!doc.is_array()) raise(ErrorCode::ParseError, "palette JSON must be an array");
  ColorPalette palette;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("label") || !item.contains("rgb") ||
        !item["label"].is_string() || !item["rgb"].is_array() || item["rgb"].size() != 3) {
      raise(ErrorCode::ParseError, "palette entries need a label and an [r,g,b] triple");
    }
    PaletteEntry entry;
    entry.label = item["label"].get<std::string>();
    for (int c = 0; c < 3; ++c) {
      const auto& v = item["rgb"][c];
      if (!v.is_number_integer() || v.get<long>() < 0 || v.get<long>() > 255) {
        raise(ErrorCode::ParseError, "palette channels must be integers in [0,255]");
      }
      entry.anchor[static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(v.get<long>());
    }
    palette.entries.push_back(std::move(entry));
  }
  validate_palette(palette);
  return palette;
}

ColorPalette load_palette(const std::string& path) {
  return palette_from_json(read_file(path));
}

std::string palette_to_json(const ColorPalette& palette) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& entry : palette.entries) {
    nlohmann::ordered_json item;
    item["label"] = entry.label;
    item["rgb"] = {entry.anchor[0], entry.anchor[1], entry.anchor[2]};
    doc.push_back(item);
  }
  return doc.dump(2) + "\n";
}

std::string dominant_color(const RasterImage& image, const ColorPalette& palette,
                           std::size_t k, std::uint64_t seed) {
  (void)seed; // initialization is pinned to the first k distinct pixels
  if (image.pixel_count() == 0) raise(ErrorCode::EmptyImage, "cannot cluster an empty image");
  validate_palette(palette);
  if (k < 1) raise(ErrorCode::InvalidConfig, "k must be at least 1");

  const std::size_t n = image.pixel_count();

  // Seed centroids with the first k distinct colors in row-major order,
  // cycling through them when the image has fewer distinct colors than k.
  std::vector<std::array<std::uint8_t, 3>> distinct;
  std::set<std::array<std::uint8_t, 3>> seen;
  for (std::size_t i = 0; i < n && distinct.size() < k; ++i) {
    auto px = image.pixel(i);
    if (seen.insert(px).second) distinct.push_back(px);
  }
  std::vector<double> centroids(3 * k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& px = distinct[j % distinct.size()];
    centroids[3 * j] = px[0];
    centroids[3 * j + 1] = px[1];
    centroids[3 * j + 2] = px[2];
  }

  constexpr int kMaxIterations = 50;
  std::vector<std::uint32_t> assignment(n), previous(n);
  std::vector<std::uint64_t> sums(3 * k);
  std::vector<std::uint64_t> counts(k);
  for (int iteration = 0; iteration < kMaxIterations; ++iteration) {
    kernels::assign_nearest(image.data.data(), n, centroids.data(), k, assignment.data());
    if (iteration > 0 && assignment == previous) break;
    previous = assignment;

    std::fill(sums.begin(), sums.end(), 0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t c = assignment[i];
      sums[3 * c] += image.data[3 * i];
      sums[3 * c + 1] += image.data[3 * i + 1];
      sums[3 * c + 2] += image.data[3 * i + 2];
      counts[c] += 1;
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) continue; // empty cluster keeps its centroid
      centroids[3 * j] = static_cast<double>(sums[3 * j]) / static_cast<double>(counts[j]);
      centroids[3 * j + 1] = static_cast<double>(sums[3 * j + 1]) / static_cast<double>(counts[j]);
      centroids[3 * j + 2] = static_cast<double>(sums[3 * j + 2]) / static_cast<double>(counts[j]);
    }
  }

  // Most populous cluster; ties go to the lower cluster index.
  std::fill(counts.begin(), counts.end(), 0);
  for (std::size_t i = 0; i < n; ++i) counts[assignment[i]] += 1;
  std::size_t top = 0;
  for (std::size_t j = 1; j < k; ++j) {
    if (counts[j] > counts[top]) top = j;
  }

  // Nearest palette anchor; ties go to the earlier entry.
  const double cr = centroids[3 * top];
  const double cg = centroids[3 * top + 1];
  const double cb = centroids[3 * top + 2];
  std::size_t best_entry = 0;
  double best = 0.0;
  for (std::size_t e = 0; e < palette.entries.size(); ++e) {
    const auto& anchor = palette.entries[e].anchor;
    const double dr = cr - static_cast<double>(anchor[0]);
    const double dg = cg - static_cast<double>(anchor[1]);
    const double db = cb - static_cast<double>(anchor[2]);
    const double d = (dr * dr + dg * dg) + db * db;
    if (e == 0 || d < best) {
      best = d;
      best_entry = e;
    }
  }
  return palette.entries[best_entry].label;
}

std::vector<double> rgb_histogram(const RasterImage& image, int bins_per_channel) {
  if (image.pixel_count() == 0) raise(ErrorCode::EmptyImage, "cannot histogram an empty image");
  if (bins_per_channel < 1) raise(ErrorCode::InvalidConfig, "bins_per_channel must be >= 1");
  if (bins_per_channel > 256) {
    raise(ErrorCode::InvalidConfig, "bins_per_channel above 256 only adds empty cells");
  }
  const auto b = static_cast<std::size_t>(bins_per_channel);
  std::vector<std::uint64_t> counts(b * b * b, 0);
  kernels::histogram_counts(image.data.data(), image.pixel_count(), bins_per_channel,
                            counts.data());
  std::vector<double> histogram(counts.size());
  const auto total = static_cast<double>(image.pixel_count());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    histogram[i] = static_cast<double>(counts[i]) / total;
  }
  return histogram;
}

} // namespace imvb7
