#include "imvb7/util.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "imvb7/errors.hpp"

namespace imvb7 {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 finalizer; decorrelates (master, stream) pairs well enough
  // for sub-stream seeding.
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t DeterministicRng::below(std::uint64_t bound) {
  if (bound == 0) raise(ErrorCode::Internal, "bounded draw with bound 0");
  // Rejection sampling keeps the draw unbiased and fully specified.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t value;
  do {
    value = engine_();
  } while (value >= limit);
  return value % bound;
}

double DeterministicRng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::string format_double(double value) {
  // Shortest %g rendering that parses back to the same bits; scanning every
  // precision matters because e.g. 10.0 round-trips as "1e+01" at precision
  // 1 but has the shorter exact form "10" at precision 2.
  char buffer[64];
  std::string best;
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    if (std::strtod(buffer, nullptr) != value) continue;
    if (best.empty() || std::char_traits<char>::length(buffer) < best.size()) best = buffer;
  }
  return best;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::FileError, "cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) raise(ErrorCode::FileError, "read failed on " + path);
  return out.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::FileError, "cannot open " + path + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) raise(ErrorCode::FileError, "write failed on " + path);
}

std::vector<std::string> split_string(const std::string& text, char delim) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == delim) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

std::string join_strings(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

} // namespace imvb7
