#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace imvb7 {

// Deterministic sub-seed derivation (splitmix64 over master ^ stream id).
// Every seeded stage derives its own stream so results do not depend on how
// many draws earlier stages consumed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Seeded RNG with platform-independent bounded draws. std::shuffle and the
// std distributions are implementation-defined, so all sampling goes
// through this wrapper instead.
class DeterministicRng {
public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform draw in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  double uniform01(); // 53-bit uniform in [0,1)

  template <typename T>
  void shuffle(std::vector<T>& items) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
      std::size_t j = static_cast<std::size_t>(below(i + 1));
      std::swap(items[i], items[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

// Shortest decimal rendering that parses back to exactly the same double.
std::string format_double(double value);

// Whole-file read/write; failures raise FileError.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// Split on a delimiter, keeping empty fields.
std::vector<std::string> split_string(const std::string& text, char delim);

std::string join_strings(const std::vector<std::string>& parts, const std::string& sep);

} // namespace imvb7
