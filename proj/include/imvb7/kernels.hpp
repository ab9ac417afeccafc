#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace imvb7::kernels {

// Pixel-loop kernels behind the image feature extractors. Each kernel has a
// scalar reference implementation and an AVX2 variant; the active one is
// chosen at runtime. All variants are bit-exact equivalents: same inputs,
// identical outputs, on every backend. Floating-point work is plain
// IEEE-754 double mul/add in a fixed per-pixel order (no FMA), so lane
// width cannot change a result.
enum class Backend { scalar, avx2 };

const char* backend_name(Backend backend);

// Best backend this CPU supports.
Backend detected_backend();

// The backend used by the dispatching entry points below. Defaults to
// detected_backend(), overridable with IMVB7_KERNEL_BACKEND=scalar|avx2.
Backend active_backend();

// Raises InvalidConfig when the CPU lacks the requested backend.
void set_backend(Backend backend);

// For each pixel, the index of the nearest centroid by squared Euclidean
// distance in RGB space; ties go to the lower centroid index.
//   rgb:       n interleaved 8-bit RGB triples
//   centroids: k triples of doubles
//   out:       n centroid indices
void assign_nearest(const std::uint8_t* rgb, std::size_t n,
                    const double* centroids, std::size_t k, std::uint32_t* out);

// Accumulates counts over bins^3 cells; the cell of a pixel is
//   (r*bins/256)*bins^2 + (g*bins/256)*bins + (b*bins/256)
// with integer truncation. counts must hold bins^3 zeroed entries (or a
// running total to add onto).
void histogram_counts(const std::uint8_t* rgb, std::size_t n, int bins,
                      std::uint64_t* counts);

namespace detail {
void assign_nearest_scalar(const std::uint8_t* rgb, std::size_t n,
                           const double* centroids, std::size_t k, std::uint32_t* out);
void histogram_counts_scalar(const std::uint8_t* rgb, std::size_t n, int bins,
                             std::uint64_t* counts);
void assign_nearest_avx2(const std::uint8_t* rgb, std::size_t n,
                         const double* centroids, std::size_t k, std::uint32_t* out);
void histogram_counts_avx2(const std::uint8_t* rgb, std::size_t n, int bins,
                           std::uint64_t* counts);
} // namespace detail

} // namespace imvb7::kernels
