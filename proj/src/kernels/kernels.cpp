#include "imvb7/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "imvb7/errors.hpp"

namespace imvb7::kernels {

const char* backend_name(Backend backend) {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

Backend detected_backend() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") ? Backend::avx2 : Backend::scalar;
#else
  return Backend::scalar;
#endif
}

namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("IMVB7_KERNEL_BACKEND")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && detected_backend() == Backend::avx2) {
      return Backend::avx2;
    }
  }
  return detected_backend();
}

std::atomic<Backend>& active_slot() {
  static std::atomic<Backend> slot{initial_backend()};
  return slot;
}

} // namespace

Backend active_backend() { return active_slot().load(); }

void set_backend(Backend backend) {
  if (backend == Backend::avx2 && detected_backend() != Backend::avx2) {
    raise(ErrorCode::InvalidConfig, "this CPU does not support the avx2 backend");
  }
  active_slot().store(backend);
}

namespace detail {

void assign_nearest_scalar(const std::uint8_t* rgb, std::size_t n,
                           const double* centroids, std::size_t k, std::uint32_t* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double pr = static_cast<double>(rgb[3 * i]);
    const double pg = static_cast<double>(rgb[3 * i + 1]);
    const double pb = static_cast<double>(rgb[3 * i + 2]);
    std::uint32_t best_index = 0;
    double best = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double dr = pr - centroids[3 * j];
      const double dg = pg - centroids[3 * j + 1];
      const double db = pb - centroids[3 * j + 2];
      // Fixed evaluation order; the AVX2 variant mirrors it exactly.
      const double d = (dr * dr + dg * dg) + db * db;
      if (j == 0 || d < best) {
        best = d;
        best_index = static_cast<std::uint32_t>(j);
      }
    }
    out[i] = best_index;
  }
}

void histogram_counts_scalar(const std::uint8_t* rgb, std::size_t n, int bins,
                             std::uint64_t* counts) {
  const std::uint32_t b = static_cast<std::uint32_t>(bins);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t r = (rgb[3 * i] * b) >> 8;
    const std::uint32_t g = (rgb[3 * i + 1] * b) >> 8;
    const std::uint32_t bl = (rgb[3 * i + 2] * b) >> 8;
    counts[(r * b + g) * b + bl] += 1;
  }
}

} // namespace detail

void assign_nearest(const std::uint8_t* rgb, std::size_t n,
                    const double* centroids, std::size_t k, std::uint32_t* out) {
  if (k == 0) raise(ErrorCode::Internal, "assign_nearest needs at least one centroid");
  if (active_backend() == Backend::avx2) {
    detail::assign_nearest_avx2(rgb, n, centroids, k, out);
  } else {
    detail::assign_nearest_scalar(rgb, n, centroids, k, out);
  }
}

void histogram_counts(const std::uint8_t* rgb, std::size_t n, int bins,
                      std::uint64_t* counts) {
  if (bins < 1) raise(ErrorCode::Internal, "histogram_counts needs bins >= 1");
  if (active_backend() == Backend::avx2) {
    detail::histogram_counts_avx2(rgb, n, bins, counts);
  } else {
    detail::histogram_counts_scalar(rgb, n, bins, counts);
  }
}

} // namespace imvb7::kernels
