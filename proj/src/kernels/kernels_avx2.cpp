// AVX2 variants of the pixel kernels. Compiled with -mavx2; only reached
// after the runtime CPU probe in kernels.cpp. Arithmetic mirrors the scalar
// reference op for op, so outputs are bit-identical.

#include "imvb7/kernels.hpp"

#include "imvb7/errors.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cstdint>

namespace imvb7::kernels::detail {

void assign_nearest_avx2(const std::uint8_t* rgb, std::size_t n,
                         const double* centroids, std::size_t k, std::uint32_t* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const std::uint8_t* p = rgb + 3 * i;
    const __m256d pr = _mm256_setr_pd(p[0], p[3], p[6], p[9]);
    const __m256d pg = _mm256_setr_pd(p[1], p[4], p[7], p[10]);
    const __m256d pb = _mm256_setr_pd(p[2], p[5], p[8], p[11]);

    // Centroid 0 seeds best distance, exactly like the scalar j==0 case.
    __m256d dr = _mm256_sub_pd(pr, _mm256_set1_pd(centroids[0]));
    __m256d dg = _mm256_sub_pd(pg, _mm256_set1_pd(centroids[1]));
    __m256d db = _mm256_sub_pd(pb, _mm256_set1_pd(centroids[2]));
    __m256d best = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(dr, dr), _mm256_mul_pd(dg, dg)),
        _mm256_mul_pd(db, db));
    __m256i best_index = _mm256_setzero_si256();

    for (std::size_t j = 1; j < k; ++j) {
      dr = _mm256_sub_pd(pr, _mm256_set1_pd(centroids[3 * j]));
      dg = _mm256_sub_pd(pg, _mm256_set1_pd(centroids[3 * j + 1]));
      db = _mm256_sub_pd(pb, _mm256_set1_pd(centroids[3 * j + 2]));
      const __m256d d = _mm256_add_pd(
          _mm256_add_pd(_mm256_mul_pd(dr, dr), _mm256_mul_pd(dg, dg)),
          _mm256_mul_pd(db, db));
      // Strict less-than keeps the lower index on ties.
      const __m256d lt = _mm256_cmp_pd(d, best, _CMP_LT_OQ);
      best = _mm256_blendv_pd(best, d, lt);
      const __m256i jv = _mm256_set1_epi64x(static_cast<long long>(j));
      best_index = _mm256_blendv_epi8(best_index, jv, _mm256_castpd_si256(lt));
    }

    alignas(32) long long lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), best_index);
    out[i] = static_cast<std::uint32_t>(lanes[0]);
    out[i + 1] = static_cast<std::uint32_t>(lanes[1]);
    out[i + 2] = static_cast<std::uint32_t>(lanes[2]);
    out[i + 3] = static_cast<std::uint32_t>(lanes[3]);
  }
  if (i < n) assign_nearest_scalar(rgb + 3 * i, n - i, centroids, k, out + i);
}

void histogram_counts_avx2(const std::uint8_t* rgb, std::size_t n, int bins,
                           std::uint64_t* counts) {
  // Per 128-bit lane: gather bytes {0,3,6,9}+c into zero-extended 32-bit
  // lanes, for channel offset c in {0,1,2}.
  const __m256i shuf_r = _mm256_setr_epi8(
      0, -1, -1, -1, 3, -1, -1, -1, 6, -1, -1, -1, 9, -1, -1, -1,
      0, -1, -1, -1, 3, -1, -1, -1, 6, -1, -1, -1, 9, -1, -1, -1);
  const __m256i shuf_g = _mm256_setr_epi8(
      1, -1, -1, -1, 4, -1, -1, -1, 7, -1, -1, -1, 10, -1, -1, -1,
      1, -1, -1, -1, 4, -1, -1, -1, 7, -1, -1, -1, 10, -1, -1, -1);
  const __m256i shuf_b = _mm256_setr_epi8(
      2, -1, -1, -1, 5, -1, -1, -1, 8, -1, -1, -1, 11, -1, -1, -1,
      2, -1, -1, -1, 5, -1, -1, -1, 8, -1, -1, -1, 11, -1, -1, -1);
  const __m256i vb = _mm256_set1_epi32(bins);

  std::size_t i = 0;
  // The high half loads 16 bytes from pixel i+4, so stop while a full
  // 16-byte read stays inside the buffer; the scalar tail covers the rest.
  while (i + 10 <= n) {
    const std::uint8_t* p = rgb + 3 * i;
    const __m128i lo = _mm_loadu_si128(reinterpret_cast<const __m128i*>(p));
    const __m128i hi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(p + 12));
    const __m256i v = _mm256_set_m128i(hi, lo);

    const __m256i r = _mm256_shuffle_epi8(v, shuf_r);
    const __m256i g = _mm256_shuffle_epi8(v, shuf_g);
    const __m256i b = _mm256_shuffle_epi8(v, shuf_b);

    const __m256i rq = _mm256_srli_epi32(_mm256_mullo_epi32(r, vb), 8);
    const __m256i gq = _mm256_srli_epi32(_mm256_mullo_epi32(g, vb), 8);
    const __m256i bq = _mm256_srli_epi32(_mm256_mullo_epi32(b, vb), 8);
    const __m256i cell = _mm256_add_epi32(
        _mm256_mullo_epi32(_mm256_add_epi32(_mm256_mullo_epi32(rq, vb), gq), vb), bq);

    alignas(32) std::uint32_t cells[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(cells), cell);
    for (int l = 0; l < 8; ++l) counts[cells[l]] += 1;
    i += 8;
  }
  if (i < n) histogram_counts_scalar(rgb + 3 * i, n - i, bins, counts);
}

} // namespace imvb7::kernels::detail

#else // non-x86: never dispatched because detected_backend() is scalar

namespace imvb7::kernels::detail {

void assign_nearest_avx2(const std::uint8_t*, std::size_t, const double*, std::size_t,
                         std::uint32_t*) {
  raise(ErrorCode::Internal, "avx2 backend unavailable on this architecture");
}

void histogram_counts_avx2(const std::uint8_t*, std::size_t, int, std::uint64_t*) {
  raise(ErrorCode::Internal, "avx2 backend unavailable on this architecture");
}

} // namespace imvb7::kernels::detail

#endif
