#include <immintrin.h>

#include <cstddef>

#include "percolab/simd/kernels.hpp"

namespace percolab::simd::avx2 {

namespace {

// Eight items per vector; iterate edge passes until no lane grows. Extra passes leave
// converged lanes unchanged, so each lane equals the scalar closure.
inline __m256i close_vec(std::span<const std::uint32_t> endpoints, __m256i open, __m256i reach) {
  const __m256i zero = _mm256_setzero_si256();
  for (;;) {
    const __m256i prev = reach;
    for (std::size_t e = 0; e < endpoints.size(); ++e) {
      const __m256i ends = _mm256_set1_epi32(static_cast<int>(endpoints[e]));
      const __m256i bit = _mm256_set1_epi32(static_cast<int>(1U << e));
      const __m256i is_open = _mm256_cmpeq_epi32(_mm256_and_si256(open, bit), bit);
      const __m256i touches = _mm256_cmpeq_epi32(_mm256_and_si256(reach, ends), zero);
      // andnot(touches, is_open): open and reach ∩ ends ≠ ∅
      const __m256i grow = _mm256_andnot_si256(touches, is_open);
      reach = _mm256_or_si256(reach, _mm256_and_si256(grow, ends));
    }
    const __m256i same = _mm256_cmpeq_epi32(reach, prev);
    if (_mm256_movemask_epi8(same) == -1) return reach;
  }
}

}  // namespace

void closure_enumerate(std::span<const std::uint32_t> endpoints, std::uint32_t seed, std::uint32_t first_config,
                       std::span<std::uint32_t> out) {
  const std::size_t n = out.size();
  const __m256i seeds = _mm256_set1_epi32(static_cast<int>(seed));
  const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i open =
        _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(first_config + static_cast<std::uint32_t>(i))), lane);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), close_vec(endpoints, open, seeds));
  }
  if (i < n) scalar::closure_enumerate(endpoints, seed, first_config + static_cast<std::uint32_t>(i), out.subspan(i));
}

void closure(std::span<const std::uint32_t> endpoints, std::span<const std::uint32_t> open_masks,
             std::span<const std::uint32_t> seeds, std::span<std::uint32_t> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i open = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(open_masks.data() + i));
    const __m256i seed = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(seeds.data() + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), close_vec(endpoints, open, seed));
  }
  if (i < n) scalar::closure(endpoints, open_masks.subspan(i), seeds.subspan(i), out.subspan(i));
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    acc = _mm256_add_pd(acc, prod);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

}  // namespace percolab::simd::avx2
