#include <immintrin.h>

#include <algorithm>

#include "hyperalpha/kernels.hpp"

// Only the functions below get AVX2 code; headers above keep the baseline ISA.
#pragma GCC push_options
#pragma GCC target("avx2")

// Two 128-bit edge masks per 256-bit register: lanes [lo0, hi0, lo1, hi1].
namespace hyperalpha::kernels::avx2 {
namespace {

inline __m256i broadcast(VertexSet s) {
  return _mm256_setr_epi64x(static_cast<long long>(s.lo), static_cast<long long>(s.hi),
                            static_cast<long long>(s.lo), static_cast<long long>(s.hi));
}

inline __m256i load_pair(const VertexSet* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

// Per-64-bit-lane popcount via nibble lookup (Mula, Kurz, Lemire).
inline __m256i popcount_epi64(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi32(v, 4), low_mask);
  const __m256i counts = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
  return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

// Popcount of each 128-bit mask, replicated into both of its 64-bit lanes.
inline __m256i popcount_epi128(__m256i v) {
  const __m256i c = popcount_epi64(v);
  return _mm256_add_epi64(c, _mm256_shuffle_epi32(c, _MM_SHUFFLE(1, 0, 3, 2)));
}

}  // namespace

std::size_t count_contained(std::span<const VertexSet> masks,
                                                             VertexSet s) {
  const __m256i sv = broadcast(s);
  const __m256i zero = _mm256_setzero_si256();
  std::size_t n = 0;
  std::size_t i = 0;
  for (; i + 2 <= masks.size(); i += 2) {
    const __m256i outside = _mm256_andnot_si256(sv, load_pair(&masks[i]));
    const int bits = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(outside, zero)));
    n += ((bits & 0x3) == 0x3) + ((bits & 0xc) == 0xc);
  }
  for (; i < masks.size(); ++i) n += masks[i].subset_of(s) ? 1 : 0;
  return n;
}

unsigned max_intersection(std::span<const VertexSet> masks,
                                                           VertexSet s) {
  const __m256i sv = broadcast(s);
  __m256i best = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 2 <= masks.size(); i += 2) {
    const __m256i c = popcount_epi128(_mm256_and_si256(sv, load_pair(&masks[i])));
    best = _mm256_max_epi32(best, c);
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), best);
  unsigned result = static_cast<unsigned>(std::max(lanes[0], lanes[2]));
  for (; i < masks.size(); ++i) result = std::max(result, (masks[i] & s).count());
  return result;
}

VertexSet single_missing_union(std::span<const VertexSet> masks,
                                                                VertexSet s) {
  const __m256i sv = broadcast(s);
  const __m256i one = _mm256_set1_epi64x(1);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 2 <= masks.size(); i += 2) {
    const __m256i outside = _mm256_andnot_si256(sv, load_pair(&masks[i]));
    const __m256i is_single = _mm256_cmpeq_epi64(popcount_epi128(outside), one);
    acc = _mm256_or_si256(acc, _mm256_and_si256(outside, is_single));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  VertexSet result{lanes[0] | lanes[2], lanes[1] | lanes[3]};
  for (; i < masks.size(); ++i) {
    const VertexSet missing = masks[i].and_not(s);
    if (missing.count() == 1) result |= missing;
  }
  return result;
}

}  // namespace hyperalpha::kernels::avx2

#pragma GCC pop_options
