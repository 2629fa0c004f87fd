// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <bit>

#include "symdyn/kernels.hpp"

// Functions carry target("avx2") instead of compiling the file with -mavx2 so
// no inline helper from a shared header is emitted with AVX2 encodings.
#define SYMDYN_AVX2 __attribute__((target("avx2")))

namespace symdyn::kernels::avx2 {

SYMDYN_AVX2 double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    acc = _mm256_add_pd(acc, prod);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

SYMDYN_AVX2 std::size_t count_equal(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
    auto mask = static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpeq_epi32(va, vb))));
    count += static_cast<std::size_t>(std::popcount(mask));
  }
  for (; i < n; ++i) count += a[i] == b[i];
  return count;
}

SYMDYN_AVX2 std::size_t find_value(std::span<const std::uint32_t> data, std::uint32_t value, std::size_t from) {
  const std::size_t n = data.size();
  std::size_t i = from;
  const __m256i needle = _mm256_set1_epi32(static_cast<int>(value));
  for (; i + 8 <= n; i += 8) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data.data() + i));
    auto mask = static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpeq_epi32(v, needle))));
    if (mask != 0) return i + static_cast<std::size_t>(std::countr_zero(mask));
  }
  for (; i < n; ++i) {
    if (data[i] == value) return i;
  }
  return n;
}

}  // namespace symdyn::kernels::avx2

#endif
