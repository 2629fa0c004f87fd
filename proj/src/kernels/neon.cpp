// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#if defined(__aarch64__)

#include <arm_neon.h>

#include <algorithm>

#include "symdyn/kernels.hpp"

namespace symdyn::kernels::neon {

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  // Two float64x2 registers hold lanes {0,1} and {2,3}; vmulq + vaddq keeps
  // the rounding identical to the scalar reference.
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a.data() + i), vld1q_f64(b.data() + i)));
    acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(a.data() + i + 2), vld1q_f64(b.data() + i + 2)));
  }
  double sum = (vgetq_lane_f64(acc01, 0) + vgetq_lane_f64(acc01, 1)) +
               (vgetq_lane_f64(acc23, 0) + vgetq_lane_f64(acc23, 1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

std::size_t count_equal(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    uint32x4_t eq = vceqq_u32(vld1q_u32(a.data() + i), vld1q_u32(b.data() + i));
    count += vaddvq_u32(vshrq_n_u32(eq, 31));
  }
  for (; i < n; ++i) count += a[i] == b[i];
  return count;
}

std::size_t find_value(std::span<const std::uint32_t> data, std::uint32_t value, std::size_t from) {
  const std::size_t n = data.size();
  std::size_t i = from;
  const uint32x4_t needle = vdupq_n_u32(value);
  for (; i + 4 <= n; i += 4) {
    uint32x4_t eq = vceqq_u32(vld1q_u32(data.data() + i), needle);
    if (vmaxvq_u32(eq) != 0) break;
  }
  for (; i < n; ++i) {
    if (data[i] == value) return i;
  }
  return n;
}

}  // namespace symdyn::kernels::neon

#endif
