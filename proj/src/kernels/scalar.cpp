// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "symdyn/kernels.hpp"

namespace symdyn::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  double l0 = 0, l1 = 0, l2 = 0, l3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    l0 += a[i] * b[i];
    l1 += a[i + 1] * b[i + 1];
    l2 += a[i + 2] * b[i + 2];
    l3 += a[i + 3] * b[i + 3];
  }
  double sum = (l0 + l1) + (l2 + l3);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

std::size_t count_equal(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += a[i] == b[i];
  return count;
}

std::size_t find_value(std::span<const std::uint32_t> data, std::uint32_t value, std::size_t from) {
  for (std::size_t i = from; i < data.size(); ++i) {
    if (data[i] == value) return i;
  }
  return data.size();
}

}  // namespace symdyn::kernels::scalar
