// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <string>

#include "symdyn/kernels.hpp"

namespace symdyn::kernels {
namespace {

struct Table {
  Isa isa;
  double (*dot)(std::span<const double>, std::span<const double>);
  std::size_t (*count_equal)(std::span<const std::uint32_t>, std::span<const std::uint32_t>);
  std::size_t (*find_value)(std::span<const std::uint32_t>, std::uint32_t, std::size_t);
};

Table select() {
  const char* env = std::getenv("SYMDYN_ISA");
  const bool force_scalar = env != nullptr && std::string(env) == "scalar";
  if (!force_scalar) {
#if defined(__x86_64__) || defined(_M_X64)
    if (isa_available(Isa::avx2)) return {Isa::avx2, &avx2::dot, &avx2::count_equal, &avx2::find_value};
#endif
#if defined(__aarch64__)
    return {Isa::neon, &neon::dot, &neon::count_equal, &neon::find_value};
#endif
  }
  return {Isa::scalar, &scalar::dot, &scalar::count_equal, &scalar::find_value};
}

const Table& table() {
  static const Table t = select();
  return t;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return table().isa; }

double dot(std::span<const double> a, std::span<const double> b) { return table().dot(a, b); }

void matvec(std::span<const double> a, std::size_t n, std::span<const double> x, std::span<double> y) {
  for (std::size_t r = 0; r < n; ++r) y[r] = table().dot(a.subspan(r * n, n), x.first(n));
}

std::size_t count_equal(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  return table().count_equal(a, b);
}

std::size_t find_value(std::span<const std::uint32_t> data, std::uint32_t value, std::size_t from) {
  if (from >= data.size()) return data.size();
  return table().find_value(data, value, from);
}

}  // namespace symdyn::kernels
