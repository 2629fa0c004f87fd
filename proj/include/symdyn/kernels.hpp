// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and
// vector versions that must produce bit-identical results: the floating
// point kernels accumulate in four interleaved lanes in both variants and
// never contract multiply-add.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace symdyn::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

/// Best ISA supported by this CPU, unless SYMDYN_ISA=scalar is set in the
/// environment. Resolved once per process.
Isa active_isa();

/// True when `isa` can run on this machine.
bool isa_available(Isa isa);

/// Sum of a[i]*b[i], lane i%4 accumulated separately, lanes folded as
/// (l0+l1)+(l2+l3), tail added last in order.
double dot(std::span<const double> a, std::span<const double> b);

/// y = A x with A dense row-major n x n.
void matvec(std::span<const double> a, std::size_t n, std::span<const double> x, std::span<double> y);

/// Number of indices where a[i] == b[i] over the common prefix.
std::size_t count_equal(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

/// First index >= from with data[index] == value, or data.size().
std::size_t find_value(std::span<const std::uint32_t> data, std::uint32_t value, std::size_t from = 0);

// Explicit variants, used by the equivalence tests and benchmarks.
namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
std::size_t count_equal(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);
std::size_t find_value(std::span<const std::uint32_t> data, std::uint32_t value, std::size_t from);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
std::size_t count_equal(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);
std::size_t find_value(std::span<const std::uint32_t> data, std::uint32_t value, std::size_t from);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(std::span<const double> a, std::span<const double> b);
std::size_t count_equal(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);
std::size_t find_value(std::span<const std::uint32_t> data, std::uint32_t value, std::size_t from);
}  // namespace neon
#endif

}  // namespace symdyn::kernels
