// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "symdyn/measures.hpp"

namespace symdyn {

/// Occurrence indices of the anchor block and the complement of their
/// protected windows. All indices are window-relative.
///
/// The protected window of i is [i - M, i + len_w + 3M]. Layout inside it:
///   [i-M, i-1]                 pre-fill
///   [i, i+len_w-1]             marker w
///   [i+len_w, i+len_w+M-1]     mid-fill
///   [i+len_w+M, i+len_w+2M-1]  u/v slot
///   [i+len_w+2M, i+len_w+3M]   post-fill (length M+1)
struct IndexSets {
  std::vector<std::int64_t> I1;
  std::vector<std::int64_t> I2;
  std::int64_t range_lo = 0;  // inclusive
  std::int64_t range_hi = 0;  // inclusive
  std::size_t len_w = 0;
  std::size_t M = 0;

  /// len_w + 4M + 1.
  std::size_t protected_width() const { return len_w + 4 * M + 1; }
  /// Itinerary block width len_w + 4M + 2: one more than the protected width
  /// so the block just before a protected window reaches its last cell.
  std::size_t window_width() const { return len_w + 4 * M + 2; }
  /// Position of j in I2, if present.
  std::optional<std::size_t> rank(std::int64_t j) const;
  bool in_I2(std::int64_t j) const { return rank(j).has_value(); }
};

/// Smallest integer strictly above h/(h - t) * (len_w + 4M + 1).
/// Requires 0 < t < h.
std::int64_t compute_N(double h_prime, double t, std::size_t len_w, std::size_t M);

/// First block in length-then-lexicographic order, of length up to max_len,
/// occurring at least `min_count` times with all consecutive occurrence
/// starts at least N apart. Raises "no-marker-anchor".
Word choose_block_a(const SymbolicSample& sample, std::int64_t N, std::size_t max_len, std::size_t min_count = 1);

/// All start indices of `a`, overlapping ones included.
std::vector<std::int64_t> occurrences(const SymbolicSample& sample, std::span<const Symbol> a);

/// Raises "windows-collide" when consecutive I1 entries are closer than the
/// protected width, and an input error when I1 is unsorted.
IndexSets index_sets(std::vector<std::int64_t> I1, std::int64_t range_lo, std::int64_t range_hi, std::size_t len_w, std::size_t M);

struct Itinerary {
  SymbolicSample x_prime;
  /// Distinct W-blocks in lexicographic order; the code of a block is its
  /// position here.
  std::vector<Word> table;
};

/// x'_k is the code of sample[j .. j+W-1] for the k-th j in I2.
/// Raises "window-overrun" naming the first j whose block leaves the sample.
Itinerary itinerary(const SymbolicSample& sample, const IndexSets& idx, std::size_t W);

struct Reconstruction {
  /// Symbols on [0, max(I2) + W); uncovered cells hold 0.
  std::vector<Symbol> symbols;
  std::vector<std::uint8_t> covered;
};

/// Inverse of `itinerary`. Overlapping blocks must agree; a disagreement or
/// an out-of-table code raises a corruption error with the offset.
Reconstruction reconstruct_from_itinerary(std::span<const Symbol> x_prime, std::span<const Word> table, const IndexSets& idx, std::size_t W);

struct AbramovReport {
  double sample_entropy = 0.0;     // estimate on the sample
  double itinerary_entropy = 0.0;  // estimate on x'
  double mass = 0.0;               // |I2| / range length
  double predicted = 0.0;          // sample_entropy / mass
  double relative_gap = 0.0;       // |itinerary - predicted| / sample_entropy, 0 when both vanish
  // Same comparison with bias-corrected estimates on both sides.
  double corrected_sample_entropy = 0.0;
  double corrected_itinerary_entropy = 0.0;
  double corrected_gap = 0.0;
};

AbramovReport abramov_check(const SymbolicSample& sample, const IndexSets& idx, int k);

}  // namespace symdyn
