// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "symdyn/measures.hpp"
#include "symdyn/sft.hpp"

namespace symdyn {

/// Counts of the length-ext_len blocks that follow occurrences of `a`.
struct ExtensionCounts {
  std::size_t ext_len = 0;
  std::map<Word, std::uint64_t> counts;  // lexicographic
  std::uint64_t total = 0;
};

/// Contexts sample[i + |a| .. i + |a| + ext_len - 1] for each i in `starts`.
/// Raises "window-overrun" when a context leaves the sample.
ExtensionCounts extension_counts(const SymbolicSample& sample, std::span<const std::int64_t> starts, std::size_t a_len, std::size_t ext_len);

/// Same from an empirical measure whose k_max is at least |a| + ext_len.
ExtensionCounts extension_counts(const EmpiricalMeasure& em, std::span<const Symbol> a, std::size_t ext_len);

/// r_n = 2^(-n^2).
double nominal_weight(int n);

/// Allowed |realized r_n - r_n| for family size n_max:
/// min(r_n / 4, r_{n_max} / 8), a power of two.
double tolerance(int n, int n_max);

/// Pairwise disjoint sets of extension blocks; sets[n-1] is U_n.
struct UFamily {
  std::size_t ext_len = 0;
  std::vector<std::vector<Word>> sets;
  /// Realized counts of each U_n and the total they were measured against.
  std::vector<std::uint64_t> hits;
  std::uint64_t total = 0;

  int n_max() const { return static_cast<int>(sets.size()); }
  /// 1-based index of the set holding `context`, or 0.
  int member(std::span<const Symbol> context) const;
  double realized(int n) const { return static_cast<double>(hits[static_cast<std::size_t>(n - 1)]) / static_cast<double>(total); }

  friend bool operator==(const UFamily&, const UFamily&) = default;
};

/// For n = 1..n_max, walks the unused extension blocks in lexicographic order
/// and takes each one that keeps the running count at or below r_n * total;
/// the result must land within `tolerance(n, n_max)`, checked in integers.
/// Raises "granularity" otherwise.
UFamily choose_U_family(const ExtensionCounts& ext, int n_max);
UFamily choose_U_family(const EmpiricalMeasure& em, std::span<const Symbol> a, int n_max, std::size_t ext_len);

/// Everything both sides must agree on to place and read the u/v slots.
/// Paths `u`, `v` live in the restricted system; `u_labels`, `v_labels` are
/// the same blocks as edge indices of the base system.
struct MarkerScheme {
  Word w;
  Word u, v;
  Word u_labels, v_labels;
  std::size_t M = 0;
  Word a;
  std::int64_t N = 0;
  double h_prime = 0.0;
  double t = 0.0;
  UFamily U;
  int n_max = 0;

  /// Slot start relative to the marker start.
  std::size_t slot_offset() const { return w.size() + M; }
};

struct SigmaBits {
  std::vector<std::uint8_t> bits;  // bits[n-1] is sigma_n
  friend bool operator==(const SigmaBits&, const SigmaBits&) = default;
};

/// Low n_max bits of `digest`, least significant first.
SigmaBits sigma_from_digest(std::uint64_t digest, int n_max);

/// Writes u into the slot of each marker whose context lies in some U_n
/// with sigma_n = 1, and v into the rest. `membership[k]` is the U index of
/// the k-th marker (0 for none). A slot cell already marked in `written`
/// raises an internal "slot-collision" error.
void encode_sigma(std::vector<Symbol>& y, std::vector<std::uint8_t>& written, std::span<const std::int64_t> I1, std::span<const int> membership,
                  const SigmaBits& sigma, const MarkerScheme& scheme);

struct SigmaRecovery {
  SigmaBits sigma;
  std::uint64_t u_count = 0;
  double f_hat = 0.0;
  double distance = 0.0;  // |f_hat - nominal sum| for the chosen sigma
  double margin = 0.0;    // second-best distance minus best distance
};

/// Nearest nominal sum to `f_hat` over {0,1}^n_max. Raises
/// "ambiguous-density" when the margin is below 2 / markers, the spacing of
/// two marker counts.
SigmaRecovery decode_density(double f_hat, int n_max, std::size_t markers);

/// Counts u slots among the markers and decodes. Slots holding neither u nor
/// v raise a corruption error.
SigmaRecovery recover_sigma(std::span<const Symbol> y, std::span<const std::int64_t> I1, const MarkerScheme& scheme);

struct SeparationReport {
  /// Smallest distance between achievable-sum intervals over all sigma pairs.
  double min_interval_gap = 0.0;
  /// Smallest decode margin of nearest-nominal decoding at the corners of
  /// the tolerance box; positive means every corner decodes correctly.
  double min_decode_margin = 0.0;
  bool ok = false;
};

/// Brute force over all sigma pairs and tolerance-box corners.
SeparationReport separation_check(int n_max);

struct SigmaSweepCase {
  SigmaBits sigma;
  SigmaRecovery recovery;
  bool recovered = false;
};

struct SigmaSweep {
  int n_max = 0;
  std::size_t markers = 0;
  std::vector<SigmaSweepCase> cases;  // sigma patterns in binary counting order
  std::size_t recovered() const;
};

/// Every sigma in {0,1}^n_max through a synthetic marker structure: random
/// contexts over 7 letters, markers 20 cells apart, 2-cell u/v slots.
SigmaSweep sigma_sweep(int n_max, std::size_t markers, std::uint64_t seed);

}  // namespace symdyn
