// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "symdyn/sft.hpp"

namespace symdyn {

enum class AlphabetKind { source, edge };

/// Finite window of a bi-infinite sequence. `base_index` is the coordinate of
/// symbols[0]; window-relative indices are used everywhere else.
struct SymbolicSample {
  std::int64_t base_index = 0;
  std::vector<Symbol> symbols;
  AlphabetKind kind = AlphabetKind::source;

  std::size_t size() const { return symbols.size(); }
  friend bool operator==(const SymbolicSample&, const SymbolicSample&) = default;
};

/// Sliding-window cylinder counts for word lengths 1..k_max. Frequencies are
/// exact ratios count / (n - k + 1); doubles only come out of `freq`.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure(std::span<const Symbol> symbols, int k_max);

  int k_max() const { return k_max_; }
  std::size_t sample_length() const { return n_; }
  std::uint64_t denominator(std::size_t k) const { return n_ - k + 1; }
  std::uint64_t count(std::span<const Symbol> word) const;
  double freq(std::span<const Symbol> word) const;
  /// All observed words of length k in lexicographic order.
  const std::map<Word, std::uint64_t>& words(std::size_t k) const { return counts_.at(k - 1); }

 private:
  int k_max_;
  std::size_t n_;
  std::vector<std::map<Word, std::uint64_t>> counts_;
};

/// Raises an input error for k_max < 1 and a precondition error when the
/// sample is shorter than k_max.
EmpiricalMeasure empirical_measure(const SymbolicSample& sample, int k_max);

/// Each symbol i becomes min(i, cap).
SymbolicSample truncate(const SymbolicSample& sample, Symbol cap);

struct GenericityReport {
  /// max |freq_first_half(w) - freq_second_half(w)| over length-k words.
  double discrepancy = 0.0;
  /// max |freq_central_half(w) - freq_whole(w)|; a symmetric-window proxy for
  /// the two-sided average.
  double two_sided_discrepancy = 0.0;
  /// (K, freq(symbol >= K)) for K = 1, 2, 4, ... up to the largest symbol.
  std::vector<std::pair<Symbol, double>> escape_mass;
};

GenericityReport genericity_check(const SymbolicSample& sample, int k);

/// Finite-state Markov chain with row-stochastic transitions.
class MarkovSource {
 public:
  /// Rows must be nonnegative and sum to 1 within 1e-12.
  static MarkovSource create(std::vector<std::vector<double>> rows);

  std::size_t states() const { return n_; }
  double p(std::size_t i, std::size_t j) const { return p_[i * n_ + j]; }
  const std::vector<double>& stationary() const { return pi_; }
  std::vector<std::vector<double>> rows() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> p_;
  std::vector<double> pi_;
};

/// Initial state from the stationary law, then one row draw per step, all
/// through SplitMix64(seed) with inverse-CDF sampling.
SymbolicSample markov_sample(const MarkovSource& source, std::size_t length, std::uint64_t seed);

/// -sum_i pi_i sum_j p_ij ln p_ij, with 0 ln 0 = 0.
double markov_entropy(const MarkovSource& source);

/// Block entropy H_k = -sum freq(w) ln freq(w) over length-k words (H_0 = 0).
double block_entropy(const EmpiricalMeasure& em, std::size_t k);

/// H_{k+1} - H_k. Requires k < k_max.
double estimate_entropy(const EmpiricalMeasure& em, int k);

/// H_{k+1} - H_k with each block entropy raised by (m - 1) / (2 * denominator),
/// m the number of distinct observed words (Miller-Madow). Diagnostic only.
double estimate_entropy_corrected(const EmpiricalMeasure& em, int k);

/// Convenience: estimate_entropy(empirical_measure(sample, k + 1), k).
double estimate_entropy(const SymbolicSample& sample, int k);

struct SliceResult {
  std::vector<std::size_t> kept;       // indices with estimate < t
  std::vector<std::size_t> discarded;  // the rest
  std::vector<double> estimates;
};

SliceResult t_slice_filter(std::span<const SymbolicSample> samples, double t, int k);

// Files.
//   sample <base_index> <length> <source|edge>
//   <symbols...>
// Edge samples spell symbols as edge ids of the given Sft.
//
//   markov <n>
//   <n rows of n probabilities>
std::string to_text(const SymbolicSample& sample, const Sft* sft = nullptr);
SymbolicSample parse_sample(std::string_view text, const Sft* sft = nullptr);
std::string to_text(const MarkovSource& source);
MarkovSource parse_markov(std::string_view text);

}  // namespace symdyn
