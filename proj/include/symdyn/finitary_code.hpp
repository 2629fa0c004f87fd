// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "symdyn/bytes.hpp"
#include "symdyn/sft.hpp"

namespace symdyn {

/// Rate-1 anchored block code from L-blocks of itinerary codes into loops of
/// length L at a fixed vertex of the target. Codewords are edge indices of
/// the target, so any concatenation is a path.
class FinitaryCode {
 public:
  std::size_t block_length() const { return L_; }
  VertexId anchor() const { return anchor_; }
  std::uint64_t target_hash() const { return target_hash_; }
  std::uint64_t scheme_digest() const { return scheme_digest_; }
  void set_scheme_digest(std::uint64_t d) { scheme_digest_ = d; }

  /// (input block, codeword) in assignment order.
  const std::vector<std::pair<Word, Word>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// Hash of the dictionary alone (L and entries).
  std::uint64_t dictionary_hash() const;

  const Word* codeword(std::span<const Symbol> input) const;
  const Word* input(std::span<const Symbol> codeword) const;

  friend bool operator==(const FinitaryCode& a, const FinitaryCode& b) {
    return a.L_ == b.L_ && a.anchor_ == b.anchor_ && a.target_hash_ == b.target_hash_ && a.entries_ == b.entries_ &&
           a.scheme_digest_ == b.scheme_digest_;
  }

  /// Checks injectivity and rebuilds lookup tables.
  static FinitaryCode assemble(std::size_t L, VertexId anchor, std::uint64_t target_hash, std::vector<std::pair<Word, Word>> entries,
                               std::uint64_t scheme_digest);

 private:
  std::size_t L_ = 0;
  VertexId anchor_ = 0;
  std::uint64_t target_hash_ = 0;
  std::uint64_t scheme_digest_ = 0;
  std::vector<std::pair<Word, Word>> entries_;
  std::map<Word, std::size_t> by_input_;
  std::map<Word, std::size_t> by_codeword_;
};

/// Distinct L-blocks of `x` at offsets 0, L, 2L, ... with counts, in
/// lexicographic order. Requires |x| to be a multiple of L.
std::vector<std::pair<Word, std::uint64_t>> observed_blocks(std::span<const Symbol> x, std::size_t L);

/// Anchor = least vertex; codewords = first loops at the anchor in
/// lexicographic order, handed out by decreasing count (ties keep the
/// order of `observed`). Requires a mixing target and L >= 2 *
/// transition_length. Raises "entropy-overflow" with both counts.
FinitaryCode build_code(const Sft& target, std::span<const std::pair<Word, std::uint64_t>> observed, std::size_t L);

/// First `count` loops of length L at `v` in lexicographic order.
std::vector<Word> first_loops(const Sft& sft, VertexId v, std::size_t L, std::size_t count);

/// Raises "dictionary-miss" for an unknown block or a length not divisible by L.
std::vector<Symbol> encode_blocks(const FinitaryCode& code, std::span<const Symbol> x_prime);

/// Raises a corruption error ("unknown-codeword") naming the offset.
std::vector<Symbol> decode_blocks(const FinitaryCode& code, std::span<const Symbol> y_prime);

// Serialized form, all integers unsigned LEB128 unless noted:
//   "PSIC"  version(=1)  L  anchor  target_hash:u64le
//   entry_count  { in_len in_symbols...  cw_len cw_edges... }*
//   scheme_digest:u64le
void write_code(ByteWriter& out, const FinitaryCode& code);
FinitaryCode read_code(ByteReader& in);
std::vector<std::uint8_t> serialize_code(const FinitaryCode& code);
/// Raises corruption errors on malformed input or trailing bytes.
FinitaryCode deserialize_code(std::span<const std::uint8_t> bytes);

}  // namespace symdyn
