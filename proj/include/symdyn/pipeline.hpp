// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "symdyn/finitary_code.hpp"
#include "symdyn/frequency_channel.hpp"
#include "symdyn/induced.hpp"
#include "symdyn/measures.hpp"
#include "symdyn/sft.hpp"

namespace symdyn {

struct PipelineConfig {
  int k = 3;                     // entropy estimator order
  int n_max = 3;                 // upper bound; lowered until a U family fits
  std::size_t block_length = 0;  // L; 0 picks the least L that fits
  std::size_t max_block_length = 64;
  std::size_t min_markers = 32;
  std::size_t marker_max_len = 12;
  std::size_t anchor_max_len = 64;
  std::vector<std::size_t> ext_lens{8, 16, 32, 64};
};

/// Everything that depends on (Y, t) alone. Both sides derive it.
struct MarkerParams {
  Word w;
  Sft restricted;  // Y' = Y_w
  double h_prime = 0.0;
  double t = 0.0;
  std::size_t M = 0;
  VertexId v0 = 0;
  Word u, v;                        // loops at v0 in Y'
  Word u_labels, v_labels;          // the same, as edges of Y
  std::vector<Symbol> to_base;      // Y' edge -> Y edge
  std::vector<VertexId> base_vertex;  // Y' state -> Y vertex it sits at
  VertexId entry_state = 0;         // Y' state from which w can follow
  VertexId exit_state = 0;          // Y' state to continue from after w
  std::int64_t N = 0;
  std::size_t W = 0;                // len(w) + 4M + 2
};

MarkerParams derive_marker_params(const Sft& Y, double t, const PipelineConfig& cfg);

/// Per-sample choices that fix the code: anchor block, U family, W-block
/// table and dictionary. Reusable on other inputs with the same structure.
struct EncodePlan {
  MarkerParams params;
  Word a;
  UFamily U;
  int n_max = 0;
  std::size_t ext_len = 0;
  std::vector<Word> table;
  FinitaryCode code;

  MarkerScheme scheme() const;
  SigmaBits sigma() const { return sigma_from_digest(code.scheme_digest(), n_max); }
};

/// Digest carried by the sigma bits: FNV-1a of (version, L, dictionary hash).
std::uint64_t scheme_digest(const FinitaryCode& code);

/// Audit record and out-of-band inverse description.
struct PsiArtifact {
  std::uint64_t base_hash = 0;  // hash of Y
  double t = 0.0;
  double h_prime = 0.0;
  Word w, u, v;
  std::size_t M = 0;
  Word a;
  std::int64_t N = 0;
  int n_max = 0;
  std::size_t ext_len = 0;
  UFamily U;
  std::size_t W = 0;
  std::size_t n = 0;  // window length
  std::vector<std::int64_t> I1;
  std::size_t i2_count = 0;
  std::vector<Word> table;
  Word pad_tail;  // Y' edges completing the last codeword
  FinitaryCode code;

  friend bool operator==(const PsiArtifact&, const PsiArtifact&) = default;
};

// Layout, integers LEB128 unless noted:
//   "PSIA" version(=1) base_hash:u64le t:f64 h':f64
//   w u v (length-prefixed words) M a N n_max ext_len
//   U: total set_count { hits word_count { word }* }*
//   W n |I1| I1 as first value then deltas, |I2|
//   table: count { word }*   pad_tail   code section ("PSIC" ...)
//   checksum:u64le (FNV-1a of all preceding bytes)
std::vector<std::uint8_t> serialize_psi(const PsiArtifact& psi);
PsiArtifact deserialize_psi(std::span<const std::uint8_t> bytes);

struct EmbeddingResult {
  SymbolicSample y;  // edges of Y
  PsiArtifact psi;
  std::vector<std::uint8_t> psi_bytes;
  EncodePlan plan;
  IndexSets idx;
  std::int64_t interior_lo = 0;  // inclusive
  std::int64_t interior_hi = 0;  // exclusive
  double entropy_estimate = 0.0;
  std::size_t distinct_blocks = 0;
  std::uint64_t capacity = 0;
};

/// Chooses a, I1, the itinerary, L, the code and the U family for `x`.
EncodePlan plan_encoding(const SymbolicSample& x, const Sft& Y, double t, const PipelineConfig& cfg = {});

/// Writes y for `x` under a fixed plan. Raises "dictionary-miss" when x
/// produces a block the plan does not know.
EmbeddingResult apply_plan(const SymbolicSample& x, const Sft& Y, const EncodePlan& plan, const PipelineConfig& cfg = {});

/// plan_encoding followed by apply_plan.
EmbeddingResult encode(const SymbolicSample& x, const Sft& Y, double t, const PipelineConfig& cfg = {});

struct DecodeResult {
  std::vector<Symbol> x_hat;
  std::vector<std::uint8_t> covered;
  std::int64_t interior_lo = 0;
  std::int64_t interior_hi = 0;
  std::vector<std::int64_t> I1;
  SigmaRecovery sigma;
};

/// Raises "psi-mismatch" (corruption) when the artifact does not belong to
/// this (Y, t, y), and other corruption errors with offsets.
DecodeResult decode(const SymbolicSample& y, const Sft& Y, double t, const PsiArtifact& psi, const PipelineConfig& cfg = {});

/// Positions in [lo, hi) where a and b differ (or b is uncovered).
std::size_t interior_mismatches(std::span<const Symbol> x, const DecodeResult& d);

struct SeparationTrial {
  std::uint64_t seed = 0;
  Word a_first, a_second;
  double freq_first = 0.0, freq_second = 0.0;  // frequency of each sample's own anchor
  std::uint64_t dict_first = 0, dict_second = 0;
  bool identification_differs = false;
  bool own_decodes = false;    // both samples decode exactly with their own artifact
  bool cross_rejected = false;  // each sample fails or mis-reconstructs with the other's
};

struct MeasureSeparation {
  std::vector<SeparationTrial> trials;
  bool ok() const;
};

MeasureSeparation separation_experiment(const MarkovSource& first, const MarkovSource& second, const Sft& Y, double t, std::size_t length,
                                       std::span<const std::uint64_t> seeds, const PipelineConfig& cfg = {});

}  // namespace symdyn
