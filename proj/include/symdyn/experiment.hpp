// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "symdyn/measures.hpp"
#include "symdyn/pipeline.hpp"
#include "symdyn/sft.hpp"

namespace symdyn {

enum class TrialKind { roundtrip, separation, abramov, sigma };

struct TrialSpec {
  TrialKind kind = TrialKind::roundtrip;
  std::uint64_t seed = 1;
  int n_max = 3;               // sigma trials only
  std::size_t markers = 10000;  // sigma trials only
};

/// Experiment spec, one `key: value` per line, '#' comments:
///
///   name: default
///   sft: FULL2            FULL<k>, GM, or a path relative to the spec file
///   sft_hash: <16 hex>    optional check against the SFT above
///   t: 0.35
///   length: 200000
///   k: 3
///   n_max: 3
///   min_markers: 16
///   block_length: 0       0 picks the least L that fits
///   source: 0.95 0.05 / 0.5 0.5
///   second_source: 0.97 0.03 / 0.6 0.4
///   trial: roundtrip seed=1
///   trial: separation seed=2
///   trial: abramov seed=1
///   trial: sigma n_max=3 markers=10000 seed=1
struct ExperimentSpec {
  std::string name = "experiment";
  std::string sft_name = "FULL2";
  Sft Y = Sft::full_shift(2);
  double t = 0.35;
  std::size_t length = 200000;
  PipelineConfig cfg;
  MarkovSource source = MarkovSource::create({{0.95, 0.05}, {0.5, 0.5}});
  MarkovSource second_source = MarkovSource::create({{0.97, 0.03}, {0.6, 0.4}});
  std::vector<TrialSpec> trials;
};

ExperimentSpec parse_experiment(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentSpec read_experiment_file(const std::filesystem::path& path);

/// "FULL<k>", "GM" or a file path.
Sft resolve_sft(std::string_view name, const std::filesystem::path& base_dir = {});

/// Canonical text of the spec; its hash heads the report.
std::string to_text(const ExperimentSpec& spec);

/// Runs every trial in order. The report is
///
///   symdyn-report 1
///   name: <name>
///   spec_hash: <16 hex>
///   trials: <count>
///   (blank line, then one block of key: value lines per trial)
///   content_hash: <16 hex, FNV-1a of everything above>
///
/// Trials that raise report `status: error` with the error kind and tag.
std::string run_experiment(const ExperimentSpec& spec);

struct RoundtripOutcome {
  std::string report;  // "symdyn-roundtrip 1" header, fields, content_hash
  std::size_t mismatches = 0;
  EmbeddingResult encoded;
};

/// encode, serialize and re-read psi, decode, compare on the interior.
RoundtripOutcome roundtrip_report(const SymbolicSample& x, const Sft& Y, double t, const PipelineConfig& cfg = {});

/// True when the last line is a content_hash matching the text before it.
bool verify_report(std::string_view report);

}  // namespace symdyn
