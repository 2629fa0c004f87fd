// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Line-based SFT text format:
//
//   sft <num_vertices> <num_edges>
//   vertex <name>                          (optional; all or none)
//   edge <id> <source> <target> [label]
//
// '#' starts a comment. When vertex lines are present they must match the
// header count and every edge endpoint must be declared; otherwise the set
// of endpoints must have exactly <num_vertices> elements.

#include <filesystem>
#include <string>
#include <string_view>

#include "symdyn/sft.hpp"

namespace symdyn {

Sft parse_sft(std::string_view text);
Sft read_sft_file(const std::filesystem::path& path);

/// Canonical text: header, then edges in id order; the label token is
/// written only when it differs from the id.
std::string to_text(const Sft& sft);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace symdyn
