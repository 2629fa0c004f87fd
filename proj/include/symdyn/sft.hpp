// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symdyn {

using Symbol = std::uint32_t;
using VertexId = std::uint32_t;

/// A finite word. Over an Sft the symbols are edge indices; over a source
/// alphabet they are nonnegative integers.
using Word = std::vector<Symbol>;

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ w.size();
    for (Symbol s : w) h = (h ^ s) * 0x100000001b3ULL + (h >> 29);
    return static_cast<std::size_t>(h);
  }
};

/// Edge record as read from a file, before indexing.
struct EdgeSpec {
  std::string id;
  std::string source;
  std::string target;
  std::string label;  // empty means "same as id"
};

struct Edge {
  std::string id;
  VertexId source = 0;
  VertexId target = 0;
  /// Symbol of the ambient alphabet this edge stands for. Equal to `id` for
  /// plain graphs; for a restriction it is the last symbol of the window.
  std::string label;
};

/// Shift of finite type presented as the edge shift of a finite directed
/// multigraph. Vertices are sorted by name and edges by id (plain byte
/// order), so the edge index order is the lexicographic order on ids.
///
/// The graph is trimmed to its essential part on construction; the result
/// may be empty, which is a valid value.
class Sft {
 public:
  Sft() = default;

  /// Validates (unique ids, known endpoints), sorts and trims.
  static Sft build(std::vector<std::string> vertices, std::vector<EdgeSpec> edges);

  /// Full shift on `k` symbols named "0".."k-1", one vertex "v".
  static Sft full_shift(unsigned k);

  bool empty() const { return edges_.empty(); }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(Symbol e) const { return edges_[e]; }

  /// Outgoing edges of `v` in id order.
  std::span<const Symbol> out_edges(VertexId v) const {
    return {out_list_.data() + out_offset_[v], out_offset_[v + 1] - out_offset_[v]};
  }

  std::optional<Symbol> find_edge(std::string_view id) const;
  std::optional<VertexId> find_vertex(std::string_view name) const;
  /// Like find_edge but raises an input error for unknown ids.
  Symbol edge_index(std::string_view id) const;
  VertexId vertex_index(std::string_view name) const;

  /// Dense vertex adjacency matrix counting parallel edges, row-major.
  std::vector<double> adjacency() const;

  /// Canonical text form (see sft_io) hashed with FNV-1a.
  std::uint64_t hash() const;

  friend bool operator==(const Sft& a, const Sft& b);

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<Symbol> out_list_;
  std::vector<std::size_t> out_offset_{0};
};

bool operator==(const Edge& a, const Edge& b);

/// Parses "e1 e2 e0" (whitespace separated ids) or, when every edge id is a
/// single character, also the compact form "0101".
Word parse_word(const Sft& sft, std::string_view text);
std::string format_word(const Sft& sft, std::span<const Symbol> word);

/// True iff consecutive edges compose. Empty words and unknown edge indices
/// raise input errors.
bool is_admissible(const Sft& sft, std::span<const Symbol> word);

/// Strongly connected and cycle-length gcd 1. Empty input raises.
bool is_mixing(const Sft& sft);

/// Natural log of the spectral radius of the adjacency matrix.
double entropy(const Sft& sft);

/// Spectral radius via power iteration per strongly connected component, with
/// a bisection fallback when the iteration cap is hit.
double spectral_radius(const Sft& sft);

/// Spectral radius by bisection on lambda, testing whether lambda*I - A is a
/// nonsingular M-matrix (all Gaussian-elimination pivots positive). This is
/// the fallback route and is also usable as an independent check.
double spectral_radius_bisection(std::span<const double> adjacency, std::size_t n);

/// Word-level test: no proper nonempty prefix equals a suffix.
bool is_border_free(std::span<const Symbol> word);

/// Admissible and border-free (no two occurrences can overlap).
bool is_marker(const Sft& sft, std::span<const Symbol> w);

/// Edge shift of the points avoiding `w`: higher-block recoding of order
/// len(w), windows equal to `w` removed, trimmed. Edge labels carry the
/// original alphabet so label sequences are words of the input system.
Sft restrict_forbidden(const Sft& sft, std::span<const Symbol> w);

/// Least M >= 1 with paths of every length m >= M between every ordered pair
/// of vertices. Raises a precondition error for non-mixing input.
int transition_length(const Sft& sft);

/// Lexicographically least path of exactly `m` edges from `s` to `t`.
/// Raises "no-connector" if none exists.
Word connecting_block(const Sft& sft, VertexId s, VertexId t, std::size_t m);

/// Number of paths of length `m` from `s` to `t`, saturating at UINT64_MAX.
std::uint64_t count_paths(const Sft& sft, VertexId s, VertexId t, std::size_t m);

/// Reachability table for fixed target and horizon: reach[r][v] is true when
/// some path of exactly r edges leads from v to the target.
class ExactReach {
 public:
  ExactReach(const Sft& sft, VertexId target, std::size_t horizon);
  bool reaches(VertexId v, std::size_t steps) const { return bits_[steps * n_ + v] != 0; }
  std::size_t horizon() const { return horizon_; }

 private:
  std::size_t n_;
  std::size_t horizon_;
  std::vector<std::uint8_t> bits_;
};

struct MarkerSearch {
  Word w;
  Sft restricted;
  double restricted_entropy = 0.0;
};

/// First word in length-then-lexicographic order (up to max_len) that is
/// admissible and border-free, and whose restriction is mixing, has entropy
/// above `t`, and still uses every symbol of `sft` as a label.
MarkerSearch find_marker(const Sft& sft, double t, std::size_t max_len);

/// Labels of a path in a restriction mapped back to edge indices of `base`.
std::vector<Symbol> label_map(const Sft& restricted, const Sft& base);

/// Strongly connected components; each component's vertices sorted.
std::vector<std::vector<VertexId>> strongly_connected_components(const Sft& sft);

}  // namespace symdyn
