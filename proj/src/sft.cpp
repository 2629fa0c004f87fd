// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "symdyn/sft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "symdyn/bytes.hpp"
#include "symdyn/errors.hpp"
#include "symdyn/kernels.hpp"
#include "symdyn/sft_io.hpp"

namespace symdyn {

bool operator==(const Edge& a, const Edge& b) {
  return a.id == b.id && a.source == b.source && a.target == b.target && a.label == b.label;
}

bool operator==(const Sft& a, const Sft& b) { return a.vertices_ == b.vertices_ && a.edges_ == b.edges_; }

Sft Sft::build(std::vector<std::string> vertices, std::vector<EdgeSpec> specs) {
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end()) {
    fail(ErrorKind::input, "duplicate-vertex", "vertex names must be unique");
  }
  auto vertex_of = [&](const std::string& name) -> VertexId {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), name);
    if (it == vertices.end() || *it != name) fail(ErrorKind::input, "dangling-vertex", "edge endpoint '" + name + "' is not a declared vertex");
    return static_cast<VertexId>(it - vertices.begin());
  };

  std::sort(specs.begin(), specs.end(), [](const EdgeSpec& a, const EdgeSpec& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < specs.size(); ++i) {
    if (specs[i].id == specs[i - 1].id) fail(ErrorKind::input, "duplicate-id", "edge id '" + specs[i].id + "' appears twice");
  }

  struct Raw {
    const EdgeSpec* spec;
    VertexId s, t;
  };
  std::vector<Raw> raw;
  raw.reserve(specs.size());
  for (const auto& e : specs) {
    if (e.id.empty()) fail(ErrorKind::input, "bad-id", "empty edge id");
    raw.push_back({&e, vertex_of(e.source), vertex_of(e.target)});
  }

  // Trim to the essential part: repeatedly drop vertices without in- or
  // out-edges together with their edges.
  const std::size_t n = vertices.size();
  std::vector<char> alive_v(n, 1);
  std::vector<char> alive_e(raw.size(), 1);
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::size_t> in(n, 0), out(n, 0);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (!alive_e[i]) continue;
      ++out[raw[i].s];
      ++in[raw[i].t];
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (alive_v[v] && (in[v] == 0 || out[v] == 0)) {
        alive_v[v] = 0;
        changed = true;
      }
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (alive_e[i] && (!alive_v[raw[i].s] || !alive_v[raw[i].t])) alive_e[i] = 0;
    }
  }

  Sft out;
  std::vector<VertexId> remap(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (!alive_v[v]) continue;
    remap[v] = static_cast<VertexId>(out.vertices_.size());
    out.vertices_.push_back(std::move(vertices[v]));
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!alive_e[i]) continue;
    const EdgeSpec& s = *raw[i].spec;
    out.edges_.push_back({s.id, remap[raw[i].s], remap[raw[i].t], s.label.empty() ? s.id : s.label});
  }

  const std::size_t nv = out.vertices_.size();
  out.out_offset_.assign(nv + 1, 0);
  for (const auto& e : out.edges_) ++out.out_offset_[e.source + 1];
  for (std::size_t v = 0; v < nv; ++v) out.out_offset_[v + 1] += out.out_offset_[v];
  out.out_list_.resize(out.edges_.size());
  std::vector<std::size_t> fill(out.out_offset_.begin(), out.out_offset_.end() - 1);
  for (Symbol e = 0; e < out.edges_.size(); ++e) out.out_list_[fill[out.edges_[e].source]++] = e;
  return out;
}

Sft Sft::full_shift(unsigned k) {
  std::vector<EdgeSpec> edges;
  for (unsigned i = 0; i < k; ++i) edges.push_back({std::to_string(i), "v", "v", ""});
  return build({"v"}, std::move(edges));
}

std::optional<Symbol> Sft::find_edge(std::string_view id) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), id, [](const Edge& e, std::string_view k) { return e.id < k; });
  if (it == edges_.end() || it->id != id) return std::nullopt;
  return static_cast<Symbol>(it - edges_.begin());
}

std::optional<VertexId> Sft::find_vertex(std::string_view name) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), name);
  if (it == vertices_.end() || *it != name) return std::nullopt;
  return static_cast<VertexId>(it - vertices_.begin());
}

Symbol Sft::edge_index(std::string_view id) const {
  auto e = find_edge(id);
  if (!e) fail(ErrorKind::input, "unknown-edge", "unknown edge id '" + std::string(id) + "'");
  return *e;
}

VertexId Sft::vertex_index(std::string_view name) const {
  auto v = find_vertex(name);
  if (!v) fail(ErrorKind::input, "unknown-vertex", "unknown vertex '" + std::string(name) + "'");
  return *v;
}

std::vector<double> Sft::adjacency() const {
  const std::size_t n = vertices_.size();
  std::vector<double> a(n * n, 0.0);
  for (const auto& e : edges_) a[e.source * n + e.target] += 1.0;
  return a;
}

std::uint64_t Sft::hash() const { return fnv1a64(to_text(*this)); }

Word parse_word(const Sft& sft, std::string_view text) {
  Word out;
  bool has_space = text.find_first_of(" \t\n,") != std::string_view::npos;
  bool single_char_ids = std::all_of(sft.edges().begin(), sft.edges().end(), [](const Edge& e) { return e.id.size() == 1; });
  if (!has_space && single_char_ids && !sft.find_edge(text)) {
    for (char c : text) out.push_back(sft.edge_index(std::string_view(&c, 1)));
    return out;
  }
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == ',')) ++i;
    std::size_t j = i;
    while (j < text.size() && !(text[j] == ' ' || text[j] == '\t' || text[j] == '\n' || text[j] == ',')) ++j;
    if (j > i) out.push_back(sft.edge_index(text.substr(i, j - i)));
    i = j;
  }
  return out;
}

std::string format_word(const Sft& sft, std::span<const Symbol> word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out.push_back(' ');
    out += sft.edge(word[i]).id;
  }
  return out;
}

bool is_admissible(const Sft& sft, std::span<const Symbol> word) {
  if (word.empty()) fail(ErrorKind::input, "empty-word", "admissibility of the empty word is undefined");
  for (Symbol s : word) {
    if (s >= sft.num_edges()) fail(ErrorKind::input, "unknown-edge", "edge index " + std::to_string(s) + " out of range");
  }
  for (std::size_t i = 0; i + 1 < word.size(); ++i) {
    if (sft.edge(word[i]).target != sft.edge(word[i + 1]).source) return false;
  }
  return true;
}

std::vector<std::vector<VertexId>> strongly_connected_components(const Sft& sft) {
  // Iterative Tarjan.
  const std::size_t n = sft.num_vertices();
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<VertexId> stack;
  std::vector<std::vector<VertexId>> comps;
  std::size_t counter = 0;

  struct Frame {
    VertexId v;
    std::size_t next;
  };
  for (VertexId root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      auto outs = sft.out_edges(f.v);
      if (f.next < outs.size()) {
        VertexId w = sft.edge(outs[f.next++]).target;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      VertexId v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<VertexId> comp;
        VertexId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
    }
  }
  return comps;
}

namespace {

// Period of the strongly connected component `comp` (gcd of cycle lengths).
std::size_t component_period(const Sft& sft, const std::vector<VertexId>& comp) {
  std::vector<long> level(sft.num_vertices(), -1);
  std::vector<char> member(sft.num_vertices(), 0);
  for (auto v : comp) member[v] = 1;
  std::vector<VertexId> queue{comp.front()};
  level[comp.front()] = 0;
  std::size_t g = 0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    VertexId v = queue[qi];
    for (Symbol e : sft.out_edges(v)) {
      VertexId w = sft.edge(e).target;
      if (!member[w]) continue;
      if (level[w] < 0) {
        level[w] = level[v] + 1;
        queue.push_back(w);
      } else {
        g = std::gcd(g, static_cast<std::size_t>(std::labs(level[v] + 1 - level[w])));
      }
    }
  }
  return g;
}

constexpr double kPowerTolerance = 1e-12;
constexpr std::size_t kPowerIterationCap = 1'000'000;

// Power iteration with Collatz-Wielandt bracketing. Returns nullopt on cap.
std::optional<double> power_iteration(const std::vector<double>& a, std::size_t n) {
  std::vector<double> x(n, 1.0), y(n, 0.0);
  for (std::size_t iter = 0; iter < kPowerIterationCap; ++iter) {
    kernels::matvec(a, n, x, y);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = y[i] / x[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      peak = std::max(peak, y[i]);
    }
    if (hi - lo <= kPowerTolerance * hi) return 0.5 * (lo + hi);
    if (peak <= 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / peak;
  }
  return std::nullopt;
}

}  // namespace

double spectral_radius_bisection(std::span<const double> a, std::size_t n) {
  if (n == 0) return 0.0;
  // lambda > rho(A) iff lambda*I - A is a nonsingular M-matrix, which for a
  // Z-matrix holds iff elimination without pivoting has positive pivots.
  auto above_radius = [&](double lambda) {
    std::vector<double> m(n * n);
    for (std::size_t i = 0; i < n * n; ++i) m[i] = -a[i];
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] += lambda;
    for (std::size_t k = 0; k < n; ++k) {
      double pivot = m[k * n + k];
      if (!(pivot > 0.0)) return false;
      for (std::size_t i = k + 1; i < n; ++i) {
        double f = m[i * n + k] / pivot;
        if (f == 0.0) continue;
        for (std::size_t j = k; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
      }
    }
    return true;
  };
  double hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += a[i * n + j];
    hi = std::max(hi, row);
  }
  hi += 1.0;
  double lo = 0.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (above_radius(mid)) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

double spectral_radius(const Sft& sft) {
  if (sft.empty()) fail(ErrorKind::input, "empty-system", "spectral radius of the empty system");
  double rho = 0.0;
  for (const auto& comp : strongly_connected_components(sft)) {
    const std::size_t c = comp.size();
    std::vector<VertexId> local(sft.num_vertices(), 0);
    for (std::size_t i = 0; i < c; ++i) local[comp[i]] = static_cast<VertexId>(i);
    std::vector<char> member(sft.num_vertices(), 0);
    for (auto v : comp) member[v] = 1;
    std::vector<double> b(c * c, 0.0);
    bool has_edge = false;
    for (const auto& e : sft.edges()) {
      if (member[e.source] && member[e.target]) {
        b[local[e.source] * c + local[e.target]] += 1.0;
        has_edge = true;
      }
    }
    if (!has_edge) continue;
    // Periodic components need the shift A+I to make power iteration converge.
    const bool shifted = component_period(sft, comp) != 1;
    if (shifted) {
      for (std::size_t i = 0; i < c; ++i) b[i * c + i] += 1.0;
    }
    double r;
    if (auto p = power_iteration(b, c)) r = *p;
    else r = spectral_radius_bisection(b, c);
    if (shifted) r -= 1.0;
    rho = std::max(rho, r);
  }
  return rho;
}

double entropy(const Sft& sft) {
  double rho = spectral_radius(sft);
  if (rho <= 1.0) return 0.0;
  return std::log(rho);
}

bool is_mixing(const Sft& sft) {
  if (sft.empty()) fail(ErrorKind::input, "empty-system", "mixing is undefined for the empty system");
  auto comps = strongly_connected_components(sft);
  if (comps.size() != 1) return false;
  return component_period(sft, comps.front()) == 1;
}

bool is_border_free(std::span<const Symbol> word) {
  // Prefix function: the longest proper border of the whole word is pi[n-1].
  const std::size_t n = word.size();
  if (n == 0) return true;
  std::vector<std::size_t> pi(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && word[i] != word[k]) k = pi[k - 1];
    if (word[i] == word[k]) ++k;
    pi[i] = k;
  }
  return pi[n - 1] == 0;
}

bool is_marker(const Sft& sft, std::span<const Symbol> w) {
  if (!is_admissible(sft, w)) fail(ErrorKind::input, "inadmissible", "marker candidate is not admissible");
  return is_border_free(w);
}

namespace {

// All admissible paths of exactly `len` edges, in lexicographic order.
template <typename Visit>
void for_each_path(const Sft& sft, std::size_t len, Visit&& visit) {
  if (len == 0) return;
  Word path;
  path.reserve(len);
  // Explicit DFS so the enumeration order is lexicographic on edge index.
  std::vector<std::size_t> cursor;
  for (Symbol first = 0; first < sft.num_edges(); ++first) {
    path.assign(1, first);
    cursor.assign(1, 0);
    while (!path.empty()) {
      if (path.size() == len) {
        if (!visit(std::as_const(path))) return;
        path.pop_back();
        cursor.pop_back();
        continue;
      }
      auto outs = sft.out_edges(sft.edge(path.back()).target);
      std::size_t& c = cursor.back();
      if (c < outs.size()) {
        path.push_back(outs[c++]);
        cursor.push_back(0);
      } else {
        path.pop_back();
        cursor.pop_back();
      }
    }
  }
}

std::string join_ids(const Sft& sft, std::span<const Symbol> path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s.push_back('.');
    s += sft.edge(path[i]).id;
  }
  return s;
}

}  // namespace

Sft restrict_forbidden(const Sft& sft, std::span<const Symbol> w) {
  if (w.empty()) fail(ErrorKind::input, "empty-word", "cannot forbid the empty word");
  for (Symbol s : w) {
    if (s >= sft.num_edges()) fail(ErrorKind::input, "unknown-edge", "edge index out of range");
  }
  const std::size_t len = w.size();
  std::vector<EdgeSpec> edges;
  std::vector<std::string> vertices;
  if (len == 1) {
    vertices = sft.vertices();
    for (Symbol e = 0; e < sft.num_edges(); ++e) {
      if (e == w[0]) continue;
      const Edge& ed = sft.edge(e);
      edges.push_back({ed.id, sft.vertices()[ed.source], sft.vertices()[ed.target], ed.label});
    }
    return Sft::build(std::move(vertices), std::move(edges));
  }
  // States are paths of len-1 edges, edges are paths of len edges.
  for_each_path(sft, len - 1, [&](const Word& p) {
    vertices.push_back(join_ids(sft, p));
    return true;
  });
  const Word forbidden(w.begin(), w.end());
  for_each_path(sft, len, [&](const Word& p) {
    if (p == forbidden) return true;
    std::span<const Symbol> ps(p);
    edges.push_back({join_ids(sft, ps), join_ids(sft, ps.first(len - 1)), join_ids(sft, ps.subspan(1)), sft.edge(p.back()).label});
    return true;
  });
  return Sft::build(std::move(vertices), std::move(edges));
}

int transition_length(const Sft& sft) {
  if (sft.empty() || !is_mixing(sft)) fail(ErrorKind::precondition, "not-mixing", "transition length requires a mixing system");
  const std::size_t n = sft.num_vertices();
  const std::size_t words = (n + 63) / 64;
  using Rows = std::vector<std::uint64_t>;
  Rows adj(n * words, 0);
  for (const auto& e : sft.edges()) adj[e.source * words + e.target / 64] |= std::uint64_t{1} << (e.target % 64);
  auto all_positive = [&](const Rows& m) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!((m[i * words + j / 64] >> (j % 64)) & 1)) return false;
      }
    }
    return true;
  };
  Rows power = adj;
  const std::size_t bound = (n - 1) * (n - 1) + 1;
  for (std::size_t m = 1; m <= bound; ++m) {
    // For an essential primitive matrix, A^m > 0 implies A^(m+1) > 0.
    if (all_positive(power)) return static_cast<int>(m);
    Rows next(n * words, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if ((power[i * words + j / 64] >> (j % 64)) & 1) {
          for (std::size_t k = 0; k < words; ++k) next[i * words + k] |= adj[j * words + k];
        }
      }
    }
    power.swap(next);
  }
  fail(ErrorKind::internal, "wielandt", "no strictly positive power within the Wielandt bound");
}

ExactReach::ExactReach(const Sft& sft, VertexId target, std::size_t horizon)
    : n_(sft.num_vertices()), horizon_(horizon), bits_((horizon + 1) * n_, 0) {
  bits_[target] = 1;
  for (std::size_t r = 1; r <= horizon; ++r) {
    for (const auto& e : sft.edges()) {
      if (bits_[(r - 1) * n_ + e.target]) bits_[r * n_ + e.source] = 1;
    }
  }
}

Word connecting_block(const Sft& sft, VertexId s, VertexId t, std::size_t m) {
  if (m < 1) fail(ErrorKind::input, "bad-length", "connecting block length must be >= 1");
  if (s >= sft.num_vertices() || t >= sft.num_vertices()) fail(ErrorKind::input, "unknown-vertex", "vertex index out of range");
  ExactReach reach(sft, t, m);
  if (!reach.reaches(s, m)) {
    fail(ErrorKind::precondition, "no-connector",
         "no path of length " + std::to_string(m) + " from " + sft.vertices()[s] + " to " + sft.vertices()[t]);
  }
  Word path;
  path.reserve(m);
  VertexId cur = s;
  for (std::size_t left = m; left > 0; --left) {
    for (Symbol e : sft.out_edges(cur)) {
      if (reach.reaches(sft.edge(e).target, left - 1)) {
        path.push_back(e);
        cur = sft.edge(e).target;
        break;
      }
    }
  }
  return path;
}

std::uint64_t count_paths(const Sft& sft, VertexId s, VertexId t, std::size_t m) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> cur(sft.num_vertices(), 0), next(sft.num_vertices(), 0);
  cur[s] = 1;
  for (std::size_t step = 0; step < m; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (const auto& e : sft.edges()) {
      std::uint64_t add = cur[e.source];
      std::uint64_t& dst = next[e.target];
      dst = (kMax - dst < add) ? kMax : dst + add;
    }
    cur.swap(next);
  }
  return cur[t];
}

std::vector<Symbol> label_map(const Sft& restricted, const Sft& base) {
  std::vector<Symbol> out(restricted.num_edges());
  for (Symbol e = 0; e < restricted.num_edges(); ++e) out[e] = base.edge_index(restricted.edge(e).label);
  return out;
}

MarkerSearch find_marker(const Sft& sft, double t, std::size_t max_len) {
  if (sft.empty() || !is_mixing(sft)) fail(ErrorKind::precondition, "not-mixing", "marker search requires a mixing system");
  const double h = entropy(sft);
  if (!(t > 0.0 && t < h)) fail(ErrorKind::precondition, "entropy-gap", "marker search requires 0 < t < h(Y)");

  std::set<std::string> alphabet;
  for (const auto& e : sft.edges()) alphabet.insert(e.label);

  double best = -1.0;
  std::optional<MarkerSearch> found;
  for (std::size_t len = 1; len <= max_len && !found; ++len) {
    for_each_path(sft, len, [&](const Word& w) {
      if (!is_border_free(w)) return true;
      Sft restricted = restrict_forbidden(sft, w);
      if (restricted.empty()) return true;
      double hr = entropy(restricted);
      best = std::max(best, hr);
      if (!(hr > t) || !is_mixing(restricted)) return true;
      std::set<std::string> used;
      for (const auto& e : restricted.edges()) used.insert(e.label);
      if (used != alphabet) return true;
      found = MarkerSearch{w, std::move(restricted), hr};
      return false;
    });
  }
  if (!found) {
    fail(ErrorKind::precondition, "marker-not-found",
         "no marker up to length " + std::to_string(max_len) + " keeps entropy above t; best restricted entropy " +
             (best < 0 ? std::string("n/a") : std::to_string(best)));
  }
  return std::move(*found);
}

}  // namespace symdyn
