// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "symdyn/induced.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "symdyn/errors.hpp"
#include "symdyn/kernels.hpp"

namespace symdyn {

std::optional<std::size_t> IndexSets::rank(std::int64_t j) const {
  auto it = std::lower_bound(I2.begin(), I2.end(), j);
  if (it == I2.end() || *it != j) return std::nullopt;
  return static_cast<std::size_t>(it - I2.begin());
}

std::int64_t compute_N(double h_prime, double t, std::size_t len_w, std::size_t M) {
  if (!(t > 0.0) || !(t < h_prime)) fail(ErrorKind::precondition, "entropy-gap", "need 0 < t < h'");
  const double rhs = h_prime / (h_prime - t) * static_cast<double>(len_w + 4 * M + 1);
  if (!std::isfinite(rhs) || rhs > 1e15) fail(ErrorKind::precondition, "entropy-gap", "h' - t too small for a finite N");
  return static_cast<std::int64_t>(std::floor(rhs)) + 1;
}

namespace {

struct GapStat {
  std::uint64_t count = 0;
  std::int64_t last = 0;
  bool spaced = true;
};

void note(GapStat& s, std::int64_t pos, std::int64_t N) {
  if (s.count && pos - s.last < N) s.spaced = false;
  s.last = pos;
  ++s.count;
}

}  // namespace

Word choose_block_a(const SymbolicSample& sample, std::int64_t N, std::size_t max_len, std::size_t min_count) {
  const auto& x = sample.symbols;
  if (x.empty()) fail(ErrorKind::input, "empty-sample", "sample is empty");
  min_count = std::max<std::size_t>(min_count, 1);
  const std::uint64_t base = static_cast<std::uint64_t>(*std::max_element(x.begin(), x.end())) + 1;
  unsigned __int128 span_k = 1;  // base^k, saturating above 2^64
  std::uint64_t top = 1;         // base^(k-1) while packing
  for (std::size_t k = 1; k <= std::min(max_len, x.size()); ++k) {
    if (k > 1) top = static_cast<std::uint64_t>(span_k);
    if (span_k <= std::numeric_limits<std::uint64_t>::max()) span_k *= base;
    if (span_k <= std::numeric_limits<std::uint64_t>::max()) {
      std::unordered_map<std::uint64_t, GapStat> stats;
      stats.reserve(std::min<std::size_t>(x.size(), 1u << 20));
      std::uint64_t code = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (i >= k) code -= x[i - k] * top;
        code = code * base + x[i];
        if (i + 1 >= k) note(stats[code], static_cast<std::int64_t>(i + 1 - k), N);
      }
      std::optional<std::uint64_t> best;
      for (const auto& [key, s] : stats)
        if (s.spaced && s.count >= min_count && (!best || key < *best)) best = key;
      if (best) {
        Word a(k);
        std::uint64_t c = *best;
        for (std::size_t i = k; i-- > 0;) {
          a[i] = static_cast<Symbol>(c % base);
          c /= base;
        }
        return a;
      }
    } else {
      std::unordered_map<Word, GapStat, WordHash> stats;
      Word w(k);
      for (std::size_t i = 0; i + k <= x.size(); ++i) {
        std::copy(x.begin() + static_cast<long>(i), x.begin() + static_cast<long>(i + k), w.begin());
        note(stats[w], static_cast<std::int64_t>(i), N);
      }
      const Word* best = nullptr;
      for (const auto& [word, s] : stats)
        if (s.spaced && s.count >= min_count && (!best || word < *best)) best = &word;
      if (best) return *best;
    }
  }
  fail(ErrorKind::precondition, "no-marker-anchor",
       "no block up to length " + std::to_string(max_len) + " occurs " + std::to_string(min_count) + "+ times with gaps >= " + std::to_string(N));
}

std::vector<std::int64_t> occurrences(const SymbolicSample& sample, std::span<const Symbol> a) {
  std::vector<std::int64_t> out;
  const std::span<const Symbol> x(sample.symbols);
  if (a.empty() || a.size() > x.size()) return out;
  const std::size_t last = x.size() - a.size();
  std::size_t i = 0;
  while (true) {
    i = kernels::find_value(x.first(last + 1), a[0], i);
    if (i > last) break;
    if (kernels::count_equal(x.subspan(i, a.size()), a) == a.size()) out.push_back(static_cast<std::int64_t>(i));
    ++i;
  }
  return out;
}

IndexSets index_sets(std::vector<std::int64_t> I1, std::int64_t range_lo, std::int64_t range_hi, std::size_t len_w, std::size_t M) {
  IndexSets idx;
  idx.range_lo = range_lo;
  idx.range_hi = range_hi;
  idx.len_w = len_w;
  idx.M = M;
  const auto gap = static_cast<std::int64_t>(idx.protected_width());
  for (std::size_t k = 1; k < I1.size(); ++k) {
    if (I1[k] <= I1[k - 1]) fail(ErrorKind::input, "unsorted", "I1 must be strictly increasing");
    if (I1[k] - I1[k - 1] < gap) {
      fail(ErrorKind::precondition, "windows-collide",
           "occurrences " + std::to_string(I1[k - 1]) + " and " + std::to_string(I1[k]) + " are closer than " + std::to_string(gap));
    }
  }
  const auto m = static_cast<std::int64_t>(M);
  const auto tail = static_cast<std::int64_t>(len_w) + 3 * m;
  std::size_t next = 0;
  for (std::int64_t j = range_lo; j <= range_hi; ++j) {
    while (next < I1.size() && I1[next] + tail < j) ++next;
    if (next < I1.size() && j >= I1[next] - m) {
      j = I1[next] + tail;  // skip the protected window
      continue;
    }
    idx.I2.push_back(j);
  }
  idx.I1 = std::move(I1);
  return idx;
}

Itinerary itinerary(const SymbolicSample& sample, const IndexSets& idx, std::size_t W) {
  const auto& x = sample.symbols;
  for (std::int64_t j : idx.I2) {
    if (j < 0 || static_cast<std::uint64_t>(j) + W > x.size()) {
      fail(ErrorKind::precondition, "window-overrun", "block at index " + std::to_string(j) + " leaves the sample");
    }
  }
  auto block = [&](std::int64_t j) { return x.begin() + j; };
  std::vector<std::size_t> order(idx.I2.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(block(idx.I2[a]), block(idx.I2[a]) + static_cast<long>(W), block(idx.I2[b]),
                                        block(idx.I2[b]) + static_cast<long>(W));
  };
  std::sort(order.begin(), order.end(), less);
  Itinerary out;
  out.x_prime.symbols.resize(idx.I2.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (r == 0 || less(order[r - 1], order[r])) out.table.emplace_back(block(idx.I2[order[r]]), block(idx.I2[order[r]]) + static_cast<long>(W));
    out.x_prime.symbols[order[r]] = static_cast<Symbol>(out.table.size() - 1);
  }
  return out;
}

Reconstruction reconstruct_from_itinerary(std::span<const Symbol> x_prime, std::span<const Word> table, const IndexSets& idx, std::size_t W) {
  if (x_prime.size() != idx.I2.size()) {
    fail(ErrorKind::corruption, "length-mismatch", "itinerary has " + std::to_string(x_prime.size()) + " symbols for " + std::to_string(idx.I2.size()) + " indices");
  }
  Reconstruction r;
  if (idx.I2.empty()) return r;
  if (idx.I2.front() < 0) fail(ErrorKind::precondition, "window-overrun", "negative index in I2");
  const std::size_t len = static_cast<std::size_t>(idx.I2.back()) + W;
  r.symbols.assign(len, 0);
  r.covered.assign(len, 0);
  for (std::size_t k = 0; k < x_prime.size(); ++k) {
    if (x_prime[k] >= table.size() || table[x_prime[k]].size() != W) {
      fail(ErrorKind::corruption, "bad-code", "itinerary symbol " + std::to_string(k) + " has no block of width " + std::to_string(W));
    }
    const Word& b = table[x_prime[k]];
    const auto j = static_cast<std::size_t>(idx.I2[k]);
    for (std::size_t d = 0; d < W; ++d) {
      if (r.covered[j + d] && r.symbols[j + d] != b[d]) {
        fail(ErrorKind::corruption, "overlap-mismatch", "blocks disagree at offset " + std::to_string(j + d) + " (itinerary index " + std::to_string(k) + ")");
      }
      r.symbols[j + d] = b[d];
      r.covered[j + d] = 1;
    }
  }
  return r;
}

AbramovReport abramov_check(const SymbolicSample& sample, const IndexSets& idx, int k) {
  AbramovReport rep;
  const auto range_len = static_cast<double>(idx.range_hi - idx.range_lo + 1);
  rep.mass = static_cast<double>(idx.I2.size()) / range_len;
  const auto em_x = empirical_measure(sample, k + 1);
  const auto em_it = empirical_measure(itinerary(sample, idx, idx.window_width()).x_prime, k + 1);
  auto gap = [&](double hx, double hit) {
    const double diff = std::abs(hit - (rep.mass > 0.0 ? hx / rep.mass : 0.0));
    return diff == 0.0 ? 0.0 : diff / std::max(hx, 1e-300);
  };
  rep.sample_entropy = estimate_entropy(em_x, k);
  rep.itinerary_entropy = estimate_entropy(em_it, k);
  rep.predicted = rep.mass > 0.0 ? rep.sample_entropy / rep.mass : 0.0;
  rep.relative_gap = gap(rep.sample_entropy, rep.itinerary_entropy);
  rep.corrected_sample_entropy = estimate_entropy_corrected(em_x, k);
  rep.corrected_itinerary_entropy = estimate_entropy_corrected(em_it, k);
  rep.corrected_gap = gap(rep.corrected_sample_entropy, rep.corrected_itinerary_entropy);
  return rep;
}

}  // namespace symdyn
