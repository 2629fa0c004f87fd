// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "symdyn/frequency_channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "symdyn/errors.hpp"
#include "symdyn/prng.hpp"

namespace symdyn {
namespace {

constexpr int kMaxFamily = 7;

void check_n_max(int n_max) {
  if (n_max < 1 || n_max > kMaxFamily) fail(ErrorKind::input, "bad-n-max", "n_max must be in 1.." + std::to_string(kMaxFamily));
}

// tolerance(n, n_max) = 2^-tolerance_exponent(n, n_max).
int tolerance_exponent(int n, int n_max) { return std::max(n * n + 2, n_max * n_max + 3); }

double nominal_sum(unsigned mask, int n_max) {
  double s = 0.0;
  for (int n = 1; n <= n_max; ++n)
    if (mask >> (n - 1) & 1u) s += nominal_weight(n);
  return s;
}

}  // namespace

ExtensionCounts extension_counts(const SymbolicSample& sample, std::span<const std::int64_t> starts, std::size_t a_len, std::size_t ext_len) {
  ExtensionCounts ext;
  ext.ext_len = ext_len;
  for (std::int64_t i : starts) {
    const auto from = static_cast<std::uint64_t>(i) + a_len;
    if (i < 0 || from + ext_len > sample.size()) fail(ErrorKind::precondition, "window-overrun", "context of the occurrence at " + std::to_string(i) + " leaves the sample");
    ++ext.counts[Word(sample.symbols.begin() + static_cast<long>(from), sample.symbols.begin() + static_cast<long>(from + ext_len))];
    ++ext.total;
  }
  return ext;
}

ExtensionCounts extension_counts(const EmpiricalMeasure& em, std::span<const Symbol> a, std::size_t ext_len) {
  const std::size_t k = a.size() + ext_len;
  if (a.empty() || k > static_cast<std::size_t>(em.k_max())) fail(ErrorKind::precondition, "short-measure", "measure does not reach |a| + ext_len");
  ExtensionCounts ext;
  ext.ext_len = ext_len;
  const auto& words = em.words(k);
  for (auto it = words.lower_bound(Word(a.begin(), a.end())); it != words.end(); ++it) {
    if (!std::equal(a.begin(), a.end(), it->first.begin())) break;
    ext.counts.emplace(Word(it->first.begin() + static_cast<long>(a.size()), it->first.end()), it->second);
    ext.total += it->second;
  }
  return ext;
}

double nominal_weight(int n) { return std::ldexp(1.0, -n * n); }

double tolerance(int n, int n_max) { return std::ldexp(1.0, -tolerance_exponent(n, n_max)); }

int UFamily::member(std::span<const Symbol> context) const {
  const Word key(context.begin(), context.end());
  for (std::size_t n = 0; n < sets.size(); ++n)
    if (std::binary_search(sets[n].begin(), sets[n].end(), key)) return static_cast<int>(n + 1);
  return 0;
}

UFamily choose_U_family(const ExtensionCounts& ext, int n_max) {
  check_n_max(n_max);
  if (ext.total == 0) fail(ErrorKind::precondition, "granularity", "the anchor block has no observed extensions");
  using u128 = unsigned __int128;
  UFamily fam;
  fam.ext_len = ext.ext_len;
  fam.total = ext.total;
  std::vector<bool> used(ext.counts.size(), false);
  const u128 total = ext.total;
  for (int n = 1; n <= n_max; ++n) {
    const int shift = n * n;
    std::vector<Word> set;
    u128 cum = 0;
    std::size_t k = 0;
    for (const auto& [s, c] : ext.counts) {
      if (!used[k] && ((cum + c) << shift) <= total) {
        cum += c;
        used[k] = true;
        set.push_back(s);
      }
      ++k;
    }
    // |cum / total - 2^-n^2| < 2^-e  <=>  |cum * 2^e - total * 2^(e - n^2)| < total
    const int e = tolerance_exponent(n, n_max);
    const u128 lhs = cum << e, rhs = total << (e - shift);
    const u128 diff = lhs > rhs ? lhs - rhs : rhs - lhs;
    if (diff >= total) {
      fail(ErrorKind::precondition, "granularity",
           "U_" + std::to_string(n) + " reaches " + std::to_string(static_cast<std::uint64_t>(cum)) + "/" + std::to_string(ext.total) +
               ", outside the tolerance; try a longer extension length");
    }
    fam.sets.push_back(std::move(set));
    fam.hits.push_back(static_cast<std::uint64_t>(cum));
  }
  return fam;
}

UFamily choose_U_family(const EmpiricalMeasure& em, std::span<const Symbol> a, int n_max, std::size_t ext_len) {
  return choose_U_family(extension_counts(em, a, ext_len), n_max);
}

SigmaBits sigma_from_digest(std::uint64_t digest, int n_max) {
  check_n_max(n_max);
  SigmaBits s;
  for (int n = 0; n < n_max; ++n) s.bits.push_back(static_cast<std::uint8_t>(digest >> n & 1u));
  return s;
}

void encode_sigma(std::vector<Symbol>& y, std::vector<std::uint8_t>& written, std::span<const std::int64_t> I1, std::span<const int> membership,
                  const SigmaBits& sigma, const MarkerScheme& scheme) {
  if (membership.size() != I1.size()) fail(ErrorKind::internal, "slot-collision", "membership list does not match the markers");
  if (sigma.bits.size() != static_cast<std::size_t>(scheme.n_max)) fail(ErrorKind::internal, "bad-sigma", "sigma length differs from n_max");
  const std::size_t M = scheme.M;
  for (std::size_t k = 0; k < I1.size(); ++k) {
    const int n = membership[k];
    const bool put_u = n > 0 && sigma.bits[static_cast<std::size_t>(n - 1)] != 0;
    const Word& block = put_u ? scheme.u_labels : scheme.v_labels;
    const auto start = static_cast<std::size_t>(I1[k]) + scheme.slot_offset();
    if (start + M > y.size()) fail(ErrorKind::internal, "slot-collision", "slot of the marker at " + std::to_string(I1[k]) + " leaves the output");
    for (std::size_t d = 0; d < M; ++d) {
      if (written[start + d]) fail(ErrorKind::internal, "slot-collision", "slot cell " + std::to_string(start + d) + " already written");
      y[start + d] = block[d];
      written[start + d] = 1;
    }
  }
}

SigmaRecovery decode_density(double f_hat, int n_max, std::size_t markers) {
  check_n_max(n_max);
  SigmaRecovery r;
  r.f_hat = f_hat;
  double best = std::numeric_limits<double>::infinity(), second = best;
  unsigned best_mask = 0;
  for (unsigned mask = 0; mask < (1u << n_max); ++mask) {
    const double d = std::abs(f_hat - nominal_sum(mask, n_max));
    if (d < best) {
      second = best;
      best = d;
      best_mask = mask;
    } else if (d < second) {
      second = d;
    }
  }
  r.distance = best;
  r.margin = second - best;
  for (int n = 0; n < n_max; ++n) r.sigma.bits.push_back(static_cast<std::uint8_t>(best_mask >> n & 1u));
  const double floor = markers ? 2.0 / static_cast<double>(markers) : std::numeric_limits<double>::infinity();
  if (r.margin < floor) {
    fail(ErrorKind::precondition, "ambiguous-density",
         "density " + std::to_string(f_hat) + " is within " + std::to_string(r.margin) + " of a second codeword (needs " + std::to_string(floor) + ")");
  }
  return r;
}

SigmaRecovery recover_sigma(std::span<const Symbol> y, std::span<const std::int64_t> I1, const MarkerScheme& scheme) {
  if (I1.empty()) fail(ErrorKind::precondition, "ambiguous-density", "no markers to read");
  const std::size_t M = scheme.M;
  std::uint64_t u_count = 0;
  for (std::int64_t i : I1) {
    const auto start = static_cast<std::size_t>(i) + scheme.slot_offset();
    if (i < 0 || start + M > y.size()) fail(ErrorKind::corruption, "slot-garbled", "slot of the marker at " + std::to_string(i) + " leaves the input");
    auto slot = y.subspan(start, M);
    if (std::equal(slot.begin(), slot.end(), scheme.u_labels.begin())) ++u_count;
    else if (!std::equal(slot.begin(), slot.end(), scheme.v_labels.begin()))
      fail(ErrorKind::corruption, "slot-garbled", "slot at " + std::to_string(start) + " holds neither u nor v");
  }
  auto r = decode_density(static_cast<double>(u_count) / static_cast<double>(I1.size()), scheme.n_max, I1.size());
  r.u_count = u_count;
  return r;
}

SeparationReport separation_check(int n_max) {
  check_n_max(n_max);
  const unsigned count = 1u << n_max;
  SeparationReport rep;
  rep.min_interval_gap = std::numeric_limits<double>::infinity();
  rep.min_decode_margin = std::numeric_limits<double>::infinity();
  for (unsigned s = 0; s < count; ++s) {
    for (unsigned t = s + 1; t < count; ++t) {
      // Range of sum_n (s_n - t_n) r_n over the tolerance box.
      double lo = 0.0, hi = 0.0;
      for (int n = 1; n <= n_max; ++n) {
        const int d = static_cast<int>(s >> (n - 1) & 1u) - static_cast<int>(t >> (n - 1) & 1u);
        const double a = d * (nominal_weight(n) - tolerance(n, n_max)), b = d * (nominal_weight(n) + tolerance(n, n_max));
        lo += std::min(a, b);
        hi += std::max(a, b);
      }
      const double gap = lo > 0.0 ? lo : (hi < 0.0 ? -hi : 0.0);
      rep.min_interval_gap = std::min(rep.min_interval_gap, gap);
    }
  }
  for (unsigned s = 0; s < count; ++s) {
    for (unsigned corner = 0; corner < count; ++corner) {
      double f = 0.0;
      for (int n = 1; n <= n_max; ++n) {
        if (!(s >> (n - 1) & 1u)) continue;
        f += nominal_weight(n) + ((corner >> (n - 1) & 1u) ? tolerance(n, n_max) : -tolerance(n, n_max));
      }
      const double own = std::abs(f - nominal_sum(s, n_max));
      for (unsigned t = 0; t < count; ++t)
        if (t != s) rep.min_decode_margin = std::min(rep.min_decode_margin, std::abs(f - nominal_sum(t, n_max)) - own);
    }
  }
  rep.ok = rep.min_interval_gap > 0.0 && rep.min_decode_margin > 0.0;
  return rep;
}

std::size_t SigmaSweep::recovered() const {
  return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const SigmaSweepCase& c) { return c.recovered; }));
}

SigmaSweep sigma_sweep(int n_max, std::size_t markers, std::uint64_t seed) {
  constexpr std::size_t spacing = 20, ctx_len = 5;
  MarkerScheme scheme;
  scheme.w = {0, 0, 1, 1};
  scheme.M = 2;
  scheme.u_labels = {1, 0};
  scheme.v_labels = {0, 1};
  scheme.n_max = n_max;

  SplitMix64 rng(seed);
  ExtensionCounts ext;
  ext.ext_len = ctx_len;
  std::vector<Word> contexts(markers, Word(ctx_len));
  for (auto& c : contexts) {
    for (auto& sym : c) sym = static_cast<Symbol>(rng.next() % 7);
    ++ext.counts[c];
    ++ext.total;
  }
  scheme.U = choose_U_family(ext, n_max);
  std::vector<std::int64_t> I1(markers);
  std::vector<int> membership(markers);
  for (std::size_t k = 0; k < markers; ++k) {
    I1[k] = static_cast<std::int64_t>(k * spacing);
    membership[k] = scheme.U.member(contexts[k]);
  }

  SigmaSweep out;
  out.n_max = n_max;
  out.markers = markers;
  for (unsigned m = 0; m < (1u << n_max); ++m) {
    SigmaSweepCase c;
    for (int n = 0; n < n_max; ++n) c.sigma.bits.push_back(static_cast<std::uint8_t>(m >> n & 1u));
    std::vector<Symbol> y(markers * spacing, 9);
    std::vector<std::uint8_t> written(y.size(), 0);
    encode_sigma(y, written, I1, membership, c.sigma, scheme);
    c.recovery = recover_sigma(y, I1, scheme);
    c.recovered = c.recovery.sigma == c.sigma;
    out.cases.push_back(std::move(c));
  }
  return out;
}

}  // namespace symdyn
