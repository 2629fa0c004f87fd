// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "symdyn/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "symdyn/errors.hpp"
#include "symdyn/prng.hpp"

namespace symdyn {
namespace {

// Largest k such that base^k fits in 64 bits (0 if base is huge).
std::size_t packable_length(std::uint64_t base) {
  std::size_t k = 0;
  unsigned __int128 v = 1;
  while (true) {
    v *= base;
    if (v > std::numeric_limits<std::uint64_t>::max()) return k;
    ++k;
    if (k >= 64) return k;
  }
}

std::map<Word, std::uint64_t> count_words(std::span<const Symbol> sym, std::size_t k) {
  std::map<Word, std::uint64_t> out;
  if (sym.size() < k) return out;
  const std::uint64_t base = static_cast<std::uint64_t>(*std::max_element(sym.begin(), sym.end())) + 1;
  if (base >= 2 && k <= packable_length(base)) {
    std::unordered_map<std::uint64_t, std::uint64_t> packed;
    std::uint64_t top = 1;
    for (std::size_t i = 1; i < k; ++i) top *= base;
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < k; ++i) code = code * base + sym[i];
    ++packed[code];
    for (std::size_t i = k; i < sym.size(); ++i) {
      code = (code - sym[i - k] * top) * base + sym[i];
      ++packed[code];
    }
    for (auto [key, n] : packed) {
      std::uint64_t c = key;
      Word w(k);
      for (std::size_t i = k; i-- > 0;) {
        w[i] = static_cast<Symbol>(c % base);
        c /= base;
      }
      out.emplace(std::move(w), n);
    }
    return out;
  }
  std::unordered_map<Word, std::uint64_t, WordHash> hashed;
  Word w(k);
  for (std::size_t i = 0; i + k <= sym.size(); ++i) {
    std::copy(sym.begin() + static_cast<long>(i), sym.begin() + static_cast<long>(i + k), w.begin());
    ++hashed[w];
  }
  for (auto& [word, n] : hashed) out.emplace(word, n);
  return out;
}

double plogp_sum(const std::map<Word, std::uint64_t>& counts, std::uint64_t denom) {
  double h = 0.0;
  for (const auto& [w, c] : counts) {
    double p = static_cast<double>(c) / static_cast<double>(denom);
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(std::span<const Symbol> symbols, int k_max) : k_max_(k_max), n_(symbols.size()) {
  if (k_max < 1) fail(ErrorKind::input, "bad-k", "k_max must be >= 1");
  if (symbols.size() < static_cast<std::size_t>(k_max)) fail(ErrorKind::precondition, "short-sample", "sample shorter than k_max");
  counts_.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) counts_.push_back(count_words(symbols, static_cast<std::size_t>(k)));
}

std::uint64_t EmpiricalMeasure::count(std::span<const Symbol> word) const {
  if (word.empty() || word.size() > static_cast<std::size_t>(k_max_)) return 0;
  const auto& m = counts_[word.size() - 1];
  auto it = m.find(Word(word.begin(), word.end()));
  return it == m.end() ? 0 : it->second;
}

double EmpiricalMeasure::freq(std::span<const Symbol> word) const {
  if (word.empty()) return 1.0;
  return static_cast<double>(count(word)) / static_cast<double>(denominator(word.size()));
}

EmpiricalMeasure empirical_measure(const SymbolicSample& sample, int k_max) { return EmpiricalMeasure(sample.symbols, k_max); }

SymbolicSample truncate(const SymbolicSample& sample, Symbol cap) {
  SymbolicSample out = sample;
  for (auto& s : out.symbols) s = std::min(s, cap);
  return out;
}

GenericityReport genericity_check(const SymbolicSample& sample, int k) {
  const std::size_t n = sample.size();
  if (k < 1 || n < 4 * static_cast<std::size_t>(k)) fail(ErrorKind::precondition, "short-sample", "genericity check needs length >= 4k");
  std::span<const Symbol> all(sample.symbols);
  const std::size_t half = n / 2;
  EmpiricalMeasure first(all.first(half), k), second(all.subspan(half), k);
  EmpiricalMeasure central(all.subspan(n / 4, half), k), whole(all, k);
  auto max_gap = [k](const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    double d = 0.0;
    for (const auto& [w, c] : a.words(static_cast<std::size_t>(k))) d = std::max(d, std::abs(a.freq(w) - b.freq(w)));
    for (const auto& [w, c] : b.words(static_cast<std::size_t>(k))) d = std::max(d, std::abs(a.freq(w) - b.freq(w)));
    return d;
  };
  GenericityReport r;
  r.discrepancy = max_gap(first, second);
  r.two_sided_discrepancy = max_gap(central, whole);
  const Symbol top = *std::max_element(all.begin(), all.end());
  for (std::uint64_t cap = 1; cap <= std::max<Symbol>(top, 1); cap *= 2) {
    auto escaped = std::count_if(all.begin(), all.end(), [cap](Symbol s) { return s >= cap; });
    r.escape_mass.emplace_back(static_cast<Symbol>(cap), static_cast<double>(escaped) / static_cast<double>(n));
  }
  return r;
}

MarkovSource MarkovSource::create(std::vector<std::vector<double>> rows) {
  const std::size_t n = rows.size();
  if (n == 0) fail(ErrorKind::input, "bad-markov", "empty transition matrix");
  MarkovSource src;
  src.n_ = n;
  src.p_.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) fail(ErrorKind::input, "bad-markov", "transition matrix is not square");
    double sum = 0.0;
    for (double v : rows[i]) {
      if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorKind::input, "bad-markov", "negative or non-finite probability in row " + std::to_string(i));
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) fail(ErrorKind::input, "bad-markov", "row " + std::to_string(i) + " does not sum to 1");
    src.p_.insert(src.p_.end(), rows[i].begin(), rows[i].end());
  }

  // Solve pi (P - I) = 0 with sum(pi) = 1 by Gaussian elimination with
  // partial pivoting; the last equation is replaced by the normalization.
  std::vector<double> a(n * (n + 1), 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) a[j * (n + 1) + i] = src.p_[i * n + j] - (i == j ? 1.0 : 0.0);
  }
  for (std::size_t i = 0; i < n; ++i) a[(n - 1) * (n + 1) + i] = 1.0;
  a[(n - 1) * (n + 1) + n] = 1.0;
  bool singular = false;
  for (std::size_t c = 0; c < n && !singular; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r * (n + 1) + c]) > std::abs(a[piv * (n + 1) + c])) piv = r;
    if (std::abs(a[piv * (n + 1) + c]) < 1e-13) {
      singular = true;
      break;
    }
    for (std::size_t j = 0; j <= n; ++j) std::swap(a[c * (n + 1) + j], a[piv * (n + 1) + j]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      double f = a[r * (n + 1) + c] / a[c * (n + 1) + c];
      for (std::size_t j = c; j <= n; ++j) a[r * (n + 1) + j] -= f * a[c * (n + 1) + j];
    }
  }
  src.pi_.assign(n, 0.0);
  if (!singular) {
    for (std::size_t i = 0; i < n; ++i) src.pi_[i] = a[i * (n + 1) + n] / a[i * (n + 1) + i];
  } else {
    // Reducible chain: the stationary law is not unique. Use the Cesaro
    // average of the uniform start, which is invariant in the limit.
    std::vector<double> cur(n, 1.0 / static_cast<double>(n)), next(n), acc(n, 0.0);
    constexpr int kSteps = 4096;
    for (int s = 0; s < kSteps; ++s) {
      for (std::size_t j = 0; j < n; ++j) acc[j] += cur[j];
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) next[j] += cur[i] * src.p_[i * n + j];
      cur.swap(next);
    }
    for (std::size_t j = 0; j < n; ++j) src.pi_[j] = acc[j] / kSteps;
  }
  double total = 0.0;
  for (auto& v : src.pi_) {
    v = std::max(v, 0.0);
    total += v;
  }
  for (auto& v : src.pi_) v /= total;
  return src;
}

std::vector<std::vector<double>> MarkovSource::rows() const {
  std::vector<std::vector<double>> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i].assign(p_.begin() + static_cast<long>(i * n_), p_.begin() + static_cast<long>((i + 1) * n_));
  return out;
}

namespace {

std::size_t draw(SplitMix64& rng, std::span<const double> probs) {
  double u = rng.next_double();
  double acc = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    acc += probs[j];
    if (u < acc) return j;
  }
  // Rounding left u above the cumulative sum: take the last positive entry.
  for (std::size_t j = probs.size(); j-- > 0;)
    if (probs[j] > 0.0) return j;
  return probs.size() - 1;
}

}  // namespace

SymbolicSample markov_sample(const MarkovSource& source, std::size_t length, std::uint64_t seed) {
  if (length < 1) fail(ErrorKind::input, "bad-length", "sample length must be >= 1");
  SplitMix64 rng(seed);
  const std::size_t n = source.states();
  std::vector<double> p(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p[i * n + j] = source.p(i, j);
  SymbolicSample out;
  out.symbols.resize(length);
  std::size_t state = draw(rng, source.stationary());
  out.symbols[0] = static_cast<Symbol>(state);
  for (std::size_t t = 1; t < length; ++t) {
    state = draw(rng, std::span<const double>(p).subspan(state * n, n));
    out.symbols[t] = static_cast<Symbol>(state);
  }
  return out;
}

double markov_entropy(const MarkovSource& source) {
  double h = 0.0;
  for (std::size_t i = 0; i < source.states(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < source.states(); ++j) {
      double v = source.p(i, j);
      if (v > 0.0) row -= v * std::log(v);
    }
    h += source.stationary()[i] * row;
  }
  return h;
}

double block_entropy(const EmpiricalMeasure& em, std::size_t k) {
  if (k == 0) return 0.0;
  return plogp_sum(em.words(k), em.denominator(k));
}

double estimate_entropy(const EmpiricalMeasure& em, int k) {
  if (k < 0 || k >= em.k_max()) fail(ErrorKind::precondition, "bad-k", "estimate_entropy needs 0 <= k < k_max");
  double h = block_entropy(em, static_cast<std::size_t>(k) + 1) - block_entropy(em, static_cast<std::size_t>(k));
  return std::max(h, 0.0);
}

double estimate_entropy_corrected(const EmpiricalMeasure& em, int k) {
  if (k < 0 || k >= em.k_max()) fail(ErrorKind::precondition, "bad-k", "estimate_entropy needs 0 <= k < k_max");
  auto corrected = [&](std::size_t j) {
    if (j == 0) return 0.0;
    return block_entropy(em, j) + static_cast<double>(em.words(j).size() - 1) / (2.0 * static_cast<double>(em.denominator(j)));
  };
  const auto ku = static_cast<std::size_t>(k);
  return std::max(corrected(ku + 1) - corrected(ku), 0.0);
}

double estimate_entropy(const SymbolicSample& sample, int k) { return estimate_entropy(empirical_measure(sample, k + 1), k); }

SliceResult t_slice_filter(std::span<const SymbolicSample> samples, double t, int k) {
  SliceResult r;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double h = estimate_entropy(samples[i], k);
    r.estimates.push_back(h);
    (h < t ? r.kept : r.discarded).push_back(i);
  }
  return r;
}

std::string to_text(const SymbolicSample& sample, const Sft* sft) {
  std::ostringstream out;
  const bool edge = sample.kind == AlphabetKind::edge;
  if (edge && !sft) fail(ErrorKind::input, "missing-sft", "edge samples need an SFT to spell symbols");
  out << "sample " << sample.base_index << ' ' << sample.size() << ' ' << (edge ? "edge" : "source") << '\n';
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (i) out << ' ';
    if (edge) out << sft->edge(sample.symbols[i]).id;
    else out << sample.symbols[i];
  }
  out << '\n';
  return out.str();
}

SymbolicSample parse_sample(std::string_view text, const Sft* sft) {
  std::istringstream in{std::string(text)};
  std::string tag, kind;
  long long base = 0;
  unsigned long long length = 0;
  if (!(in >> tag >> base >> length >> kind) || tag != "sample") {
    fail(ErrorKind::input, "parse", "expected 'sample <base_index> <length> <alphabet_kind>'");
  }
  SymbolicSample s;
  s.base_index = base;
  if (kind == "edge") {
    if (!sft) fail(ErrorKind::input, "missing-sft", "edge samples need an SFT to resolve ids");
    s.kind = AlphabetKind::edge;
  } else if (kind != "source") {
    fail(ErrorKind::input, "parse", "unknown alphabet kind '" + kind + "'");
  }
  s.symbols.reserve(length);
  std::string tok;
  while (in >> tok) {
    if (s.kind == AlphabetKind::edge) {
      s.symbols.push_back(sft->edge_index(tok));
    } else {
      std::size_t pos = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(tok, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != tok.size() || tok[0] == '-' || v > 0xffffffffUL) fail(ErrorKind::input, "parse", "bad symbol '" + tok + "'");
      s.symbols.push_back(static_cast<Symbol>(v));
    }
  }
  if (s.symbols.size() != length) {
    fail(ErrorKind::input, "parse", "header declares " + std::to_string(length) + " symbols, found " + std::to_string(s.symbols.size()));
  }
  if (s.symbols.empty()) fail(ErrorKind::input, "parse", "empty sample");
  return s;
}

std::string to_text(const MarkovSource& source) {
  std::ostringstream out;
  out.precision(17);
  out << "markov " << source.states() << '\n';
  for (std::size_t i = 0; i < source.states(); ++i) {
    for (std::size_t j = 0; j < source.states(); ++j) out << (j ? " " : "") << source.p(i, j);
    out << '\n';
  }
  return out.str();
}

MarkovSource parse_markov(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tag;
  std::size_t n = 0;
  if (!(in >> tag >> n) || tag != "markov" || n == 0) fail(ErrorKind::input, "parse", "expected 'markov <n>'");
  std::vector<std::vector<double>> rows(n, std::vector<double>(n));
  for (auto& row : rows)
    for (auto& v : row)
      if (!(in >> v)) fail(ErrorKind::input, "parse", "expected " + std::to_string(n * n) + " probabilities");
  std::string extra;
  if (in >> extra) fail(ErrorKind::input, "parse", "trailing data after transition matrix");
  return MarkovSource::create(std::move(rows));
}

}  // namespace symdyn
