// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <map>

#include "doctest.h"
#include "symdyn/errors.hpp"
#include "symdyn/measures.hpp"
#include "symdyn/prng.hpp"

using namespace symdyn;

namespace {

SymbolicSample make(std::vector<Symbol> s) {
  SymbolicSample out;
  out.symbols = std::move(s);
  return out;
}

SymbolicSample periodic(std::size_t n, std::size_t period) {
  SymbolicSample s;
  for (std::size_t i = 0; i < n; ++i) s.symbols.push_back(static_cast<Symbol>(i % period));
  return s;
}

SymbolicSample coin(std::size_t n, std::uint64_t seed) {
  return markov_sample(MarkovSource::create({{0.5, 0.5}, {0.5, 0.5}}), n, seed);
}

// Independent count of a word by direct scan.
std::uint64_t scan_count(const std::vector<Symbol>& s, const Word& w) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i + w.size() <= s.size(); ++i)
    if (std::equal(w.begin(), w.end(), s.begin() + static_cast<long>(i))) ++c;
  return c;
}

// Stationary vector of a 2-state chain in closed form.
std::pair<double, double> two_state_pi(double p01, double p10) { return {p10 / (p01 + p10), p01 / (p01 + p10)}; }

}  // namespace

TEST_CASE("empirical measure basics") {
  auto em = empirical_measure(periodic(1000, 2), 1);
  CHECK(em.freq(Word{0}) == 0.5);
  CHECK(em.freq(Word{1}) == 0.5);

  auto c = empirical_measure(make(std::vector<Symbol>(100, 0)), 2);
  CHECK(em.sample_length() == 1000);
  CHECK(c.freq(Word{0, 0}) == 1.0);
  CHECK(c.count(Word{0, 0}) == 99);
  CHECK(c.count(Word{0, 1}) == 0);
}

TEST_CASE("empirical measure errors") {
  CHECK_THROWS_AS(empirical_measure(make({0, 1}), 0), Error);
  try {
    empirical_measure(make({0, 1}), 3);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
  }
  try {
    empirical_measure(make({0, 1}), 0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::input);
  }
}

TEST_CASE("fair coin length-3 frequencies match a direct scan") {
  auto s = coin(100000, 7);
  auto em = empirical_measure(s, 3);
  for (Symbol a = 0; a < 2; ++a)
    for (Symbol b = 0; b < 2; ++b)
      for (Symbol c = 0; c < 2; ++c) {
        Word w{a, b, c};
        CHECK(em.count(w) == scan_count(s.symbols, w));
        CHECK(std::abs(em.freq(w) - 0.125) < 0.02);
      }
}

TEST_CASE("large alphabet uses the general counting path") {
  SplitMix64 rng(3);
  SymbolicSample s;
  for (int i = 0; i < 2000; ++i) s.symbols.push_back(static_cast<Symbol>(rng.next() % 4000000000ULL));
  s.symbols[10] = s.symbols[500];
  s.symbols[11] = s.symbols[501];
  s.symbols[12] = s.symbols[502];
  auto em = empirical_measure(s, 3);
  Word w(s.symbols.begin() + 500, s.symbols.begin() + 503);
  CHECK(em.count(w) == scan_count(s.symbols, w));
  CHECK(em.count(w) >= 2);
}

TEST_CASE("property: normalization and marginal consistency") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 20 + rng.next() % 500;
    Symbol alpha = 1 + static_cast<Symbol>(rng.next() % 5);
    SymbolicSample s;
    for (std::size_t i = 0; i < n; ++i) s.symbols.push_back(static_cast<Symbol>(rng.next() % alpha));
    const int k_max = 4;
    auto em = empirical_measure(s, k_max);
    for (std::size_t k = 1; k <= k_max; ++k) {
      std::uint64_t total = 0;
      for (const auto& [w, c] : em.words(k)) total += c;
      CHECK(total == em.denominator(k));
    }
    for (std::size_t k = 1; k < k_max; ++k) {
      for (const auto& [w, c] : em.words(k)) {
        double sum = 0.0;
        for (Symbol a = 0; a < alpha; ++a) {
          Word ext = w;
          ext.push_back(a);
          sum += em.freq(ext);
        }
        CHECK(std::abs(sum - em.freq(w)) <= 2.0 / static_cast<double>(n));
      }
    }
  }
}

TEST_CASE("property: doubled sample frequencies are close") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 50 + rng.next() % 300;
    SymbolicSample s;
    for (std::size_t i = 0; i < n; ++i) s.symbols.push_back(static_cast<Symbol>(rng.next() % 3));
    SymbolicSample d = s;
    d.symbols.insert(d.symbols.end(), s.symbols.begin(), s.symbols.end());
    const int k = 3;
    auto a = empirical_measure(s, k), b = empirical_measure(d, k);
    for (const auto& [w, c] : b.words(k)) CHECK(std::abs(a.freq(w) - b.freq(w)) <= static_cast<double>(k) / static_cast<double>(n));
  }
}

TEST_CASE("truncate") {
  CHECK(truncate(make({0, 5, 2, 9}), 3).symbols == std::vector<Symbol>{0, 3, 2, 3});
  CHECK(truncate(make({0, 1, 2}), 3).symbols == std::vector<Symbol>{0, 1, 2});
  CHECK(truncate(make({0, 4, 1, 0, 7}), 1).symbols == std::vector<Symbol>{0, 1, 1, 0, 1});
  SplitMix64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    SymbolicSample s;
    for (int i = 0; i < 64; ++i) s.symbols.push_back(static_cast<Symbol>(rng.next() % 20));
    Symbol cap = 1 + static_cast<Symbol>(rng.next() % 20);
    auto once = truncate(s, cap);
    CHECK(truncate(once, cap) == once);
  }
}

TEST_CASE("genericity check") {
  auto r = genericity_check(periodic(1000, 2), 1);
  CHECK(r.discrepancy == 0.0);

  std::vector<Symbol> halves(500, 0);
  halves.insert(halves.end(), 500, 1);
  auto h = genericity_check(make(halves), 1);
  CHECK(h.discrepancy == 1.0);
  CHECK(h.two_sided_discrepancy == 0.0);

  auto src = MarkovSource::create({{0.9, 0.1}, {0.5, 0.5}});
  auto g = genericity_check(markov_sample(src, 100000, 21), 2);
  CHECK(g.discrepancy < 0.05);
  CHECK(g.two_sided_discrepancy < 0.05);

  auto e = genericity_check(make({0, 1, 2, 5, 0, 0, 9, 1}), 1);
  REQUIRE(e.escape_mass.size() == 4);
  CHECK(e.escape_mass[0].first == 1);
  CHECK(e.escape_mass[0].second == doctest::Approx(5.0 / 8));
  CHECK(e.escape_mass[3].first == 8);
  CHECK(e.escape_mass[3].second == doctest::Approx(1.0 / 8));

  CHECK_THROWS_AS(genericity_check(make({0, 1, 0}), 1), Error);
}

TEST_CASE("markov source validation and stationary law") {
  CHECK_THROWS_AS(MarkovSource::create({{0.5, 0.6}, {0.5, 0.5}}), Error);
  CHECK_THROWS_AS(MarkovSource::create({{1.5, -0.5}, {0.5, 0.5}}), Error);
  CHECK_THROWS_AS(MarkovSource::create({{1.0}, {1.0}}), Error);

  auto src = MarkovSource::create({{0.9, 0.1}, {0.5, 0.5}});
  auto [p0, p1] = two_state_pi(0.1, 0.5);
  CHECK(std::abs(src.stationary()[0] - p0) < 1e-12);
  CHECK(std::abs(src.stationary()[1] - p1) < 1e-12);

  SplitMix64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 1 + rng.next() % 6;
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (auto& row : rows) {
      double sum = 0.0;
      for (auto& v : row) sum += (v = rng.next_double());
      for (auto& v : row) v /= sum;
      // re-normalize the last entry so the row sums exactly
      double acc = 0.0;
      for (std::size_t j = 0; j + 1 < n; ++j) acc += row[j];
      row[n - 1] = 1.0 - acc;
    }
    auto m = MarkovSource::create(rows);
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) v += m.stationary()[i] * m.p(i, j);
      CHECK(std::abs(v - m.stationary()[j]) < 1e-9);
    }
    CHECK(markov_entropy(m) <= std::log(static_cast<double>(n)) + 1e-12);
  }
}

TEST_CASE("markov sampling") {
  auto id = MarkovSource::create({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    auto s = markov_sample(id, 200, seed);
    CHECK(std::all_of(s.symbols.begin(), s.symbols.end(), [&](Symbol x) { return x == s.symbols[0]; }));
  }
  auto fair = MarkovSource::create({{0.5, 0.5}, {0.5, 0.5}});
  CHECK(markov_sample(fair, 1000, 42) == markov_sample(fair, 1000, 42));
  CHECK(!(markov_sample(fair, 1000, 42) == markov_sample(fair, 1000, 43)));
  auto s = markov_sample(fair, 100000, 1);
  double mean = 0.0;
  for (Symbol x : s.symbols) mean += x;
  CHECK(std::abs(mean / 100000 - 0.5) < 0.01);
  CHECK_THROWS_AS(markov_sample(fair, 0, 1), Error);
}

TEST_CASE("markov entropy") {
  CHECK(markov_entropy(MarkovSource::create({{0.5, 0.5}, {0.5, 0.5}})) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(markov_entropy(MarkovSource::create({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}})) == 0.0);
  CHECK(markov_entropy(MarkovSource::create({{0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25}})) ==
        doctest::Approx(std::log(4.0)));

  // Formula with an independently solved stationary vector vs. a long-sample estimate.
  auto [p0, p1] = two_state_pi(0.1, 0.5);
  auto hrow = [](double a) { return -a * std::log(a) - (1 - a) * std::log(1 - a); };
  double formula = p0 * hrow(0.9) + p1 * hrow(0.5);
  auto src = MarkovSource::create({{0.9, 0.1}, {0.5, 0.5}});
  CHECK(std::abs(markov_entropy(src) - formula) < 1e-12);
  auto est = estimate_entropy(markov_sample(src, 200000, 8), 3);
  CHECK(std::abs(est - formula) < 0.02);
}

TEST_CASE("entropy estimator") {
  CHECK(estimate_entropy(make(std::vector<Symbol>(500, 2)), 2) == 0.0);
  CHECK(std::abs(estimate_entropy(coin(100000, 3), 2) - std::log(2.0)) < 0.05);
  CHECK(std::abs(estimate_entropy(periodic(1000, 2), 1)) < 1e-12);
  auto em = empirical_measure(periodic(100, 2), 2);
  CHECK_THROWS_AS(estimate_entropy(em, 2), Error);
}

TEST_CASE("t-slice filter") {
  std::vector<SymbolicSample> constant{make(std::vector<Symbol>(200, 0)), make(std::vector<Symbol>(300, 1))};
  auto r = t_slice_filter(constant, 0.1, 3);
  CHECK(r.kept == std::vector<std::size_t>{0, 1});
  CHECK(r.discarded.empty());

  std::vector<SymbolicSample> coins{coin(20000, 1), coin(20000, 2)};
  auto c = t_slice_filter(coins, 0.1, 3);
  CHECK(c.kept.empty());
  CHECK(c.discarded.size() == 2);

  std::vector<SymbolicSample> mixed{coin(20000, 5), periodic(300, 3), make(std::vector<Symbol>(100, 4)), coin(20000, 6)};
  auto m = t_slice_filter(mixed, 0.3, 2);
  REQUIRE(m.estimates.size() == 4);
  for (std::size_t i = 0; i < mixed.size(); ++i) {
    bool kept = std::find(m.kept.begin(), m.kept.end(), i) != m.kept.end();
    CHECK(kept == (m.estimates[i] < 0.3));
    CHECK(m.estimates[i] == estimate_entropy(mixed[i], 2));
  }
  CHECK(m.kept == std::vector<std::size_t>{1, 2});
}

TEST_CASE("sample and markov text round trip") {
  SymbolicSample s = make({3, 0, 7, 1});
  s.base_index = -5;
  auto text = to_text(s);
  CHECK(text == "sample -5 4 source\n3 0 7 1\n");
  CHECK(parse_sample(text) == s);
  CHECK_THROWS_AS(parse_sample("sample 0 3 source\n1 2\n"), Error);
  CHECK_THROWS_AS(parse_sample("sample 0 2 source\n1 -2\n"), Error);
  CHECK_THROWS_AS(parse_sample("sample 0 1 edge\n0\n"), Error);

  auto gm = Sft::build({"p", "q"}, {{"e0", "p", "p", ""}, {"e1", "p", "q", ""}, {"e2", "q", "p", ""}});
  SymbolicSample e;
  e.kind = AlphabetKind::edge;
  e.symbols = {0, 1, 2};
  auto etext = to_text(e, &gm);
  CHECK(etext == "sample 0 3 edge\ne0 e1 e2\n");
  CHECK(parse_sample(etext, &gm) == e);

  auto src = MarkovSource::create({{0.9, 0.1}, {0.5, 0.5}});
  auto back = parse_markov(to_text(src));
  CHECK(back.rows() == src.rows());
  CHECK_THROWS_AS(parse_markov("markov 2\n0.5 0.5\n0.5\n"), Error);
  CHECK_THROWS_AS(parse_markov("markov 1\n0.9\n"), Error);
}

TEST_CASE("bias-corrected entropy estimate") {
  SymbolicSample s;
  s.symbols = {0, 1, 1, 0};
  const auto em = empirical_measure(s, 2);
  CHECK(estimate_entropy_corrected(em, 0) == doctest::Approx(std::log(2.0) + 1.0 / 8.0).epsilon(1e-12));
  // Words 01, 11, 10 once each over 3 windows; H_1 as above.
  const double h2 = std::log(3.0) + 2.0 / 6.0;
  CHECK(estimate_entropy_corrected(em, 1) == doctest::Approx(h2 - std::log(2.0) - 1.0 / 8.0).epsilon(1e-12));

  // On short fair-coin samples the correction moves the order-4 estimate up
  // towards ln 2.
  const auto coin = MarkovSource::create({{0.5, 0.5}, {0.5, 0.5}});
  double plug = 0.0, corr = 0.0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto em4 = empirical_measure(markov_sample(coin, 400, seed), 5);
    plug += estimate_entropy(em4, 4) / 8;
    corr += estimate_entropy_corrected(em4, 4) / 8;
  }
  CHECK(std::abs(corr - std::log(2.0)) < std::abs(plug - std::log(2.0)));
}
