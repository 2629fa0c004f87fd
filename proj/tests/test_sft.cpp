// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "symdyn/errors.hpp"
#include "symdyn/prng.hpp"
#include "symdyn/sft.hpp"
#include "symdyn/sft_io.hpp"

using namespace symdyn;

namespace {

Sft full2() { return Sft::full_shift(2); }

Sft golden_mean() {
  return parse_sft("sft 2 3\nedge e0 p p\nedge e1 p q\nedge e2 q p\n");
}

Sft two_cycle() { return parse_sft("sft 2 2\nedge a p q\nedge b q p\n"); }

// Largest root of x^2 = x + 1 by bisection; independent of any matrix code.
double golden_root() {
  double lo = 1.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (mid * mid - mid - 1.0 > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Naive border check: compare every proper prefix with the same-length suffix.
bool naive_border_free(const Word& w) {
  for (std::size_t k = 1; k < w.size(); ++k) {
    if (std::equal(w.begin(), w.begin() + static_cast<long>(k), w.end() - static_cast<long>(k))) return false;
  }
  return true;
}

// Number of admissible words of length n in `sft` that avoid `w`, by DFS.
std::uint64_t count_avoiding(const Sft& sft, const Word& w, std::size_t n) {
  std::uint64_t count = 0;
  Word path;
  auto rec = [&](auto&& self) -> void {
    if (path.size() >= w.size() && std::equal(w.begin(), w.end(), path.end() - static_cast<long>(w.size()))) return;
    if (path.size() == n) {
      ++count;
      return;
    }
    for (Symbol e = 0; e < sft.num_edges(); ++e) {
      if (!path.empty() && sft.edge(path.back()).target != sft.edge(e).source) continue;
      path.push_back(e);
      self(self);
      path.pop_back();
    }
  };
  rec(rec);
  return count;
}

// Integer adjacency power oracle.
std::vector<std::uint64_t> matrix_power(const Sft& sft, std::size_t m) {
  const std::size_t n = sft.num_vertices();
  std::vector<std::uint64_t> a(n * n, 0), p(n * n, 0);
  for (const auto& e : sft.edges()) a[e.source * n + e.target] += 1;
  for (std::size_t i = 0; i < n; ++i) p[i * n + i] = 1;
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<std::uint64_t> q(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) q[i * n + j] += p[i * n + l] * a[l * n + j];
    p = q;
  }
  return p;
}

bool strictly_positive(const std::vector<std::uint64_t>& m) {
  return std::all_of(m.begin(), m.end(), [](auto v) { return v > 0; });
}

}  // namespace

TEST_CASE("text format parses and rejects malformed input") {
  Sft gm = golden_mean();
  CHECK(gm.num_vertices() == 2);
  CHECK(gm.num_edges() == 3);
  CHECK(parse_sft(to_text(gm)) == gm);
  CHECK_THROWS_AS(parse_sft("sft 1 2\nedge a v v\nedge a v v\n"), Error);
  CHECK_THROWS_AS(parse_sft("sft 1 1\nvertex v\nedge a v w\n"), Error);
  CHECK_THROWS_AS(parse_sft("sft 3 1\nedge a v v\n"), Error);
  CHECK_THROWS_AS(parse_sft("edge a v v\n"), Error);
  CHECK_THROWS_AS(parse_sft("sft 1 2\nedge a v v\n"), Error);
  try {
    parse_sft("sft x 1\n");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::input);
    CHECK(exit_code(e.kind()) == 2);
  }
}

TEST_CASE("construction trims to the essential part") {
  // q has no out-edge; after trimming only the loop at p remains.
  Sft s = parse_sft("sft 2 2\nedge a p p\nedge b p q\n");
  CHECK(s.num_vertices() == 1);
  CHECK(s.num_edges() == 1);
  Sft empty = parse_sft("sft 2 1\nedge a p q\n");
  CHECK(empty.empty());
  CHECK_THROWS_AS(entropy(empty), Error);
  CHECK_THROWS_AS(is_mixing(empty), Error);
}

TEST_CASE("is_admissible") {
  Sft f = full2();
  CHECK(is_admissible(f, parse_word(f, "0101")));
  Sft gm = golden_mean();
  CHECK_FALSE(is_admissible(gm, parse_word(gm, "e1 e1")));
  // Path trace p->q->p->p.
  CHECK(is_admissible(gm, parse_word(gm, "e1 e2 e0")));
  CHECK_THROWS_AS(parse_word(gm, "e9"), Error);
  CHECK_THROWS_AS(is_admissible(gm, Word{7}), Error);
}

TEST_CASE("is_mixing") {
  CHECK(is_mixing(full2()));
  CHECK_FALSE(is_mixing(two_cycle()));
  // Cycle lengths 1 (e0) and 2 (e1 e2): gcd 1.
  Sft gm = golden_mean();
  std::size_t g = 0;
  for (std::size_t len = 1; len <= 4; ++len) {
    auto p = matrix_power(gm, len);
    for (std::size_t v = 0; v < gm.num_vertices(); ++v)
      if (p[v * gm.num_vertices() + v] > 0) g = std::gcd(g, len);
  }
  CHECK(g == 1);
  CHECK(is_mixing(gm));
  // Two disjoint loops: not irreducible.
  CHECK_FALSE(is_mixing(parse_sft("sft 2 2\nedge a p p\nedge b q q\n")));
}

TEST_CASE("entropy") {
  CHECK(entropy(full2()) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(entropy(parse_sft("sft 1 1\nedge a v v\n")) == 0.0);
  CHECK(std::abs(entropy(golden_mean()) - std::log(golden_root())) < 1e-12);
  CHECK(std::abs(entropy(golden_mean()) - 0.48121182506) < 1e-10);
  for (unsigned k = 1; k <= 8; ++k) CHECK(std::abs(entropy(Sft::full_shift(k)) - std::log(double(k))) < 1e-12);
  // Periodic component: a 5-cycle has entropy 0.
  CHECK(std::abs(entropy(parse_sft("sft 5 5\nedge a 1 2\nedge b 2 3\nedge c 3 4\nedge d 4 5\nedge e 5 1\n"))) < 1e-12);
  CHECK(std::abs(entropy(two_cycle())) < 1e-12);
  // Reducible: max over components, GM component plus a 2-loop vertex.
  Sft red = parse_sft("sft 3 6\nedge e0 p p\nedge e1 p q\nedge e2 q p\nedge x q r\nedge y r r\nedge z r r\n");
  CHECK(std::abs(entropy(red) - std::log(2.0)) < 1e-12);
}

TEST_CASE("bisection route agrees with power iteration") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + rng.next() % 5;
    std::vector<EdgeSpec> edges;
    std::vector<std::string> names;
    for (std::size_t v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
    int id = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rng.next_double() < 0.45) edges.push_back({"e" + std::to_string(id++), names[i], names[j], ""});
    Sft s = Sft::build(names, edges);
    if (s.empty()) continue;
    auto a = s.adjacency();
    CHECK(spectral_radius(s) == doctest::Approx(spectral_radius_bisection(a, s.num_vertices())).epsilon(1e-10));
  }
}

TEST_CASE("is_marker") {
  Sft f = full2();
  CHECK(is_marker(f, parse_word(f, "01")));
  CHECK_FALSE(is_marker(f, parse_word(f, "00")));
  CHECK_FALSE(is_marker(f, parse_word(f, "010")));
  Sft gm = golden_mean();
  CHECK_THROWS_AS(is_marker(gm, parse_word(gm, "e1 e1")), Error);
}

TEST_CASE("border-free words never overlap in random samples") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t len = 2 + rng.next() % 5;
    Word w(len);
    for (auto& s : w) s = rng.next() % 2;
    CHECK(is_border_free(w) == naive_border_free(w));
    if (!is_border_free(w)) continue;
    Word sample(4000);
    for (auto& s : sample) s = rng.next() % 2;
    // Plant copies to make sure there are occurrences.
    for (std::size_t p = 0; p + len < sample.size(); p += 37) std::copy(w.begin(), w.end(), sample.begin() + static_cast<long>(p));
    long last = -1000;
    for (std::size_t i = 0; i + len <= sample.size(); ++i) {
      if (std::equal(w.begin(), w.end(), sample.begin() + static_cast<long>(i))) {
        CHECK(static_cast<long>(i) - last >= static_cast<long>(len));
        last = static_cast<long>(i);
      }
    }
  }
}

TEST_CASE("restrict_forbidden") {
  Sft f = full2();
  Sft only0 = restrict_forbidden(f, parse_word(f, "1"));
  CHECK(only0.num_edges() == 1);
  CHECK(entropy(only0) == 0.0);

  Sft no11 = restrict_forbidden(f, parse_word(f, "11"));
  // Words avoiding "11" are counted by Fibonacci numbers; growth oracle.
  double growth = std::log(double(count_avoiding(f, parse_word(f, "11"), 25)) / double(count_avoiding(f, parse_word(f, "11"), 24)));
  CHECK(std::abs(entropy(no11) - growth) < 1e-9);
  CHECK(std::abs(entropy(no11) - std::log(golden_root())) < 1e-12);
  for (const auto& e : no11.edges()) CHECK((e.label == "0" || e.label == "1"));

  Sft gm = golden_mean();
  Sft same = restrict_forbidden(gm, parse_word(gm, "e1 e1"));
  CHECK(std::abs(entropy(same) - entropy(gm)) < 1e-12);
}

TEST_CASE("restriction never increases entropy") {
  SplitMix64 rng(3);
  for (const Sft& y : {full2(), golden_mean(), Sft::full_shift(3)}) {
    const double h = entropy(y);
    for (int trial = 0; trial < 25; ++trial) {
      std::size_t len = 1 + rng.next() % 4;
      Word w{static_cast<Symbol>(rng.next() % y.num_edges())};
      while (w.size() < len) {
        auto outs = y.out_edges(y.edge(w.back()).target);
        w.push_back(outs[rng.next() % outs.size()]);
      }
      Sft r = restrict_forbidden(y, w);
      if (r.empty()) continue;
      CHECK(entropy(r) < h - 1e-9);  // every admissible word occurs in a mixing SFT
    }
  }
}

TEST_CASE("transition_length") {
  CHECK(transition_length(full2()) == 1);
  Sft gm = golden_mean();
  CHECK_FALSE(strictly_positive(matrix_power(gm, 1)));
  CHECK(strictly_positive(matrix_power(gm, 2)));
  CHECK(strictly_positive(matrix_power(gm, 3)));
  CHECK(transition_length(gm) == 2);
  CHECK_THROWS_AS(transition_length(two_cycle()), Error);
}

TEST_CASE("connecting_block") {
  Sft f = full2();
  CHECK(format_word(f, connecting_block(f, 0, 0, 2)) == "0 0");
  Sft gm = golden_mean();
  VertexId p = gm.vertex_index("p"), q = gm.vertex_index("q");
  CHECK(format_word(gm, connecting_block(gm, q, q, 2)) == "e2 e1");
  try {
    connecting_block(gm, q, q, 1);
    FAIL("expected no-connector");
  } catch (const Error& e) {
    CHECK(e.tag() == "no-connector");
  }
  // Brute force: least path p->p of length 4 over all 3^4 words.
  Word best;
  for (int code = 0; code < 81 && best.empty(); ++code) {
    Word cand{Symbol(code / 27), Symbol(code / 9 % 3), Symbol(code / 3 % 3), Symbol(code % 3)};
    if (is_admissible(gm, cand) && gm.edge(cand.front()).source == p && gm.edge(cand.back()).target == p) best = cand;
  }
  CHECK(connecting_block(gm, p, p, 4) == best);
}

TEST_CASE("transition length is minimal and sufficient") {
  for (const Sft& y : {full2(), golden_mean(), Sft::full_shift(3)}) {
    int m = transition_length(y);
    for (VertexId s = 0; s < y.num_vertices(); ++s)
      for (VertexId t = 0; t < y.num_vertices(); ++t)
        for (int len = m; len <= m + 10; ++len) CHECK_NOTHROW(connecting_block(y, s, t, static_cast<std::size_t>(len)));
    if (m > 1) {
      bool some_fail = false;
      for (VertexId s = 0; s < y.num_vertices(); ++s)
        for (VertexId t = 0; t < y.num_vertices(); ++t) {
          try {
            connecting_block(y, s, t, static_cast<std::size_t>(m - 1));
          } catch (const Error&) {
            some_fail = true;
          }
        }
      CHECK(some_fail);
    }
  }
}

TEST_CASE("count_paths") {
  Sft gm = golden_mean();
  VertexId p = gm.vertex_index("p");
  CHECK(count_paths(gm, p, p, 4) == 5);
  CHECK(count_paths(full2(), 0, 0, 10) == 1024);
  CHECK(count_paths(full2(), 0, 0, 80) == UINT64_MAX);
}

TEST_CASE("find_marker") {
  Sft f = full2();
  MarkerSearch m = find_marker(f, 0.4, 8);
  // Oracle: walk candidates in length-lex order with naive checks and the
  // word-count growth rate; the first one certified must be the answer.
  Word expected;
  for (std::size_t len = 1; len <= 8 && expected.empty(); ++len) {
    for (std::uint32_t code = 0; code < (1u << len) && expected.empty(); ++code) {
      Word w(len);
      for (std::size_t i = 0; i < len; ++i) w[i] = (code >> (len - 1 - i)) & 1;
      if (!naive_border_free(w)) continue;
      Sft r = restrict_forbidden(f, w);
      if (r.empty()) continue;
      double growth = std::log(double(count_avoiding(f, w, 23)) / double(count_avoiding(f, w, 22)));
      if (growth <= 0.4 + 1e-3) continue;
      // Primitivity oracle: some power of the restricted adjacency is positive.
      bool primitive = false;
      for (std::size_t k = 1; k <= (r.num_vertices() - 1) * (r.num_vertices() - 1) + 1 && !primitive; ++k)
        primitive = strictly_positive(matrix_power(r, k));
      if (!primitive) continue;
      expected = w;
    }
  }
  CHECK(m.w == expected);
  CHECK(format_word(f, m.w) == "0 0 1 1");
  CHECK(m.restricted_entropy > 0.4);

  CHECK_THROWS_AS(find_marker(f, 0.69, 2), Error);
  try {
    find_marker(f, 0.69, 2);
  } catch (const Error& e) {
    CHECK(e.tag() == "marker-not-found");
  }
  CHECK_THROWS_AS(find_marker(two_cycle(), 0.1, 4), Error);
}
