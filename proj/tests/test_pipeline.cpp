// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "symdyn/errors.hpp"
#include "symdyn/pipeline.hpp"
#include "symdyn/prng.hpp"

using namespace symdyn;

namespace {

const MarkovSource& skewed() {
  static const MarkovSource src = MarkovSource::create({{0.95, 0.05}, {0.5, 0.5}});
  return src;
}

PipelineConfig small_cfg() {
  PipelineConfig cfg;
  cfg.min_markers = 16;
  return cfg;
}

struct Fixture {
  SymbolicSample x;
  EmbeddingResult enc;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture out;
    out.x = markov_sample(skewed(), 200000, 1);
    out.enc = encode(out.x, Sft::full_shift(2), 0.35, small_cfg());
    return out;
  }();
  return f;
}

std::vector<std::int64_t> naive_occurrences(const std::vector<Symbol>& y, const Word& w) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i + w.size() <= y.size(); ++i)
    if (std::equal(w.begin(), w.end(), y.begin() + static_cast<long>(i))) out.push_back(static_cast<std::int64_t>(i));
  return out;
}

template <class F>
Error catch_error(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error");
  return Error(ErrorKind::internal, "none", "");
}

}  // namespace

TEST_CASE("round trip is exact on the interior") {
  const auto& f = fixture();
  const Sft Y = Sft::full_shift(2);
  const auto d = decode(f.enc.y, Y, 0.35, f.enc.psi, small_cfg());
  CHECK(d.interior_lo == f.enc.interior_lo);
  CHECK(d.interior_hi == f.enc.interior_hi);
  CHECK(d.interior_hi - d.interior_lo > 190000);
  CHECK(interior_mismatches(f.x.symbols, d) == 0);
  CHECK(d.I1 == f.enc.psi.I1);
  CHECK(d.sigma.sigma == f.enc.plan.sigma());
}

TEST_CASE("encoded sequence is admissible and markers sit exactly on I1") {
  const auto& f = fixture();
  const auto& y = f.enc.y.symbols;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) REQUIRE(y[i] < 2);
  CHECK(naive_occurrences(y, f.enc.plan.params.w) == f.enc.idx.I1);
  CHECK(f.enc.idx.I1.size() >= 16);
}

TEST_CASE("protected windows have the documented layout") {
  const auto& f = fixture();
  const auto& p = f.enc.plan.params;
  const auto& y = f.enc.y.symbols;
  const auto lw = static_cast<std::int64_t>(p.w.size()), M = static_cast<std::int64_t>(p.M);
  for (std::int64_t i : f.enc.idx.I1) {
    const Word slot(y.begin() + i + lw + M, y.begin() + i + lw + 2 * M);
    CHECK((slot == p.u_labels || slot == p.v_labels));
    for (std::int64_t j = i - M; j <= i + lw + 3 * M; ++j) CHECK_FALSE(f.enc.idx.in_I2(j));
    CHECK(f.enc.idx.in_I2(i - M - 1));
    CHECK(f.enc.idx.in_I2(i + lw + 3 * M + 1));
  }
}

TEST_CASE("itinerary cells fill all but a bounded fraction of the range") {
  const auto& f = fixture();
  const auto& idx = f.enc.idx;
  const double range = static_cast<double>(idx.range_hi - idx.range_lo + 1);
  const double bound = 1.0 - static_cast<double>(idx.protected_width()) / static_cast<double>(f.enc.plan.params.N);
  CHECK(static_cast<double>(idx.I2.size()) / range >= bound);
  CHECK(idx.I2.size() + idx.I1.size() * idx.protected_width() == static_cast<std::size_t>(range));
}

TEST_CASE("artifact bytes round trip and detect damage") {
  const auto& f = fixture();
  const auto back = deserialize_psi(f.enc.psi_bytes);
  CHECK(back == f.enc.psi);
  CHECK(serialize_psi(back) == f.enc.psi_bytes);

  auto bytes = f.enc.psi_bytes;
  bytes[bytes.size() / 2] ^= 0x10;
  const auto e = catch_error([&] { deserialize_psi(bytes); });
  CHECK(e.kind() == ErrorKind::corruption);
  CHECK(e.tag() == "bad-checksum");

  bytes = f.enc.psi_bytes;
  bytes.resize(bytes.size() - 3);
  CHECK(catch_error([&] { deserialize_psi(bytes); }).kind() == ErrorKind::corruption);
}

TEST_CASE("encoding is deterministic") {
  const auto& f = fixture();
  const auto again = encode(f.x, Sft::full_shift(2), 0.35, small_cfg());
  CHECK(again.y == f.enc.y);
  CHECK(again.psi_bytes == f.enc.psi_bytes);
}

TEST_CASE("foreign artifacts are rejected") {
  const auto& f = fixture();
  const Sft Y = Sft::full_shift(2);
  const auto x2 = markov_sample(skewed(), 200000, 2);
  const auto other = encode(x2, Y, 0.35, small_cfg());

  auto e = catch_error([&] { decode(f.enc.y, Y, 0.35, other.psi, small_cfg()); });
  CHECK(e.kind() == ErrorKind::corruption);
  CHECK(e.tag() == "psi-mismatch");

  e = catch_error([&] { decode(f.enc.y, Y, 0.3, f.enc.psi, small_cfg()); });
  CHECK(e.tag() == "psi-mismatch");

  const Sft gm = Sft::build({"a", "b"}, {{"0", "a", "a", ""}, {"1", "a", "b", ""}, {"2", "b", "a", ""}});
  e = catch_error([&] { decode(f.enc.y, gm, 0.35, f.enc.psi, small_cfg()); });
  CHECK(e.tag() == "psi-mismatch");

  SymbolicSample shorter = f.enc.y;
  shorter.symbols.pop_back();
  e = catch_error([&] { decode(shorter, Y, 0.35, f.enc.psi, small_cfg()); });
  CHECK(e.tag() == "psi-mismatch");
}

TEST_CASE("single-symbol faults are rejected or stay local") {
  const auto& f = fixture();
  const Sft Y = Sft::full_shift(2);
  const auto& idx = f.enc.idx;
  const std::int64_t L = static_cast<std::int64_t>(f.enc.plan.code.block_length());
  const std::int64_t W = static_cast<std::int64_t>(f.enc.plan.params.W);
  SplitMix64 rng(7);
  int rejected = 0, local = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const auto j = idx.I2[rng.next() % idx.I2.size()];
    SymbolicSample y = f.enc.y;
    y.symbols[static_cast<std::size_t>(j)] ^= 1;
    try {
      const auto d = decode(y, Y, 0.35, f.enc.psi, small_cfg());
      for (std::int64_t i = d.interior_lo; i < d.interior_hi; ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (!d.covered[k] || d.x_hat[k] != f.x.symbols[k]) {
          INFO("flip at " << j << " damaged " << i);
          CHECK(std::abs(i - j) <= 2 * (L + W) + static_cast<std::int64_t>(idx.protected_width()));
        }
      }
      ++local;
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::corruption);
      ++rejected;
    }
  }
  CHECK(rejected + local == 12);
}

TEST_CASE("an unknown codeword reports its offset") {
  const auto& f = fixture();
  const Sft Y = Sft::full_shift(2);
  // Complementing a whole codeword keeps y admissible in the full shift but
  // rarely lands on another codeword.
  const std::size_t L = f.enc.plan.code.block_length();
  const auto& idx = f.enc.idx;
  for (std::size_t k = 5 * L; k + L < idx.I2.size(); k += L) {
    SymbolicSample y = f.enc.y;
    for (std::size_t d = 0; d < L; ++d) y.symbols[static_cast<std::size_t>(idx.I2[k + d])] ^= 1;
    try {
      decode(y, Y, 0.35, f.enc.psi, small_cfg());
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::corruption);
      if (e.tag() == "unknown-codeword") {
        CHECK(e.message().find(std::to_string(idx.I2[k])) != std::string::npos);
        return;
      }
    }
  }
  FAIL("no complemented codeword was reported as unknown");
}

TEST_CASE("shifting the input by whole codewords shifts the output") {
  const auto& f = fixture();
  const Sft Y = Sft::full_shift(2);
  const auto& idx = f.enc.idx;
  const std::size_t L = f.enc.plan.code.block_length();
  const auto s = static_cast<std::size_t>(idx.I2[L]);
  REQUIRE(s < static_cast<std::size_t>(idx.I1.front()) - f.enc.plan.params.M);

  SymbolicSample x2;
  x2.symbols.assign(f.x.symbols.begin() + static_cast<long>(s), f.x.symbols.end());
  const auto shifted = apply_plan(x2, Y, f.enc.plan, small_cfg());
  REQUIRE(shifted.y.size() == f.enc.y.size() - s);
  CHECK(std::equal(shifted.y.symbols.begin(), shifted.y.symbols.end(), f.enc.y.symbols.begin() + static_cast<long>(s)));
  CHECK(shifted.idx.I1.size() == idx.I1.size());
}

TEST_CASE("a fixed plan refuses blocks it has not seen") {
  const auto& f = fixture();
  // A run of ten ones is far too rare to have been seen in this sample.
  const auto& I1 = f.enc.idx.I1;
  const auto mid = static_cast<std::size_t>((I1[0] + I1[1]) / 2);
  SymbolicSample x2 = f.x;
  for (std::size_t d = 0; d < 10; ++d) x2.symbols[mid + d] = 1;
  REQUIRE(occurrences(x2, f.enc.plan.a) == occurrences(f.x, f.enc.plan.a));
  const auto e = catch_error([&] { apply_plan(x2, Sft::full_shift(2), f.enc.plan, small_cfg()); });
  CHECK(e.tag() == "dictionary-miss");
}

TEST_CASE("preconditions") {
  const Sft Y = Sft::full_shift(2);
  SUBCASE("source entropy above t") {
    const auto coin = markov_sample(MarkovSource::create({{0.5, 0.5}, {0.5, 0.5}}), 20000, 1);
    const auto e = catch_error([&] { encode(coin, Y, 0.35); });
    CHECK(e.kind() == ErrorKind::precondition);
    CHECK(e.tag() == "entropy-gap");
  }
  SUBCASE("window too short for the anchor") {
    const auto x = markov_sample(skewed(), 600, 1);
    const auto e = catch_error([&] { encode(x, Y, 0.35); });
    CHECK(e.kind() == ErrorKind::precondition);
    CHECK(e.tag() == "no-marker-anchor");
  }
  SUBCASE("empty sample") {
    CHECK(catch_error([&] { encode(SymbolicSample{}, Y, 0.35); }).kind() == ErrorKind::input);
  }
}

TEST_CASE("two sources are told apart") {
  const auto other = MarkovSource::create({{0.97, 0.03}, {0.6, 0.4}});
  const std::uint64_t seeds[] = {1, 2};
  const auto rep = separation_experiment(skewed(), other, Sft::full_shift(2), 0.35, 200000, seeds, small_cfg());
  REQUIRE(rep.trials.size() == 2);
  for (const auto& t : rep.trials) {
    CHECK(t.identification_differs);
    CHECK(t.own_decodes);
    CHECK(t.cross_rejected);
  }
  CHECK(rep.ok());
}
