// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "symdyn/finitary_code.hpp"

#include <algorithm>
#include <string>

#include "symdyn/errors.hpp"

namespace symdyn {
namespace {

constexpr std::uint64_t kCodeVersion = 1;

}  // namespace

std::uint64_t FinitaryCode::dictionary_hash() const {
  ByteWriter w;
  w.varint(L_);
  w.varint(entries_.size());
  for (const auto& [in, cw] : entries_) {
    w.symbols(in);
    w.symbols(cw);
  }
  return fnv1a64(w.bytes());
}

const Word* FinitaryCode::codeword(std::span<const Symbol> input) const {
  auto it = by_input_.find(Word(input.begin(), input.end()));
  return it == by_input_.end() ? nullptr : &entries_[it->second].second;
}

const Word* FinitaryCode::input(std::span<const Symbol> codeword) const {
  auto it = by_codeword_.find(Word(codeword.begin(), codeword.end()));
  return it == by_codeword_.end() ? nullptr : &entries_[it->second].first;
}

FinitaryCode FinitaryCode::assemble(std::size_t L, VertexId anchor, std::uint64_t target_hash, std::vector<std::pair<Word, Word>> entries,
                                    std::uint64_t scheme_digest) {
  FinitaryCode c;
  c.L_ = L;
  c.anchor_ = anchor;
  c.target_hash_ = target_hash;
  c.scheme_digest_ = scheme_digest;
  c.entries_ = std::move(entries);
  for (std::size_t i = 0; i < c.entries_.size(); ++i) {
    const auto& [in, cw] = c.entries_[i];
    if (in.size() != L || cw.size() != L) fail(ErrorKind::corruption, "bad-entry", "dictionary entry " + std::to_string(i) + " does not have length " + std::to_string(L));
    if (!c.by_input_.emplace(in, i).second) fail(ErrorKind::corruption, "duplicate-input", "dictionary input repeated at entry " + std::to_string(i));
    if (!c.by_codeword_.emplace(cw, i).second) fail(ErrorKind::corruption, "not-injective", "codeword repeated at entry " + std::to_string(i));
  }
  return c;
}

std::vector<std::pair<Word, std::uint64_t>> observed_blocks(std::span<const Symbol> x, std::size_t L) {
  if (L == 0 || x.size() % L != 0) fail(ErrorKind::precondition, "dictionary-miss", "input length is not a multiple of the block length");
  std::map<Word, std::uint64_t> counts;
  for (std::size_t i = 0; i < x.size(); i += L) ++counts[Word(x.begin() + static_cast<long>(i), x.begin() + static_cast<long>(i + L))];
  return {counts.begin(), counts.end()};
}

std::vector<Word> first_loops(const Sft& sft, VertexId v, std::size_t L, std::size_t count) {
  std::vector<Word> out;
  if (count == 0 || L == 0) return out;
  ExactReach reach(sft, v, L);
  Word path;
  path.reserve(L);
  auto rec = [&](auto&& self, VertexId at) -> void {
    if (path.size() == L) {
      out.push_back(path);
      return;
    }
    for (Symbol e : sft.out_edges(at)) {
      if (!reach.reaches(sft.edge(e).target, L - path.size() - 1)) continue;
      path.push_back(e);
      self(self, sft.edge(e).target);
      path.pop_back();
      if (out.size() == count) return;
    }
  };
  rec(rec, v);
  return out;
}

FinitaryCode build_code(const Sft& target, std::span<const std::pair<Word, std::uint64_t>> observed, std::size_t L) {
  if (target.empty() || !is_mixing(target)) fail(ErrorKind::precondition, "not-mixing", "code target must be mixing");
  const auto M = static_cast<std::size_t>(transition_length(target));
  if (L < 2 * M) fail(ErrorKind::precondition, "block-too-short", "block length " + std::to_string(L) + " is below 2 * transition length " + std::to_string(2 * M));
  const VertexId v0 = 0;
  const std::uint64_t capacity = count_paths(target, v0, v0, L);
  if (observed.size() > capacity) {
    fail(ErrorKind::precondition, "entropy-overflow",
         std::to_string(observed.size()) + " distinct blocks but only " + std::to_string(capacity) + " loops of length " + std::to_string(L));
  }
  std::vector<std::size_t> order(observed.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return observed[a].second > observed[b].second; });
  auto loops = first_loops(target, v0, L, observed.size());
  std::vector<std::pair<Word, Word>> entries;
  entries.reserve(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (observed[order[r]].first.size() != L) fail(ErrorKind::input, "bad-block", "observed block has the wrong length");
    entries.emplace_back(observed[order[r]].first, std::move(loops[r]));
  }
  return FinitaryCode::assemble(L, v0, target.hash(), std::move(entries), 0);
}

std::vector<Symbol> encode_blocks(const FinitaryCode& code, std::span<const Symbol> x_prime) {
  const std::size_t L = code.block_length();
  if (x_prime.size() % L != 0) fail(ErrorKind::precondition, "dictionary-miss", "input length is not a multiple of the block length");
  std::vector<Symbol> out;
  out.reserve(x_prime.size());
  for (std::size_t i = 0; i < x_prime.size(); i += L) {
    const Word* cw = code.codeword(x_prime.subspan(i, L));
    if (!cw) fail(ErrorKind::precondition, "dictionary-miss", "no codeword for the block at offset " + std::to_string(i));
    out.insert(out.end(), cw->begin(), cw->end());
  }
  return out;
}

std::vector<Symbol> decode_blocks(const FinitaryCode& code, std::span<const Symbol> y_prime) {
  const std::size_t L = code.block_length();
  if (y_prime.size() % L != 0) fail(ErrorKind::corruption, "unknown-codeword", "length " + std::to_string(y_prime.size()) + " is not a multiple of " + std::to_string(L));
  std::vector<Symbol> out;
  out.reserve(y_prime.size());
  for (std::size_t i = 0; i < y_prime.size(); i += L) {
    const Word* in = code.input(y_prime.subspan(i, L));
    if (!in) fail(ErrorKind::corruption, "unknown-codeword", "no dictionary entry for the segment at offset " + std::to_string(i));
    out.insert(out.end(), in->begin(), in->end());
  }
  return out;
}

void write_code(ByteWriter& out, const FinitaryCode& code) {
  out.raw("PSIC");
  out.varint(kCodeVersion);
  out.varint(code.block_length());
  out.varint(code.anchor());
  out.u64le(code.target_hash());
  out.varint(code.size());
  for (const auto& [in, cw] : code.entries()) {
    out.symbols(in);
    out.symbols(cw);
  }
  out.u64le(code.scheme_digest());
}

FinitaryCode read_code(ByteReader& in) {
  in.expect("PSIC");
  if (in.varint() != kCodeVersion) fail(ErrorKind::corruption, "bad-version", "unsupported code version");
  const auto L = in.varint();
  const auto anchor = in.varint();
  const auto target = in.u64le();
  const auto n = in.varint();
  if (L == 0 || L > (1u << 20) || anchor > 0xffffffffULL) fail(ErrorKind::corruption, "bad-header", "implausible code header");
  std::vector<std::pair<Word, Word>> entries;
  for (std::uint64_t i = 0; i < n; ++i) {
    Word a = in.symbols(L);
    Word b = in.symbols(L);
    entries.emplace_back(std::move(a), std::move(b));
  }
  const auto digest = in.u64le();
  return FinitaryCode::assemble(L, static_cast<VertexId>(anchor), target, std::move(entries), digest);
}

std::vector<std::uint8_t> serialize_code(const FinitaryCode& code) {
  ByteWriter w;
  write_code(w, code);
  return w.take();
}

FinitaryCode deserialize_code(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  auto c = read_code(r);
  if (!r.at_end()) fail(ErrorKind::corruption, "trailing-bytes", "unexpected bytes after the code at offset " + std::to_string(r.position()));
  return c;
}

}  // namespace symdyn
