// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "symdyn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symdyn/bytes.hpp"
#include "symdyn/errors.hpp"

namespace symdyn {
namespace {

constexpr std::uint64_t kPsiVersion = 1;

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.with_stage(name);
  }
}

std::string join_ids(const Sft& sft, std::span<const Symbol> path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += '.';
    s += sft.edge(path[i]).id;
  }
  return s;
}

// For each restricted edge and state, the edge out of that state carrying a
// given base label. The restriction is right-resolving, so it is unique.
class LabelIndex {
 public:
  explicit LabelIndex(const MarkerParams& p) : n_base_(0) {
    for (Symbol e : p.to_base) n_base_ = std::max<std::size_t>(n_base_, e + 1);
    table_.assign(p.restricted.num_vertices() * n_base_, kNone);
    for (Symbol e = 0; e < p.restricted.num_edges(); ++e) table_[p.restricted.edge(e).source * n_base_ + p.to_base[e]] = e;
  }
  std::optional<Symbol> step(VertexId state, Symbol label) const {
    if (label >= n_base_) return std::nullopt;
    Symbol e = table_[state * n_base_ + label];
    if (e == kNone) return std::nullopt;
    return e;
  }

 private:
  static constexpr Symbol kNone = ~Symbol{0};
  std::size_t n_base_;
  std::vector<Symbol> table_;
};

// Occurrences of a whose protected window, contexts and neighbouring I2
// cells all fit in a window of length n.
std::vector<std::int64_t> usable_markers(const SymbolicSample& x, const Word& a, const MarkerParams& p, std::size_t max_ext) {
  const auto n = static_cast<std::int64_t>(x.size());
  const auto M = static_cast<std::int64_t>(p.M), lw = static_cast<std::int64_t>(p.w.size()), W = static_cast<std::int64_t>(p.W);
  std::vector<std::int64_t> out;
  for (std::int64_t i : occurrences(x, a)) {
    if (i - M < 1) continue;
    if (i + lw + 3 * M + 1 > n - W) continue;
    if (i + static_cast<std::int64_t>(a.size() + max_ext) > n) continue;
    out.push_back(i);
  }
  return out;
}

std::size_t max_ext_len(const PipelineConfig& cfg) {
  std::size_t m = 0;
  for (auto e : cfg.ext_lens) m = std::max(m, e);
  return m;
}

Word padded(std::span<const Symbol> x_prime, std::size_t L) {
  Word out(x_prime.begin(), x_prime.end());
  out.resize((x_prime.size() + L - 1) / L * L, 0);
  return out;
}

void write_word_list(ByteWriter& w, const std::vector<Word>& words) {
  w.varint(words.size());
  for (const auto& x : words) w.symbols(x);
}

std::vector<Word> read_word_list(ByteReader& r) {
  const auto n = r.varint();
  std::vector<Word> out;
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(r.symbols());
  return out;
}

[[noreturn]] void psi_mismatch(const std::string& what) { fail(ErrorKind::corruption, "psi-mismatch", what); }

}  // namespace

MarkerParams derive_marker_params(const Sft& Y, double t, const PipelineConfig& cfg) {
  MarkerParams p;
  p.t = t;
  auto found = stage("find_marker", [&] { return find_marker(Y, t, cfg.marker_max_len); });
  p.w = std::move(found.w);
  p.restricted = std::move(found.restricted);
  p.h_prime = found.restricted_entropy;
  const Sft& Yp = p.restricted;
  p.M = static_cast<std::size_t>(stage("transition_length", [&] { return transition_length(Yp); }));
  p.v0 = 0;
  auto loops = first_loops(Yp, p.v0, p.M, 2);
  if (loops.size() < 2) fail(ErrorKind::precondition, "no-uv", "fewer than two loops of length M at the anchor vertex");
  p.u = loops[0];
  p.v = loops[1];
  p.to_base = label_map(Yp, Y);
  for (Symbol e : p.u) p.u_labels.push_back(p.to_base[e]);
  for (Symbol e : p.v) p.v_labels.push_back(p.to_base[e]);

  p.base_vertex.assign(Yp.num_vertices(), 0);
  for (Symbol e = 0; e < Yp.num_edges(); ++e) p.base_vertex[Yp.edge(e).target] = Y.edge(p.to_base[e]).target;

  const VertexId w_in = Y.edge(p.w.front()).source, w_out = Y.edge(p.w.back()).target;
  std::optional<VertexId> entry, exit;
  for (VertexId s = 0; s < Yp.num_vertices(); ++s) {
    if (!entry && p.base_vertex[s] == w_in) entry = s;
    if (!exit && p.base_vertex[s] == w_out) exit = s;
  }
  if (p.w.size() >= 2) {
    if (auto suffix = Yp.find_vertex(join_ids(Y, std::span<const Symbol>(p.w).subspan(1)))) exit = *suffix;
  }
  if (!entry || !exit) fail(ErrorKind::internal, "no-junction", "restricted system has no state at the marker endpoints");
  p.entry_state = *entry;
  p.exit_state = *exit;
  p.N = stage("compute_N", [&] { return compute_N(p.h_prime, t, p.w.size(), p.M); });
  p.W = p.w.size() + 4 * p.M + 2;
  return p;
}

MarkerScheme EncodePlan::scheme() const {
  MarkerScheme s;
  s.w = params.w;
  s.u = params.u;
  s.v = params.v;
  s.u_labels = params.u_labels;
  s.v_labels = params.v_labels;
  s.M = params.M;
  s.a = a;
  s.N = params.N;
  s.h_prime = params.h_prime;
  s.t = params.t;
  s.U = U;
  s.n_max = n_max;
  return s;
}

std::uint64_t scheme_digest(const FinitaryCode& code) {
  ByteWriter w;
  w.varint(kPsiVersion);
  w.varint(code.block_length());
  w.u64le(code.dictionary_hash());
  return fnv1a64(w.bytes());
}

void choose_channel(EncodePlan& plan, const SymbolicSample& x, std::span<const std::int64_t> I1, const PipelineConfig& cfg, int n_cap) {
  // Largest n_max first, then the shortest extension that works.
  plan.n_max = 0;
  std::optional<Error> last;
  for (int n_max = std::min(n_cap, 7); n_max >= 1 && plan.n_max == 0; --n_max) {
    for (std::size_t ext : cfg.ext_lens) {
      try {
        plan.U = choose_U_family(extension_counts(x, I1, plan.a.size(), ext), n_max);
        plan.n_max = n_max;
        plan.ext_len = ext;
        break;
      } catch (const Error& e) {
        if (e.tag() != "granularity") throw e.with_stage("choose_U_family");
        last = e;
      }
    }
  }
  if (plan.n_max == 0) throw (last ? *last : Error(ErrorKind::precondition, "granularity", "no extension lengths configured")).with_stage("choose_U_family");
}

EncodePlan plan_encoding(const SymbolicSample& x, const Sft& Y, double t, const PipelineConfig& cfg) {
  if (x.symbols.empty()) fail(ErrorKind::input, "empty-sample", "input sample is empty");
  const double hx = stage("estimate_entropy", [&] { return estimate_entropy(x, cfg.k); });
  if (!(hx < t)) {
    fail(ErrorKind::precondition, "entropy-gap", "estimated source entropy " + std::to_string(hx) + " is not below t = " + std::to_string(t));
  }
  EncodePlan plan;
  plan.params = derive_marker_params(Y, t, cfg);
  const MarkerParams& p = plan.params;
  plan.a = stage("choose_block_a", [&] { return choose_block_a(x, p.N, cfg.anchor_max_len, cfg.min_markers); });

  const auto I1 = usable_markers(x, plan.a, p, max_ext_len(cfg));
  if (I1.empty()) fail(ErrorKind::precondition, "no-marker-anchor", "no occurrence of the anchor block fits inside the window");
  const auto n = static_cast<std::int64_t>(x.size());
  auto idx = stage("index_sets", [&] { return index_sets(I1, 0, n - static_cast<std::int64_t>(p.W), p.w.size(), p.M); });
  auto it = stage("itinerary", [&] { return itinerary(x, idx, p.W); });
  plan.table = std::move(it.table);

  // Block length: the least L >= 2M whose loop count covers the blocks.
  const std::size_t L_min = std::max<std::size_t>(2 * p.M, 1);
  std::size_t L = cfg.block_length;
  std::vector<std::pair<Word, std::uint64_t>> obs;
  if (L) {
    obs = observed_blocks(padded(it.x_prime.symbols, L), L);
  } else {
    for (std::size_t cand = L_min; cand <= cfg.max_block_length; ++cand) {
      auto o = observed_blocks(padded(it.x_prime.symbols, cand), cand);
      if (o.size() <= count_paths(p.restricted, p.v0, p.v0, cand)) {
        L = cand;
        obs = std::move(o);
        break;
      }
    }
    if (!L) throw Error(ErrorKind::precondition, "entropy-overflow", "no block length up to " + std::to_string(cfg.max_block_length) + " has enough loops", "build_code");
  }
  plan.code = stage("build_code", [&] { return build_code(p.restricted, obs, L); });
  plan.code.set_scheme_digest(scheme_digest(plan.code));

  choose_channel(plan, x, I1, cfg, cfg.n_max);
  return plan;
}

EmbeddingResult apply_plan(const SymbolicSample& x, const Sft& Y, const EncodePlan& plan, const PipelineConfig& cfg) {
  const MarkerParams& p = plan.params;
  const Sft& Yp = p.restricted;
  const auto n = static_cast<std::int64_t>(x.size());
  const auto M = p.M, lw = p.w.size(), W = p.W;
  const std::size_t L = plan.code.block_length();

  EmbeddingResult res;
  res.plan = plan;
  res.entropy_estimate = estimate_entropy(x, cfg.k);
  const auto I1 = usable_markers(x, plan.a, p, max_ext_len(cfg));
  if (I1.empty()) fail(ErrorKind::precondition, "no-marker-anchor", "no occurrence of the anchor block fits inside the window");
  res.idx = stage("index_sets", [&] { return index_sets(I1, 0, n - static_cast<std::int64_t>(W), lw, M); });
  const IndexSets& idx = res.idx;

  // Itinerary against the fixed table.
  Word x_prime(idx.I2.size());
  for (std::size_t k = 0; k < idx.I2.size(); ++k) {
    auto b = x.symbols.begin() + idx.I2[k];
    auto pos = std::lower_bound(plan.table.begin(), plan.table.end(), W, [&](const Word& t, std::size_t) {
      return std::lexicographical_compare(t.begin(), t.end(), b, b + static_cast<long>(W));
    });
    if (pos == plan.table.end() || !std::equal(pos->begin(), pos->end(), b)) {
      fail(ErrorKind::precondition, "dictionary-miss", "window block at " + std::to_string(idx.I2[k]) + " is not in the plan's table");
    }
    x_prime[k] = static_cast<Symbol>(pos - plan.table.begin());
  }
  const Word xp = padded(x_prime, L);
  const auto y_prime = stage("encode_blocks", [&] { return encode_blocks(plan.code, xp); });
  res.distinct_blocks = plan.code.size();
  res.capacity = count_paths(Yp, p.v0, p.v0, L);

  std::vector<Symbol> y(x.size(), 0);
  std::vector<std::uint8_t> written(x.size(), 0);
  auto put = [&](std::size_t pos, Symbol e) {
    if (written[pos]) fail(ErrorKind::internal, "slot-collision", "cell " + std::to_string(pos) + " written twice");
    y[pos] = e;
    written[pos] = 1;
  };
  auto put_path = [&](std::size_t pos, const Word& path) {
    for (std::size_t d = 0; d < path.size(); ++d) put(pos + d, p.to_base[path[d]]);
  };
  for (std::size_t k = 0; k < idx.I2.size(); ++k) put(static_cast<std::size_t>(idx.I2[k]), p.to_base[y_prime[k]]);

  std::vector<int> membership;
  for (std::int64_t i : I1) {
    const auto ui = static_cast<std::size_t>(i);
    const auto left = idx.rank(i - static_cast<std::int64_t>(M) - 1);
    const auto right = idx.rank(i + static_cast<std::int64_t>(lw + 3 * M) + 1);
    if (!left || !right) fail(ErrorKind::internal, "layout", "marker at " + std::to_string(i) + " has no neighbouring itinerary cells");
    put_path(ui - M, connecting_block(Yp, Yp.edge(y_prime[*left]).target, p.entry_state, M));
    for (std::size_t d = 0; d < lw; ++d) put(ui + d, p.w[d]);
    put_path(ui + lw, connecting_block(Yp, p.exit_state, p.v0, M));
    put_path(ui + lw + 2 * M, connecting_block(Yp, p.v0, Yp.edge(y_prime[*right]).source, M + 1));
    membership.push_back(plan.U.member(std::span<const Symbol>(x.symbols).subspan(ui + plan.a.size(), plan.ext_len)));
  }
  stage("encode_sigma", [&] {
    encode_sigma(y, written, I1, membership, plan.sigma(), plan.scheme());
    return 0;
  });

  // Tail after the last itinerary cell: least out-edge at every step.
  VertexId state = Yp.edge(y_prime[idx.I2.size() - 1]).target;
  for (std::size_t pos = static_cast<std::size_t>(idx.I2.back()) + 1; pos < x.size(); ++pos) {
    Symbol e = Yp.out_edges(state).front();
    put(pos, p.to_base[e]);
    state = Yp.edge(e).target;
  }
  for (std::size_t pos = 0; pos < x.size(); ++pos)
    if (!written[pos]) fail(ErrorKind::internal, "layout", "cell " + std::to_string(pos) + " left unwritten");

  res.y.kind = AlphabetKind::edge;
  res.y.base_index = x.base_index;
  res.y.symbols = std::move(y);
  if (!is_admissible(Y, res.y.symbols)) fail(ErrorKind::internal, "inadmissible", "encoded sequence is not a path in Y");
  if (occurrences(res.y, p.w) != I1) fail(ErrorKind::internal, "marker-impure", "marker occurrences differ from the planned set");
  try {
    if (recover_sigma(res.y.symbols, I1, plan.scheme()).sigma != plan.sigma()) {
      fail(ErrorKind::precondition, "sigma-unreadable", "slot densities do not read back as the planned sigma");
    }
  } catch (const Error& e) {
    if (e.tag() != "ambiguous-density") throw;
    throw Error(ErrorKind::precondition, "sigma-unreadable", e.message(), "encode_sigma");
  }

  PsiArtifact& psi = res.psi;
  psi.base_hash = Y.hash();
  psi.t = p.t;
  psi.h_prime = p.h_prime;
  psi.w = p.w;
  psi.u = p.u;
  psi.v = p.v;
  psi.M = M;
  psi.a = plan.a;
  psi.N = p.N;
  psi.n_max = plan.n_max;
  psi.ext_len = plan.ext_len;
  psi.U = plan.U;
  psi.W = W;
  psi.n = x.size();
  psi.I1 = I1;
  psi.i2_count = idx.I2.size();
  psi.table = plan.table;
  psi.pad_tail.assign(y_prime.begin() + static_cast<long>(idx.I2.size()), y_prime.end());
  psi.code = plan.code;
  res.psi_bytes = serialize_psi(psi);

  res.interior_lo = p.N + static_cast<std::int64_t>(W);
  res.interior_hi = std::max(res.interior_lo, n - p.N - static_cast<std::int64_t>(W));
  return res;
}

EmbeddingResult encode(const SymbolicSample& x, const Sft& Y, double t, const PipelineConfig& cfg) {
  EncodePlan plan = plan_encoding(x, Y, t, cfg);
  for (;;) {
    try {
      return apply_plan(x, Y, plan, cfg);
    } catch (const Error& e) {
      if (e.tag() != "sigma-unreadable" || plan.n_max <= 1) throw;
    }
    // Fewer sigma bits leave wider gaps between density codewords.
    const auto I1 = usable_markers(x, plan.a, plan.params, max_ext_len(cfg));
    choose_channel(plan, x, I1, cfg, plan.n_max - 1);
  }
}

std::vector<std::uint8_t> serialize_psi(const PsiArtifact& psi) {
  ByteWriter w;
  w.raw("PSIA");
  w.varint(kPsiVersion);
  w.u64le(psi.base_hash);
  w.f64(psi.t);
  w.f64(psi.h_prime);
  w.symbols(psi.w);
  w.symbols(psi.u);
  w.symbols(psi.v);
  w.varint(psi.M);
  w.symbols(psi.a);
  w.varint(static_cast<std::uint64_t>(psi.N));
  w.varint(static_cast<std::uint64_t>(psi.n_max));
  w.varint(psi.ext_len);
  w.varint(psi.U.ext_len);
  w.varint(psi.U.total);
  w.varint(psi.U.sets.size());
  for (std::size_t k = 0; k < psi.U.sets.size(); ++k) {
    w.varint(psi.U.hits[k]);
    write_word_list(w, psi.U.sets[k]);
  }
  w.varint(psi.W);
  w.varint(psi.n);
  w.varint(psi.I1.size());
  std::int64_t prev = 0;
  for (auto i : psi.I1) {
    w.varint(static_cast<std::uint64_t>(i - prev));
    prev = i;
  }
  w.varint(psi.i2_count);
  write_word_list(w, psi.table);
  w.symbols(psi.pad_tail);
  write_code(w, psi.code);
  w.u64le(fnv1a64(w.bytes()));
  return w.take();
}

PsiArtifact deserialize_psi(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) fail(ErrorKind::corruption, "truncated", "artifact shorter than its checksum");
  ByteReader tail(bytes.subspan(bytes.size() - 8));
  if (tail.u64le() != fnv1a64(bytes.first(bytes.size() - 8))) fail(ErrorKind::corruption, "bad-checksum", "artifact checksum does not match");
  ByteReader r(bytes.first(bytes.size() - 8));
  PsiArtifact psi;
  r.expect("PSIA");
  if (r.varint() != kPsiVersion) fail(ErrorKind::corruption, "bad-version", "unsupported artifact version");
  psi.base_hash = r.u64le();
  psi.t = r.f64();
  psi.h_prime = r.f64();
  psi.w = r.symbols();
  psi.u = r.symbols();
  psi.v = r.symbols();
  psi.M = r.varint();
  psi.a = r.symbols();
  psi.N = static_cast<std::int64_t>(r.varint());
  psi.n_max = static_cast<int>(r.varint());
  psi.ext_len = r.varint();
  psi.U.ext_len = r.varint();
  psi.U.total = r.varint();
  const auto sets = r.varint();
  if (sets > 64) fail(ErrorKind::corruption, "bad-header", "implausible U family size");
  for (std::uint64_t k = 0; k < sets; ++k) {
    psi.U.hits.push_back(r.varint());
    psi.U.sets.push_back(read_word_list(r));
  }
  psi.W = r.varint();
  psi.n = r.varint();
  const auto markers = r.varint();
  std::int64_t prev = 0;
  for (std::uint64_t k = 0; k < markers; ++k) {
    prev += static_cast<std::int64_t>(r.varint());
    psi.I1.push_back(prev);
  }
  psi.i2_count = r.varint();
  psi.table = read_word_list(r);
  psi.pad_tail = r.symbols();
  psi.code = read_code(r);
  if (!r.at_end()) fail(ErrorKind::corruption, "trailing-bytes", "unexpected bytes at offset " + std::to_string(r.position()));
  return psi;
}

DecodeResult decode(const SymbolicSample& y, const Sft& Y, double t, const PsiArtifact& psi, const PipelineConfig& cfg) {
  if (psi.base_hash != Y.hash()) psi_mismatch("artifact was built for a different target system");
  if (psi.t != t) psi_mismatch("artifact was built for t = " + std::to_string(psi.t));
  const MarkerParams p = derive_marker_params(Y, t, cfg);
  if (p.w != psi.w || p.u != psi.u || p.v != psi.v || p.M != psi.M || p.N != psi.N || p.W != psi.W) {
    psi_mismatch("marker parameters recomputed from (Y, t) differ from the artifact");
  }
  if (y.size() != psi.n) psi_mismatch("window length " + std::to_string(y.size()) + " differs from the artifact's " + std::to_string(psi.n));
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y.symbols[i] >= Y.num_edges()) fail(ErrorKind::corruption, "bad-symbol", "symbol at offset " + std::to_string(i) + " is not an edge");

  DecodeResult out;
  out.I1 = occurrences(y, p.w);
  if (out.I1 != psi.I1) {
    std::size_t k = 0;
    while (k < out.I1.size() && k < psi.I1.size() && out.I1[k] == psi.I1[k]) ++k;
    const auto at = k < out.I1.size() ? out.I1[k] : (k < psi.I1.size() ? psi.I1[k] : 0);
    fail(ErrorKind::corruption, "psi-mismatch", "marker occurrences disagree with the artifact at offset " + std::to_string(at));
  }
  const auto n = static_cast<std::int64_t>(y.size());
  auto idx = stage("index_sets", [&] {
    try {
      return index_sets(out.I1, 0, n - static_cast<std::int64_t>(p.W), p.w.size(), p.M);
    } catch (const Error& e) {
      throw Error(ErrorKind::corruption, e.tag(), e.message());
    }
  });

  MarkerScheme scheme;
  scheme.w = p.w;
  scheme.M = p.M;
  scheme.u_labels = p.u_labels;
  scheme.v_labels = p.v_labels;
  scheme.n_max = psi.n_max;
  out.sigma = stage("recover_sigma", [&] {
    try {
      return recover_sigma(y.symbols, out.I1, scheme);
    } catch (const Error& e) {
      if (e.tag() == "ambiguous-density") psi_mismatch("slot density is ambiguous: " + e.message());
      throw;
    }
  });
  if (psi.code.scheme_digest() != scheme_digest(psi.code)) psi_mismatch("dictionary does not match its recorded digest");
  if (out.sigma.sigma != sigma_from_digest(psi.code.scheme_digest(), psi.n_max)) psi_mismatch("sigma bits read from y do not match the artifact digest");
  if (idx.I2.size() != psi.i2_count) psi_mismatch("itinerary length differs from the artifact");

  // Labels on I2 back to a path in Y' from the anchor vertex.
  LabelIndex labels(p);
  Word y_prime;
  y_prime.reserve(idx.I2.size() + psi.pad_tail.size());
  VertexId state = p.v0;
  for (std::int64_t j : idx.I2) {
    auto e = labels.step(state, y.symbols[static_cast<std::size_t>(j)]);
    if (!e) fail(ErrorKind::corruption, "not-a-path", "itinerary cell at offset " + std::to_string(j) + " leaves the restricted system");
    y_prime.push_back(*e);
    state = p.restricted.edge(*e).target;
  }
  for (Symbol e : psi.pad_tail) {
    if (e >= p.restricted.num_edges() || p.restricted.edge(e).source != state) psi_mismatch("padding does not continue the itinerary path");
    y_prime.push_back(e);
    state = p.restricted.edge(e).target;
  }
  const std::size_t L = psi.code.block_length();
  if (y_prime.size() % L != 0) psi_mismatch("itinerary plus padding is not a whole number of codewords");
  Word x_prime;
  x_prime.reserve(y_prime.size());
  for (std::size_t k = 0; k < y_prime.size(); k += L) {
    const Word* in = psi.code.input(std::span<const Symbol>(y_prime).subspan(k, L));
    if (!in) {
      const auto at = k < idx.I2.size() ? idx.I2[k] : n;
      throw Error(ErrorKind::corruption, "unknown-codeword", "no dictionary entry for the codeword starting at offset " + std::to_string(at), "decode_blocks");
    }
    x_prime.insert(x_prime.end(), in->begin(), in->end());
  }
  x_prime.resize(idx.I2.size());
  auto rec = stage("reconstruct", [&] { return reconstruct_from_itinerary(x_prime, psi.table, idx, psi.W); });
  out.x_hat = std::move(rec.symbols);
  out.covered = std::move(rec.covered);
  out.x_hat.resize(y.size(), 0);
  out.covered.resize(y.size(), 0);
  out.interior_lo = p.N + static_cast<std::int64_t>(p.W);
  out.interior_hi = std::max(out.interior_lo, n - p.N - static_cast<std::int64_t>(p.W));
  return out;
}

std::size_t interior_mismatches(std::span<const Symbol> x, const DecodeResult& d) {
  std::size_t bad = 0;
  for (std::int64_t i = d.interior_lo; i < d.interior_hi; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (k >= x.size() || k >= d.x_hat.size() || !d.covered[k] || d.x_hat[k] != x[k]) ++bad;
  }
  return bad;
}

bool MeasureSeparation::ok() const {
  return std::all_of(trials.begin(), trials.end(), [](const SeparationTrial& t) { return t.identification_differs && t.own_decodes && t.cross_rejected; });
}

MeasureSeparation separation_experiment(const MarkovSource& first, const MarkovSource& second, const Sft& Y, double t, std::size_t length,
                                        std::span<const std::uint64_t> seeds, const PipelineConfig& cfg) {
  MeasureSeparation rep;
  auto anchor_freq = [](const SymbolicSample& x, const Word& a) {
    return static_cast<double>(occurrences(x, a).size()) / static_cast<double>(x.size() - a.size() + 1);
  };
  // True when decoding fails or reconstructs something other than x.
  auto rejected = [&](const SymbolicSample& x, const EmbeddingResult& enc, const PsiArtifact& psi) {
    try {
      return interior_mismatches(x.symbols, decode(enc.y, Y, t, psi, cfg)) > 0;
    } catch (const Error&) {
      return true;
    }
  };
  for (std::uint64_t seed : seeds) {
    SeparationTrial tr;
    tr.seed = seed;
    const auto xa = markov_sample(first, length, seed);
    const auto xb = markov_sample(second, length, seed);
    const auto ea = encode(xa, Y, t, cfg), eb = encode(xb, Y, t, cfg);
    tr.a_first = ea.plan.a;
    tr.a_second = eb.plan.a;
    tr.freq_first = anchor_freq(xa, ea.plan.a);
    tr.freq_second = anchor_freq(xb, eb.plan.a);
    tr.dict_first = ea.plan.code.dictionary_hash();
    tr.dict_second = eb.plan.code.dictionary_hash();
    tr.identification_differs = tr.a_first != tr.a_second || std::abs(tr.freq_first - tr.freq_second) > 3.0 / std::sqrt(static_cast<double>(length)) ||
                                tr.dict_first != tr.dict_second;
    tr.own_decodes = !rejected(xa, ea, ea.psi) && !rejected(xb, eb, eb.psi);
    tr.cross_rejected = rejected(xa, ea, eb.psi) && rejected(xb, eb, ea.psi);
    rep.trials.push_back(std::move(tr));
  }
  return rep;
}

}  // namespace symdyn
