// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Exit codes: 0 success, 2 input, 3 precondition,
// 4 corruption, 5 internal.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "symdyn/bytes.hpp"
#include "symdyn/errors.hpp"
#include "symdyn/experiment.hpp"
#include "symdyn/measures.hpp"
#include "symdyn/pipeline.hpp"
#include "symdyn/sft.hpp"
#include "symdyn/sft_io.hpp"

using namespace symdyn;

namespace {

struct Options {
  double t = 0.35;
  std::uint64_t seed = 1;
  std::size_t length = 1000000;
  int n_max = 3;
  int k = 3;
  std::size_t min_markers = 32;
  std::string psi;
  std::string out;
  std::string word;
  std::vector<std::string> files;
  bool demo = false;
};

// Markov files are sampled with --seed and --length; sample files are used as is.
SymbolicSample load_input(const std::string& path, const Options& o) {
  const std::string text = read_text_file(path);
  std::istringstream head(text);
  std::string tag;
  while (head >> tag && tag[0] == '#') head.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
  if (tag == "markov") return markov_sample(parse_markov(text), o.length, o.seed);
  return parse_sample(text);
}

PipelineConfig pipeline_config(const Options& o) {
  if (o.n_max < 1 || o.n_max > 3) fail(ErrorKind::input, "bad-argument", "--n-max must be 1, 2 or 3");
  if (o.k < 1) fail(ErrorKind::input, "bad-argument", "--k must be at least 1");
  PipelineConfig cfg;
  cfg.n_max = o.n_max;
  cfg.k = o.k;
  cfg.min_markers = o.min_markers;
  return cfg;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(o.out, text);
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_entropy(const Options& o) {
  std::printf("%.12f\n", entropy(resolve_sft(o.files.at(0))));
  return 0;
}

int cmd_mixing(const Options& o) {
  const Sft sft = resolve_sft(o.files.at(0));
  const bool mixing = is_mixing(sft);
  std::printf("mixing: %s\n", mixing ? "yes" : "no");
  if (mixing) std::printf("transition_length: %d\n", transition_length(sft));
  return 0;
}

int cmd_marker(const Options& o) {
  const Sft sft = resolve_sft(o.files.at(0));
  const auto m = find_marker(sft, o.t, 12);
  std::printf("marker: %s\nrestricted_entropy: %.12f\ntransition_length: %d\n", format_word(sft, m.w).c_str(), m.restricted_entropy,
              transition_length(m.restricted));
  return 0;
}

int cmd_restrict(const Options& o) {
  const Sft sft = resolve_sft(o.files.at(0));
  emit(o, to_text(restrict_forbidden(sft, parse_word(sft, o.word))));
  return 0;
}

int cmd_encode(const Options& o) {
  if (o.psi.empty() || o.out.empty()) fail(ErrorKind::input, "bad-argument", "encode needs --psi and --out");
  const Sft Y = resolve_sft(o.files.at(1));
  const auto x = load_input(o.files.at(0), o);
  const auto t0 = std::chrono::steady_clock::now();
  const auto enc = encode(x, Y, o.t, pipeline_config(o));
  std::fprintf(stderr, "encode: %.2f s\n", seconds_since(t0));
  write_text_file(o.out, to_text(enc.y, &Y));
  std::ofstream(o.psi, std::ios::binary).write(reinterpret_cast<const char*>(enc.psi_bytes.data()), static_cast<std::streamsize>(enc.psi_bytes.size()));
  std::printf("window: %zu\nmarker: %s\nmarkers: %zu\nblock_length: %zu\ninterior: [%lld, %lld)\npsi_bytes: %zu\n", x.size(),
              format_word(Y, enc.plan.params.w).c_str(), enc.idx.I1.size(), enc.plan.code.block_length(),
              static_cast<long long>(enc.interior_lo), static_cast<long long>(enc.interior_hi), enc.psi_bytes.size());
  return 0;
}

int cmd_decode(const Options& o) {
  if (o.psi.empty()) fail(ErrorKind::input, "bad-argument", "decode needs --psi");
  const Sft Y = resolve_sft(o.files.at(1));
  const auto y = parse_sample(read_text_file(o.files.at(0)), &Y);
  std::ifstream in(o.psi, std::ios::binary);
  if (!in) fail(ErrorKind::input, "io", "cannot open " + o.psi);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto dec = decode(y, Y, o.t, deserialize_psi(bytes), pipeline_config(o));
  SymbolicSample x_hat;
  x_hat.base_index = y.base_index + dec.interior_lo;
  x_hat.symbols.assign(dec.x_hat.begin() + dec.interior_lo, dec.x_hat.begin() + dec.interior_hi);
  if (!o.out.empty()) write_text_file(o.out, to_text(x_hat));
  std::printf("interior: [%lld, %lld)\nsigma_markers: %zu\n", static_cast<long long>(dec.interior_lo), static_cast<long long>(dec.interior_hi),
              dec.I1.size());
  return 0;
}

int cmd_roundtrip(const Options& o) {
  SymbolicSample x;
  Sft Y;
  if (o.demo) {
    x = markov_sample(MarkovSource::create({{0.95, 0.05}, {0.5, 0.5}}), o.length, o.seed);
    Y = Sft::full_shift(2);
  } else {
    if (o.files.size() != 2) fail(ErrorKind::input, "bad-argument", "roundtrip needs <source|sample> <sft> or --demo");
    x = load_input(o.files[0], o);
    Y = resolve_sft(o.files[1]);
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto rt = roundtrip_report(x, Y, o.t, pipeline_config(o));
  std::fprintf(stderr, "roundtrip: %.2f s\n", seconds_since(t0));
  emit(o, rt.report);
  return rt.mismatches == 0 ? 0 : 1;
}

int cmd_slice(const Options& o) {
  std::vector<SymbolicSample> samples;
  for (const auto& f : o.files) samples.push_back(load_input(f, o));
  const auto r = t_slice_filter(samples, o.t, o.k);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const bool kept = std::find(r.kept.begin(), r.kept.end(), i) != r.kept.end();
    std::printf("%s %.12f %s\n", o.files[i].c_str(), r.estimates[i], kept ? "kept" : "discarded");
  }
  return 0;
}

int cmd_experiment(const Options& o) {
  emit(o, run_experiment(read_experiment_file(o.files.at(0))));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symdyn: shifts of finite type, empirical measures and finitary embeddings"};
  app.require_subcommand(1);
  Options o;

  auto sft_only = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("sft", o.files, "SFT file, FULL<k> or GM")->required()->expected(1);
    return c;
  };
  auto* entropy_cmd = sft_only("entropy", "Topological entropy, 12 digits");
  auto* mixing_cmd = sft_only("mixing", "Mixing test and transition length");
  auto* marker_cmd = sft_only("marker", "First marker whose restriction has entropy above --t");
  marker_cmd->add_option("--t", o.t, "Entropy threshold");
  auto* restrict_cmd = sft_only("restrict", "Restriction avoiding --word");
  restrict_cmd->add_option("--word", o.word, "Forbidden word")->required();
  restrict_cmd->add_option("--out", o.out, "Output file");

  auto pipeline_flags = [&](CLI::App* c) {
    c->add_option("--t", o.t, "Entropy threshold");
    c->add_option("--seed", o.seed, "Sampling seed for Markov inputs");
    c->add_option("--length", o.length, "Window length for Markov inputs");
    c->add_option("--n-max", o.n_max, "Upper bound on sigma bits (1..3)");
    c->add_option("--k", o.k, "Entropy estimator order");
    c->add_option("--min-markers", o.min_markers, "Minimum anchor occurrences");
  };
  auto* encode_cmd = app.add_subcommand("encode", "Embed a sample into an SFT");
  encode_cmd->add_option("input", o.files, "Markov or sample file, then SFT")->required()->expected(2);
  pipeline_flags(encode_cmd);
  encode_cmd->add_option("--psi", o.psi, "Artifact output path");
  encode_cmd->add_option("--out", o.out, "Encoded sample output path");

  auto* decode_cmd = app.add_subcommand("decode", "Recover a sample from its image");
  decode_cmd->add_option("input", o.files, "Encoded sample file, then SFT")->required()->expected(2);
  pipeline_flags(decode_cmd);
  decode_cmd->add_option("--psi", o.psi, "Artifact path");
  decode_cmd->add_option("--out", o.out, "Reconstructed interior output path");

  auto* roundtrip_cmd = app.add_subcommand("roundtrip", "Encode, decode and compare");
  roundtrip_cmd->add_option("input", o.files, "Markov or sample file, then SFT")->expected(0, 2);
  roundtrip_cmd->add_flag("--demo", o.demo, "Bundled two-state source on FULL2");
  pipeline_flags(roundtrip_cmd);
  roundtrip_cmd->add_option("--out", o.out, "Report output path");

  auto* slice_cmd = app.add_subcommand("slice", "Keep samples whose entropy estimate is below --t");
  slice_cmd->add_option("inputs", o.files, "Markov or sample files")->required();
  slice_cmd->add_option("--t", o.t, "Entropy threshold");
  slice_cmd->add_option("--k", o.k, "Entropy estimator order");
  slice_cmd->add_option("--seed", o.seed, "Sampling seed for Markov inputs");
  slice_cmd->add_option("--length", o.length, "Window length for Markov inputs");

  auto* experiment_cmd = app.add_subcommand("experiment", "Run a seeded experiment spec");
  experiment_cmd->add_option("spec", o.files, "Spec file")->required()->expected(1);
  experiment_cmd->add_option("--out", o.out, "Report output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code(ErrorKind::input);
  }

  try {
    if (*entropy_cmd) return cmd_entropy(o);
    if (*mixing_cmd) return cmd_mixing(o);
    if (*marker_cmd) return cmd_marker(o);
    if (*restrict_cmd) return cmd_restrict(o);
    if (*encode_cmd) return cmd_encode(o);
    if (*decode_cmd) return cmd_decode(o);
    if (*roundtrip_cmd) return cmd_roundtrip(o);
    if (*slice_cmd) return cmd_slice(o);
    if (*experiment_cmd) return cmd_experiment(o);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", e.what());
    return exit_code(ErrorKind::internal);
  }
  return exit_code(ErrorKind::internal);
}
