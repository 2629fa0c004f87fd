// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "symdyn/experiment.hpp"

#include <cstdio>
#include <sstream>

#include "symdyn/bytes.hpp"
#include "symdyn/errors.hpp"
#include "symdyn/frequency_channel.hpp"
#include "symdyn/induced.hpp"
#include "symdyn/sft_io.hpp"

namespace symdyn {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_line(std::size_t line, const std::string& msg) {
  fail(ErrorKind::input, "bad-spec", "line " + std::to_string(line) + ": " + msg);
}

double parse_real(const std::string& v, std::size_t line) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  bad_line(line, "not a number: '" + v + "'");
}

std::uint64_t parse_uint(const std::string& v, std::size_t line) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) bad_line(line, "not a nonnegative integer: '" + v + "'");
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    bad_line(line, "integer out of range: '" + v + "'");
  }
}

MarkovSource parse_rows(const std::string& v, std::size_t line) {
  std::vector<std::vector<double>> rows(1);
  std::istringstream in(v);
  std::string tok;
  while (in >> tok) {
    if (tok == "/") {
      rows.emplace_back();
    } else {
      rows.back().push_back(parse_real(tok, line));
    }
  }
  try {
    return MarkovSource::create(rows);
  } catch (const Error& e) {
    bad_line(line, e.message());
  }
}

std::string rows_text(const MarkovSource& src) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < src.states(); ++i) {
    if (i) out << " /";
    for (std::size_t j = 0; j < src.states(); ++j) out << ' ' << src.p(i, j);
  }
  return out.str();
}

const char* kind_name(TrialKind k) {
  switch (k) {
    case TrialKind::roundtrip: return "roundtrip";
    case TrialKind::separation: return "separation";
    case TrialKind::abramov: return "abramov";
    case TrialKind::sigma: return "sigma";
  }
  return "?";
}

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::input: return "input";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::corruption: return "corruption";
    case ErrorKind::internal: return "internal";
  }
  return "?";
}

std::string real(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

std::string bits_text(const SigmaBits& s) {
  std::string out;
  for (auto b : s.bits) out += b ? '1' : '0';
  return out;
}

std::uint64_t hash_symbols(std::span<const Symbol> s) {
  ByteWriter w;
  for (Symbol v : s) w.varint(v);
  return fnv1a64(w.bytes());
}

class Block {
 public:
  template <class T>
  Block& put(const std::string& key, const T& value) {
    std::ostringstream v;
    v << value;
    out_ << key << ": " << v.str() << '\n';
    return *this;
  }
  Block& flag(const std::string& key, bool b) { return put(key, b ? "yes" : "no"); }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::size_t roundtrip_fields(const SymbolicSample& x, const Sft& Y, double t, const PipelineConfig& cfg, Block& b, EmbeddingResult* keep = nullptr) {
  auto enc = encode(x, Y, t, cfg);
  const auto dec = decode(enc.y, Y, t, deserialize_psi(enc.psi_bytes), cfg);
  const auto& p = enc.plan.params;
  const std::size_t mism = interior_mismatches(x.symbols, dec);
  const double interior = static_cast<double>(enc.interior_hi - enc.interior_lo);
  b.put("window", x.size())
      .put("marker", format_word(Y, p.w))
      .put("M", p.M)
      .put("N", p.N)
      .put("W", p.W)
      .put("anchor_length", enc.plan.a.size())
      .put("markers", enc.idx.I1.size())
      .put("itinerary_length", enc.idx.I2.size())
      .put("block_length", enc.plan.code.block_length())
      .put("dictionary_size", enc.plan.code.size())
      .put("loop_capacity", enc.capacity)
      .put("n_max", enc.plan.n_max)
      .put("extension_length", enc.plan.ext_len)
      .put("sigma", bits_text(enc.plan.sigma()))
      .put("sigma_read", bits_text(dec.sigma.sigma))
      .put("interior", "[" + std::to_string(enc.interior_lo) + ", " + std::to_string(enc.interior_hi) + ")")
      .put("interior_fraction", real(interior / static_cast<double>(x.size())))
      .put("margin_left", enc.interior_lo)
      .put("margin_right", static_cast<std::int64_t>(x.size()) - enc.interior_hi)
      .put("mismatches", mism)
      .put("psi_bytes", enc.psi_bytes.size())
      .put("psi_hash", hex64(fnv1a64(enc.psi_bytes)))
      .put("y_hash", hex64(hash_symbols(enc.y.symbols)))
      .flag("admissible", is_admissible(Y, enc.y.symbols))
      .flag("marker_pure", occurrences(enc.y, p.w) == enc.idx.I1)
      .flag("exact", mism == 0);
  if (keep) *keep = std::move(enc);
  return mism;
}

void roundtrip_trial(const ExperimentSpec& spec, const TrialSpec& tr, Block& b) {
  roundtrip_fields(markov_sample(spec.source, spec.length, tr.seed), spec.Y, spec.t, spec.cfg, b);
}

void separation_trial(const ExperimentSpec& spec, const TrialSpec& tr, Block& b) {
  const std::uint64_t seeds[] = {tr.seed};
  const auto rep = separation_experiment(spec.source, spec.second_source, spec.Y, spec.t, spec.length, seeds, spec.cfg);
  const auto& s = rep.trials.front();
  b.put("anchor_first", format_word(Sft::full_shift(static_cast<unsigned>(spec.source.states())), s.a_first))
      .put("anchor_second", format_word(Sft::full_shift(static_cast<unsigned>(spec.second_source.states())), s.a_second))
      .put("anchor_freq_first", real(s.freq_first))
      .put("anchor_freq_second", real(s.freq_second))
      .put("dictionary_first", hex64(s.dict_first))
      .put("dictionary_second", hex64(s.dict_second))
      .flag("identification_differs", s.identification_differs)
      .flag("own_decodes", s.own_decodes)
      .flag("cross_rejected", s.cross_rejected);
}

void abramov_trial(const ExperimentSpec& spec, const TrialSpec& tr, Block& b) {
  const auto x = markov_sample(spec.source, spec.length, tr.seed);
  const auto enc = encode(x, spec.Y, spec.t, spec.cfg);
  const auto rep = abramov_check(x, enc.idx, spec.cfg.k);
  b.put("k", spec.cfg.k)
      .put("sample_entropy", real(rep.sample_entropy))
      .put("itinerary_entropy", real(rep.itinerary_entropy))
      .put("mass", real(rep.mass))
      .put("predicted", real(rep.predicted))
      .put("relative_gap", real(rep.relative_gap))
      .put("corrected_sample_entropy", real(rep.corrected_sample_entropy))
      .put("corrected_itinerary_entropy", real(rep.corrected_itinerary_entropy))
      .put("corrected_gap", real(rep.corrected_gap));
}

void sigma_trial(const TrialSpec& tr, Block& b) {
  const auto sweep = sigma_sweep(tr.n_max, tr.markers, tr.seed);
  b.put("n_max", tr.n_max).put("markers", tr.markers);
  for (const auto& c : sweep.cases) {
    b.put("pattern " + bits_text(c.sigma), "read " + bits_text(c.recovery.sigma) + " u_count " + std::to_string(c.recovery.u_count) +
                                                 " margin " + real(c.recovery.margin));
  }
  b.put("recovered", std::to_string(sweep.recovered()) + "/" + std::to_string(sweep.cases.size()));
}

}  // namespace

Sft resolve_sft(std::string_view name, const std::filesystem::path& base_dir) {
  if (name == "GM") return Sft::build({"p", "q"}, {{"e0", "p", "p", ""}, {"e1", "p", "q", ""}, {"e2", "q", "p", ""}});
  if (name.size() > 4 && name.substr(0, 4) == "FULL" && name.substr(4).find_first_not_of("0123456789") == std::string_view::npos) {
    const auto k = std::stoul(std::string(name.substr(4)));
    if (k < 1 || k > 4096) fail(ErrorKind::input, "bad-spec", "full shift size out of range");
    return Sft::full_shift(static_cast<unsigned>(k));
  }
  std::filesystem::path p(name);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return read_sft_file(p);
}

ExperimentSpec parse_experiment(std::string_view text, const std::filesystem::path& base_dir) {
  ExperimentSpec spec;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string l = trim(std::string_view(raw).substr(0, hash));
    if (l.empty()) continue;
    const auto colon = l.find(':');
    if (colon == std::string::npos) bad_line(line, "expected 'key: value'");
    const std::string key = trim(std::string_view(l).substr(0, colon));
    const std::string val = trim(std::string_view(l).substr(colon + 1));
    if (key == "name") {
      if (val.empty()) bad_line(line, "empty name");
      spec.name = val;
    } else if (key == "sft") {
      spec.sft_name = val;
      spec.Y = resolve_sft(val, base_dir);
    } else if (key == "sft_hash") {
      if (val != hex64(spec.Y.hash())) bad_line(line, "sft_hash " + val + " does not match the SFT (" + hex64(spec.Y.hash()) + ")");
    } else if (key == "t") {
      spec.t = parse_real(val, line);
      if (!(spec.t > 0.0)) bad_line(line, "t must be positive");
    } else if (key == "length") {
      spec.length = parse_uint(val, line);
    } else if (key == "k") {
      spec.cfg.k = static_cast<int>(parse_uint(val, line));
      if (spec.cfg.k < 1) bad_line(line, "k must be at least 1");
    } else if (key == "n_max") {
      spec.cfg.n_max = static_cast<int>(parse_uint(val, line));
      if (spec.cfg.n_max < 1 || spec.cfg.n_max > 3) bad_line(line, "n_max must be 1, 2 or 3");
    } else if (key == "min_markers") {
      spec.cfg.min_markers = parse_uint(val, line);
    } else if (key == "block_length") {
      spec.cfg.block_length = parse_uint(val, line);
    } else if (key == "source") {
      spec.source = parse_rows(val, line);
    } else if (key == "second_source") {
      spec.second_source = parse_rows(val, line);
    } else if (key == "trial") {
      std::istringstream tin(val);
      std::string kind, opt;
      tin >> kind;
      TrialSpec tr;
      if (kind == "roundtrip") tr.kind = TrialKind::roundtrip;
      else if (kind == "separation") tr.kind = TrialKind::separation;
      else if (kind == "abramov") tr.kind = TrialKind::abramov;
      else if (kind == "sigma") tr.kind = TrialKind::sigma;
      else bad_line(line, "unknown trial kind '" + kind + "'");
      while (tin >> opt) {
        const auto eq = opt.find('=');
        if (eq == std::string::npos) bad_line(line, "expected option=value, got '" + opt + "'");
        const std::string k = opt.substr(0, eq), v = opt.substr(eq + 1);
        if (k == "seed") tr.seed = parse_uint(v, line);
        else if (k == "n_max" && tr.kind == TrialKind::sigma) tr.n_max = static_cast<int>(parse_uint(v, line));
        else if (k == "markers" && tr.kind == TrialKind::sigma) tr.markers = parse_uint(v, line);
        else bad_line(line, "unknown option '" + k + "' for " + kind);
      }
      if (tr.n_max < 1 || tr.n_max > 3) bad_line(line, "n_max must be 1, 2 or 3");
      spec.trials.push_back(tr);
    } else {
      bad_line(line, "unknown key '" + key + "'");
    }
  }
  return spec;
}

ExperimentSpec read_experiment_file(const std::filesystem::path& path) {
  return parse_experiment(read_text_file(path), path.parent_path());
}

std::string to_text(const ExperimentSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  out << "name: " << spec.name << '\n'
      << "sft: " << spec.sft_name << '\n'
      << "sft_hash: " << hex64(spec.Y.hash()) << '\n'
      << "t: " << spec.t << '\n'
      << "length: " << spec.length << '\n'
      << "k: " << spec.cfg.k << '\n'
      << "n_max: " << spec.cfg.n_max << '\n'
      << "min_markers: " << spec.cfg.min_markers << '\n'
      << "block_length: " << spec.cfg.block_length << '\n'
      << "source:" << rows_text(spec.source) << '\n'
      << "second_source:" << rows_text(spec.second_source) << '\n';
  for (const auto& tr : spec.trials) {
    out << "trial: " << kind_name(tr.kind) << " seed=" << tr.seed;
    if (tr.kind == TrialKind::sigma) out << " n_max=" << tr.n_max << " markers=" << tr.markers;
    out << '\n';
  }
  return out.str();
}

std::string run_experiment(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "symdyn-report 1\n"
      << "name: " << spec.name << '\n'
      << "spec_hash: " << hex64(fnv1a64(to_text(spec))) << '\n'
      << "trials: " << spec.trials.size() << '\n';
  for (std::size_t i = 0; i < spec.trials.size(); ++i) {
    const auto& tr = spec.trials[i];
    Block b;
    b.put("trial", i + 1).put("kind", kind_name(tr.kind)).put("seed", tr.seed);
    Block body;
    try {
      switch (tr.kind) {
        case TrialKind::roundtrip: roundtrip_trial(spec, tr, body); break;
        case TrialKind::separation: separation_trial(spec, tr, body); break;
        case TrialKind::abramov: abramov_trial(spec, tr, body); break;
        case TrialKind::sigma: sigma_trial(tr, body); break;
      }
      out << '\n' << b.str() << body.str() << "status: ok\n";
    } catch (const Error& e) {
      out << '\n' << b.str() << "status: error\nerror: " << error_kind_name(e.kind()) << ' ' << e.tag() << '\n';
    }
  }
  std::string text = out.str();
  text += "content_hash: " + hex64(fnv1a64(text)) + "\n";
  return text;
}

RoundtripOutcome roundtrip_report(const SymbolicSample& x, const Sft& Y, double t, const PipelineConfig& cfg) {
  RoundtripOutcome out;
  Block b;
  b.put("t", real(t)).put("sft_hash", hex64(Y.hash())).put("sample_hash", hex64(hash_symbols(x.symbols)));
  out.mismatches = roundtrip_fields(x, Y, t, cfg, b, &out.encoded);
  out.report = "symdyn-roundtrip 1\n" + b.str();
  out.report += "content_hash: " + hex64(fnv1a64(out.report)) + "\n";
  return out;
}

bool verify_report(std::string_view report) {
  constexpr std::string_view key = "content_hash: ";
  if (report.size() < key.size() + 17 || report.back() != '\n') return false;
  const auto start = report.rfind('\n', report.size() - 2);
  const std::size_t line_start = start == std::string_view::npos ? 0 : start + 1;
  const auto last = report.substr(line_start, report.size() - line_start - 1);
  if (last.substr(0, key.size()) != key) return false;
  return hex64(fnv1a64(report.substr(0, line_start))) == last.substr(key.size());
}

}  // namespace symdyn
