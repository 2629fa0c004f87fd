// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "symdyn/sft_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "symdyn/errors.hpp"

namespace symdyn {
namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line.substr(0, line.find('#')));
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::size_t parse_count(const std::string& tok, std::size_t line_no) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size() || tok.empty() || tok[0] == '-') {
    fail(ErrorKind::input, "parse", "line " + std::to_string(line_no) + ": expected a count, got '" + tok + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

Sft parse_sft(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::size_t nv = 0, ne = 0;
  std::vector<std::string> declared;
  std::vector<EdgeSpec> edges;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = tokens(line);
    if (tok.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (!header) {
      if (tok.size() != 3 || tok[0] != "sft") fail(ErrorKind::input, "parse", where + "expected 'sft <num_vertices> <num_edges>'");
      nv = parse_count(tok[1], line_no);
      ne = parse_count(tok[2], line_no);
      header = true;
    } else if (tok[0] == "vertex") {
      if (tok.size() != 2) fail(ErrorKind::input, "parse", where + "expected 'vertex <name>'");
      declared.push_back(tok[1]);
    } else if (tok[0] == "edge") {
      if (tok.size() != 4 && tok.size() != 5) fail(ErrorKind::input, "parse", where + "expected 'edge <id> <source> <target> [label]'");
      edges.push_back({tok[1], tok[2], tok[3], tok.size() == 5 ? tok[4] : std::string()});
    } else {
      fail(ErrorKind::input, "parse", where + "unknown record '" + tok[0] + "'");
    }
  }
  if (!header) fail(ErrorKind::input, "parse", "missing 'sft' header");
  if (edges.size() != ne) {
    fail(ErrorKind::input, "parse", "header declares " + std::to_string(ne) + " edges, found " + std::to_string(edges.size()));
  }
  std::set<std::string> ids;
  for (const auto& e : edges) {
    if (!ids.insert(e.id).second) fail(ErrorKind::input, "duplicate-id", "edge id '" + e.id + "' appears twice");
  }
  std::vector<std::string> vertices;
  if (!declared.empty()) {
    if (declared.size() != nv) fail(ErrorKind::input, "parse", "header declares " + std::to_string(nv) + " vertices, found " + std::to_string(declared.size()));
    std::set<std::string> known(declared.begin(), declared.end());
    for (const auto& e : edges) {
      for (const auto* v : {&e.source, &e.target}) {
        if (!known.count(*v)) fail(ErrorKind::input, "dangling-vertex", "edge '" + e.id + "' references undeclared vertex '" + *v + "'");
      }
    }
    vertices = declared;
  } else {
    std::set<std::string> seen;
    for (const auto& e : edges) {
      seen.insert(e.source);
      seen.insert(e.target);
    }
    if (seen.size() != nv) {
      fail(ErrorKind::input, "dangling-vertex", "header declares " + std::to_string(nv) + " vertices but edges reference " + std::to_string(seen.size()));
    }
    vertices.assign(seen.begin(), seen.end());
  }
  return Sft::build(std::move(vertices), std::move(edges));
}

Sft read_sft_file(const std::filesystem::path& path) { return parse_sft(read_text_file(path)); }

std::string to_text(const Sft& sft) {
  std::ostringstream out;
  out << "sft " << sft.num_vertices() << ' ' << sft.num_edges() << '\n';
  for (const auto& e : sft.edges()) {
    out << "edge " << e.id << ' ' << sft.vertices()[e.source] << ' ' << sft.vertices()[e.target];
    if (e.label != e.id) out << ' ' << e.label;
    out << '\n';
  }
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::input, "io", "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::input, "io", "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace symdyn
