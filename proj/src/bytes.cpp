// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "symdyn/bytes.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>

#include "symdyn/errors.hpp"

namespace symdyn {

void ByteWriter::f64(double v) { u64le(std::bit_cast<std::uint64_t>(v)); }

std::uint8_t ByteReader::u8() {
  if (pos_ >= data_.size()) fail(ErrorKind::corruption, "truncated", "unexpected end of data at byte " + std::to_string(pos_));
  return data_[pos_++];
}

std::uint64_t ByteReader::u64le() {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
  return v;
}

double ByteReader::f64() { return std::bit_cast<double>(u64le()); }

std::uint64_t ByteReader::varint() {
  std::uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    std::uint8_t b = u8();
    v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
    if ((b & 0x80) == 0) return v;
  }
  fail(ErrorKind::corruption, "bad-varint", "varint longer than 10 bytes at byte " + std::to_string(pos_));
}

std::vector<std::uint32_t> ByteReader::symbols(std::size_t max_len) {
  std::uint64_t n = varint();
  if (n > max_len) fail(ErrorKind::corruption, "bad-length", "word length " + std::to_string(n) + " exceeds limit");
  std::vector<std::uint32_t> out(n);
  for (auto& s : out) {
    std::uint64_t v = varint();
    if (v > 0xffffffffULL) fail(ErrorKind::corruption, "bad-symbol", "symbol out of range");
    s = static_cast<std::uint32_t>(v);
  }
  return out;
}

void ByteReader::expect(std::string_view magic) {
  for (char c : magic) {
    if (u8() != static_cast<std::uint8_t>(c)) fail(ErrorKind::corruption, "bad-magic", "magic mismatch, expected '" + std::string(magic) + "'");
  }
}

std::string to_hex(std::span<const std::uint8_t> data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
  std::vector<std::uint8_t> out;
  int hi = -1;
  for (char c : hex) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else fail(ErrorKind::input, "bad-hex", std::string("invalid hex digit '") + c + "'");
    if (hi < 0) {
      hi = v;
    } else {
      out.push_back(static_cast<std::uint8_t>(hi << 4 | v));
      hi = -1;
    }
  }
  if (hi >= 0) fail(ErrorKind::input, "bad-hex", "odd number of hex digits");
  return out;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string hex_dump(std::span<const std::uint8_t> data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t row = 0; row < data.size(); row += 16) {
    char off[16];
    std::snprintf(off, sizeof off, "%08zx ", row);
    out += off;
    for (std::size_t i = row; i < std::min(row + 16, data.size()); ++i) {
      out.push_back(' ');
      out.push_back(kDigits[data[i] >> 4]);
      out.push_back(kDigits[data[i] & 15]);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace symdyn
