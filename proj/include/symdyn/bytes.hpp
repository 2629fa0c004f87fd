// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symdyn {

/// 64-bit FNV-1a. Used for content hashes in artifacts and reports.
class Fnv1a64 {
 public:
  static constexpr std::uint64_t kOffset = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;

  void update(std::span<const std::uint8_t> data) {
    for (std::uint8_t b : data) {
      h_ ^= b;
      h_ *= kPrime;
    }
  }
  void update(std::string_view s) {
    update(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  }
  std::uint64_t digest() const { return h_; }

 private:
  std::uint64_t h_ = kOffset;
};

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> data) {
  Fnv1a64 h;
  h.update(data);
  return h.digest();
}

inline std::uint64_t fnv1a64(std::string_view s) {
  Fnv1a64 h;
  h.update(s);
  return h.digest();
}

/// Append-only little-endian writer with unsigned LEB128 varints.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u64le(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v);
  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      buf_.push_back(static_cast<std::uint8_t>(v | 0x80));
      v >>= 7;
    }
    buf_.push_back(static_cast<std::uint8_t>(v));
  }
  void raw(std::span<const std::uint8_t> data) { buf_.insert(buf_.end(), data.begin(), data.end()); }
  void raw(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void symbols(std::span<const std::uint32_t> word) {
    varint(word.size());
    for (auto s : word) varint(s);
  }

  const std::vector<std::uint8_t>& bytes() const { return buf_; }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

/// Bounds-checked reader; every overrun raises a corruption error.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8();
  std::uint64_t u64le();
  double f64();
  std::uint64_t varint();
  std::vector<std::uint32_t> symbols(std::size_t max_len = 1u << 24);
  void expect(std::string_view magic);

  std::size_t position() const { return pos_; }
  bool at_end() const { return pos_ == data_.size(); }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

std::string to_hex(std::span<const std::uint8_t> data);
std::vector<std::uint8_t> from_hex(std::string_view hex);
std::string hex64(std::uint64_t v);

/// Debug view: "oooooooo  xx xx ... xx" lines of 16 bytes.
std::string hex_dump(std::span<const std::uint8_t> data);

}  // namespace symdyn
