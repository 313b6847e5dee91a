// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "common/bytes.hpp"

namespace votechain {

// Canonical wire encoding: integers are 8-byte big-endian, strings and byte
// fields carry a 4-byte big-endian length prefix, lists a 4-byte count.
class ByteWriter {
 public:
  void u64(std::uint64_t v);
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void u32(std::uint32_t v);
  void bytes(ByteView data);
  void string(std::string_view s) { bytes(as_bytes(s)); }
  void count(std::size_t n);
  void raw(ByteView data) { out_.insert(out_.end(), data.begin(), data.end()); }

  template <std::size_t N, class Tag>
  void fixed(const FixedBytes<N, Tag>& v) {
    bytes(v.view());
  }

  const Bytes& data() const& { return out_; }
  Bytes take() && { return std::move(out_); }

 private:
  Bytes out_;
};

// Throws Error(DecodeError) on truncation or malformed lengths.
class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  std::uint32_t u32();
  Bytes bytes();
  std::string string();
  std::size_t count();

  template <class T>
  T fixed() {
    const Bytes b = bytes();
    if (b.size() != T::size) fail("fixed-width field has wrong length");
    return T::from(b);
  }

  bool done() const { return pos_ == data_.size(); }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  [[noreturn]] void fail(const char* what) const;
  void need(std::size_t n) const;

  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace votechain
