// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "chain/encoding.hpp"

#include <limits>

#include "common/error.hpp"

namespace votechain {

void ByteWriter::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void ByteWriter::u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void ByteWriter::count(std::size_t n) {
  if (n > std::numeric_limits<std::uint32_t>::max()) throw Error(ErrorCode::InvalidArgument, "list too long");
  u32(static_cast<std::uint32_t>(n));
}

void ByteWriter::bytes(ByteView data) {
  count(data.size());
  raw(data);
}

void ByteReader::fail(const char* what) const {
  throw Error(ErrorCode::DecodeError, std::string(what) + " at offset " + std::to_string(pos_));
}

void ByteReader::need(std::size_t n) const {
  if (remaining() < n) fail("truncated input");
}

std::uint64_t ByteReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_++];
  return v;
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
  return v;
}

std::size_t ByteReader::count() { return u32(); }

Bytes ByteReader::bytes() {
  const std::size_t n = u32();
  need(n);
  Bytes out(data_.begin() + static_cast<std::ptrdiff_t>(pos_), data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return out;
}

std::string ByteReader::string() {
  const Bytes b = bytes();
  return {b.begin(), b.end()};
}

}  // namespace votechain
