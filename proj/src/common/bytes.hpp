// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace votechain {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView data);
// Accepts upper or lower case; throws Error(InvalidArgument) on odd length or
// non-hex characters.
Bytes from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// Fixed-width byte value with a tag so digests, keys and addresses do not mix.
template <std::size_t N, class Tag>
struct FixedBytes {
  static constexpr std::size_t size = N;
  std::array<std::uint8_t, N> bytes{};

  ByteView view() const { return {bytes.data(), bytes.size()}; }
  std::string hex() const { return to_hex(view()); }
  bool is_zero() const {
    return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
  }

  static FixedBytes from(ByteView data);  // throws unless data.size() == N
  static FixedBytes from_hex(std::string_view hex) { return from(votechain::from_hex(hex)); }

  friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;
};

struct DigestTag;
struct PublicKeyTag;
struct SignatureTag;
struct AddressTag;

using Digest32 = FixedBytes<32, DigestTag>;
using PublicKey = FixedBytes<32, PublicKeyTag>;
using Signature = FixedBytes<64, SignatureTag>;
using Address = FixedBytes<20, AddressTag>;

}  // namespace votechain

template <std::size_t N, class Tag>
struct std::hash<votechain::FixedBytes<N, Tag>> {
  std::size_t operator()(const votechain::FixedBytes<N, Tag>& v) const noexcept {
    std::size_t h = 0;
    for (std::size_t i = 0; i < sizeof(std::size_t) && i < N; ++i) h = (h << 8) | v.bytes[i];
    return h;
  }
};
