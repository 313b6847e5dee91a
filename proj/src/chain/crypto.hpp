// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "common/bytes.hpp"

namespace votechain {

// SHA-256.
Digest32 hash_bytes(ByteView data);
inline Digest32 hash_bytes(std::string_view text) { return hash_bytes(as_bytes(text)); }

// Cryptographically secure random bytes.
Bytes random_bytes(std::size_t n);

// First 20 bytes of SHA-256(public key).
Address derive_address(const PublicKey& key);

// Address with no known key, used for candidates and the abstain sink.
Address label_address(std::string_view domain, std::string_view election_id, std::string_view label);

// Ed25519 signing key. The 32-byte seed is the only secret material; it never
// appears in any serialized chain or public structure.
class KeyPair {
 public:
  static KeyPair from_seed(const std::array<std::uint8_t, 32>& seed);
  static KeyPair from_seed(ByteView seed);
  // Deterministic key for tests, simulations and seeded elections.
  static KeyPair derive(std::string_view purpose, std::uint64_t seed, std::uint64_t index);
  static KeyPair generate();

  const PublicKey& public_key() const { return public_; }
  Address address() const { return derive_address(public_); }
  const std::array<std::uint8_t, 32>& seed() const { return seed_; }

  Signature sign(ByteView message) const;

 private:
  std::array<std::uint8_t, 32> seed_{};
  std::array<std::uint8_t, 64> secret_{};
  PublicKey public_;
};

bool verify_signature(const PublicKey& key, ByteView message, const Signature& sig);

// Constant-time equality for secrets such as OTP digests.
bool constant_time_equal(ByteView a, ByteView b);

}  // namespace votechain
