// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "chain/crypto.hpp"

#include <sodium.h>

#include <string>

#include "common/error.hpp"

namespace votechain {

namespace {
void ensure_sodium() {
  static const bool ready = [] { return sodium_init() >= 0; }();
  if (!ready) throw Error(ErrorCode::Internal, "libsodium failed to initialize");
}
}  // namespace

Digest32 hash_bytes(ByteView data) {
  ensure_sodium();
  Digest32 out;
  crypto_hash_sha256(out.bytes.data(), data.data(), data.size());
  return out;
}

Bytes random_bytes(std::size_t n) {
  ensure_sodium();
  Bytes out(n);
  randombytes_buf(out.data(), n);
  return out;
}

Address derive_address(const PublicKey& key) {
  const Digest32 d = hash_bytes(key.view());
  return Address::from(ByteView(d.bytes.data(), Address::size));
}

Address label_address(std::string_view domain, std::string_view election_id, std::string_view label) {
  std::string material = "votechain/";
  material.append(domain).append("/").append(election_id).append("/").append(label);
  const Digest32 d = hash_bytes(material);
  return Address::from(ByteView(d.bytes.data(), Address::size));
}

KeyPair KeyPair::from_seed(const std::array<std::uint8_t, 32>& seed) {
  ensure_sodium();
  KeyPair kp;
  kp.seed_ = seed;
  crypto_sign_seed_keypair(kp.public_.bytes.data(), kp.secret_.data(), seed.data());
  return kp;
}

KeyPair KeyPair::from_seed(ByteView seed) {
  if (seed.size() != 32) throw Error(ErrorCode::InvalidArgument, "key seed must be 32 bytes");
  std::array<std::uint8_t, 32> s{};
  std::copy(seed.begin(), seed.end(), s.begin());
  return from_seed(s);
}

KeyPair KeyPair::derive(std::string_view purpose, std::uint64_t seed, std::uint64_t index) {
  std::string material = "votechain/key/";
  material.append(purpose).append("/").append(std::to_string(seed)).append("/").append(std::to_string(index));
  return from_seed(hash_bytes(material).bytes);
}

KeyPair KeyPair::generate() {
  ensure_sodium();
  std::array<std::uint8_t, 32> seed{};
  randombytes_buf(seed.data(), seed.size());
  return from_seed(seed);
}

Signature KeyPair::sign(ByteView message) const {
  Signature sig;
  crypto_sign_detached(sig.bytes.data(), nullptr, message.data(), message.size(), secret_.data());
  return sig;
}

bool verify_signature(const PublicKey& key, ByteView message, const Signature& sig) {
  ensure_sodium();
  return crypto_sign_verify_detached(sig.bytes.data(), message.data(), message.size(), key.bytes.data()) == 0;
}

bool constant_time_equal(ByteView a, ByteView b) {
  if (a.size() != b.size()) return false;
  return sodium_memcmp(a.data(), b.data(), a.size()) == 0;
}

}  // namespace votechain
