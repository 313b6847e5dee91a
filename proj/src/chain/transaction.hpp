// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "chain/crypto.hpp"
#include "common/bytes.hpp"

namespace votechain {

// Vote moves a voter's ballot token to a candidate or the abstain address.
// Mint, Sweep and Close are system transactions signed by the election
// authority: Mint creates a voter's tokens, Sweep drains an unused voter
// balance into the abstain address after the window closes, Close seals the
// election so that nothing else can be appended.
enum class TxKind : std::uint8_t { Vote = 0, Mint = 1, Sweep = 2, Close = 3 };

std::string_view tx_kind_name(TxKind kind);
std::optional<TxKind> parse_tx_kind(std::string_view name);

struct Transaction {
  TxKind kind = TxKind::Vote;
  std::string election_id;
  PublicKey from_pubkey;
  Address source;  // Sweep only: the drained account. Zero otherwise.
  Address to_address;
  std::uint64_t amount = 0;
  std::int64_t timestamp = 0;
  std::uint64_t nonce = 0;
  Signature signature;

  bool is_system() const { return kind != TxKind::Vote; }

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

// Field order: kind, election_id, from_pubkey, source, to_address, amount,
// timestamp, nonce, signature. canonical_bytes zeroes the signature field;
// encode keeps it.
Bytes canonical_bytes(const Transaction& tx);
Bytes encode(const Transaction& tx);
Transaction decode_transaction(ByteView data);

// Identifier of a signed transaction: SHA-256 of its full encoding.
Digest32 tx_hash(const Transaction& tx);

// Throws Error(KeyMismatch) if the key does not own tx.from_pubkey.
Transaction sign_transaction(Transaction tx, const KeyPair& key);
bool signature_valid(const Transaction& tx);

}  // namespace votechain
