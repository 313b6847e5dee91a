// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "chain/transaction.hpp"

#include "chain/encoding.hpp"
#include "common/error.hpp"

namespace votechain {

std::string_view tx_kind_name(TxKind kind) {
  switch (kind) {
    case TxKind::Vote: return "vote";
    case TxKind::Mint: return "mint";
    case TxKind::Sweep: return "sweep";
    case TxKind::Close: return "close";
  }
  return "vote";
}

std::optional<TxKind> parse_tx_kind(std::string_view name) {
  if (name == "vote") return TxKind::Vote;
  if (name == "mint") return TxKind::Mint;
  if (name == "sweep") return TxKind::Sweep;
  if (name == "close") return TxKind::Close;
  return std::nullopt;
}

namespace {
void write_fields(ByteWriter& w, const Transaction& tx, bool with_signature) {
  w.u64(static_cast<std::uint64_t>(tx.kind));
  w.string(tx.election_id);
  w.fixed(tx.from_pubkey);
  w.fixed(tx.source);
  w.fixed(tx.to_address);
  w.u64(tx.amount);
  w.i64(tx.timestamp);
  w.u64(tx.nonce);
  w.fixed(with_signature ? tx.signature : Signature{});
}
}  // namespace

Bytes canonical_bytes(const Transaction& tx) {
  ByteWriter w;
  write_fields(w, tx, false);
  return std::move(w).take();
}

Bytes encode(const Transaction& tx) {
  ByteWriter w;
  write_fields(w, tx, true);
  return std::move(w).take();
}

Transaction decode_transaction(ByteView data) {
  ByteReader r(data);
  Transaction tx;
  const std::uint64_t kind = r.u64();
  if (kind > static_cast<std::uint64_t>(TxKind::Close)) throw Error(ErrorCode::DecodeError, "unknown transaction kind");
  tx.kind = static_cast<TxKind>(kind);
  tx.election_id = r.string();
  tx.from_pubkey = r.fixed<PublicKey>();
  tx.source = r.fixed<Address>();
  tx.to_address = r.fixed<Address>();
  tx.amount = r.u64();
  tx.timestamp = r.i64();
  tx.nonce = r.u64();
  tx.signature = r.fixed<Signature>();
  if (!r.done()) throw Error(ErrorCode::DecodeError, "trailing bytes after transaction");
  return tx;
}

Digest32 tx_hash(const Transaction& tx) { return hash_bytes(encode(tx)); }

Transaction sign_transaction(Transaction tx, const KeyPair& key) {
  if (key.public_key() != tx.from_pubkey) {
    throw Error(ErrorCode::KeyMismatch, "signing key does not match from_pubkey");
  }
  tx.signature = key.sign(canonical_bytes(tx));
  return tx;
}

bool signature_valid(const Transaction& tx) {
  return verify_signature(tx.from_pubkey, canonical_bytes(tx), tx.signature);
}

}  // namespace votechain
