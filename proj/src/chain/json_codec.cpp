// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "chain/json_codec.hpp"

#include "common/error.hpp"

namespace votechain {

Json transaction_to_json(const Transaction& tx) {
  Json j;
  j["kind"] = tx_kind_name(tx.kind);
  j["election_id"] = tx.election_id;
  j["from_pubkey"] = tx.from_pubkey.hex();
  j["source"] = tx.source.hex();
  j["to_address"] = tx.to_address.hex();
  j["amount"] = tx.amount;
  j["timestamp"] = tx.timestamp;
  j["nonce"] = tx.nonce;
  j["signature"] = tx.signature.hex();
  return j;
}

Transaction transaction_from_json(const Json& j) {
  Transaction tx;
  const auto kind = parse_tx_kind(require_string(j, "kind"));
  if (!kind) throw Error(ErrorCode::InvalidArgument, "kind");
  tx.kind = *kind;
  tx.election_id = require_string(j, "election_id");
  tx.from_pubkey = PublicKey::from_hex(require_string(j, "from_pubkey"));
  tx.source = j.contains("source") ? Address::from_hex(require_string(j, "source")) : Address{};
  tx.to_address = Address::from_hex(require_string(j, "to_address"));
  const std::int64_t amount = require_int(j, "amount");
  const std::int64_t nonce = require_int(j, "nonce");
  if (amount < 0 || nonce < 0) throw Error(ErrorCode::InvalidArgument, "amount and nonce are non-negative");
  tx.amount = static_cast<std::uint64_t>(amount);
  tx.nonce = static_cast<std::uint64_t>(nonce);
  tx.timestamp = require_int(j, "timestamp");
  tx.signature = Signature::from_hex(require_string(j, "signature"));
  return tx;
}

Json election_to_json(const ElectionConfig& cfg) {
  Json j;
  j["election_id"] = cfg.election_id;
  Json cands = Json::array();
  for (const auto& c : cfg.candidates) cands.push_back({{"name", c.name}, {"address", c.address.hex()}});
  j["candidates"] = std::move(cands);
  j["abstain_address"] = cfg.abstain_address.hex();
  j["start_time"] = cfg.start_time;
  j["end_time"] = cfg.end_time;
  j["token_amount"] = cfg.token_amount;
  Json nodes = Json::array();
  for (const auto& n : cfg.roster.nodes) nodes.push_back({{"node_id", n.node_id}, {"public_key", n.key.hex()}});
  j["roster"] = std::move(nodes);
  j["quorum_threshold"] = cfg.quorum_threshold;
  j["authority_key"] = cfg.authority_key.hex();
  return j;
}

ElectionConfig election_from_json(const Json& j) {
  ElectionConfig cfg;
  cfg.election_id = require_string(j, "election_id");
  for (const auto& c : require(j, "candidates")) {
    cfg.candidates.push_back({require_string(c, "name"), Address::from_hex(require_string(c, "address"))});
  }
  cfg.abstain_address = Address::from_hex(require_string(j, "abstain_address"));
  cfg.start_time = require_int(j, "start_time");
  cfg.end_time = require_int(j, "end_time");
  cfg.token_amount = static_cast<std::uint64_t>(require_int(j, "token_amount"));
  for (const auto& n : require(j, "roster")) {
    cfg.roster.nodes.push_back({require_string(n, "node_id"), PublicKey::from_hex(require_string(n, "public_key"))});
  }
  cfg.quorum_threshold = static_cast<std::size_t>(require_int(j, "quorum_threshold"));
  cfg.authority_key = PublicKey::from_hex(require_string(j, "authority_key"));
  cfg.validate();
  return cfg;
}

Json block_to_json(const Block& block) {
  Json j;
  j["index"] = block.index;
  j["block_hash"] = block.block_hash.hex();
  j["previous_hash"] = block.prev_hash.hex();
  j["timestamp"] = block.timestamp;
  j["size_kb"] = size_kb(block);
  j["proposer_id"] = block.proposer_id;
  j["election_digest"] = block.election_digest.hex();
  Json txs = Json::array();
  for (const auto& tx : block.transactions) {
    Json t = transaction_to_json(tx);
    t["tx_hash"] = tx_hash(tx).hex();
    txs.push_back(std::move(t));
  }
  j["transactions"] = std::move(txs);
  Json signers = Json::array();
  for (const auto& s : block.quorum_signatures) signers.push_back(s.node_id);
  j["signers"] = std::move(signers);
  return j;
}

}  // namespace votechain
