// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "chain/election_setup.hpp"

#include "common/error.hpp"

namespace votechain {

std::string node_id_for(std::size_t index) { return "node-" + std::to_string(index); }

SeededElection make_election(const ElectionSpec& spec, std::uint64_t seed) {
  ElectionKeys keys{KeyPair::derive("authority", seed, 0), {}};
  for (std::size_t i = 0; i < spec.nodes; ++i) keys.nodes.push_back(KeyPair::derive("node", seed, i));
  return make_election(spec, std::move(keys));
}

SeededElection make_election(const ElectionSpec& spec, ElectionKeys keys) {
  if (keys.nodes.size() != spec.nodes) throw Error(ErrorCode::Config, "one key per roster node required");
  SeededElection out{ElectionConfig{}, std::move(keys)};
  ElectionConfig& cfg = out.cfg;
  cfg.election_id = spec.election_id;
  for (const auto& name : spec.candidates) {
    cfg.candidates.push_back({name, ElectionConfig::candidate_address(spec.election_id, name)});
  }
  cfg.abstain_address = ElectionConfig::abstain_address_for(spec.election_id);
  cfg.start_time = spec.start_time;
  cfg.end_time = spec.end_time;
  cfg.token_amount = spec.token_amount;
  for (std::size_t i = 0; i < spec.nodes; ++i) {
    cfg.roster.nodes.push_back({node_id_for(i), out.keys.nodes[i].public_key()});
  }
  cfg.quorum_threshold = cfg.roster.quorum_threshold();
  cfg.authority_key = out.keys.authority.public_key();
  cfg.validate();
  return out;
}

KeyPair seeded_voter_key(std::uint64_t seed, std::uint64_t index) { return KeyPair::derive("voter", seed, index); }

namespace {
Transaction system_tx(const ElectionConfig& cfg, const KeyPair& authority, TxKind kind, std::uint64_t nonce,
                      std::int64_t timestamp) {
  Transaction tx;
  tx.kind = kind;
  tx.election_id = cfg.election_id;
  tx.from_pubkey = authority.public_key();
  tx.nonce = nonce;
  tx.timestamp = timestamp;
  return tx;
}
}  // namespace

Transaction make_mint(const ElectionConfig& cfg, const KeyPair& authority, const Address& to, std::uint64_t nonce,
                      std::int64_t timestamp) {
  Transaction tx = system_tx(cfg, authority, TxKind::Mint, nonce, timestamp);
  tx.to_address = to;
  tx.amount = cfg.token_amount;
  return sign_transaction(std::move(tx), authority);
}

Transaction make_vote(const ElectionConfig& cfg, const KeyPair& voter, const Address& to, std::uint64_t nonce,
                      std::int64_t timestamp) {
  Transaction tx;
  tx.kind = TxKind::Vote;
  tx.election_id = cfg.election_id;
  tx.from_pubkey = voter.public_key();
  tx.to_address = to;
  tx.amount = cfg.token_amount;
  tx.timestamp = timestamp;
  tx.nonce = nonce;
  return sign_transaction(std::move(tx), voter);
}

Transaction make_sweep(const ElectionConfig& cfg, const KeyPair& authority, const Address& source,
                       std::uint64_t amount, std::uint64_t nonce, std::int64_t timestamp) {
  Transaction tx = system_tx(cfg, authority, TxKind::Sweep, nonce, timestamp);
  tx.source = source;
  tx.to_address = cfg.abstain_address;
  tx.amount = amount;
  return sign_transaction(std::move(tx), authority);
}

Transaction make_close(const ElectionConfig& cfg, const KeyPair& authority, std::uint64_t nonce,
                       std::int64_t timestamp) {
  Transaction tx = system_tx(cfg, authority, TxKind::Close, nonce, timestamp);
  tx.to_address = cfg.abstain_address;
  return sign_transaction(std::move(tx), authority);
}

}  // namespace votechain
