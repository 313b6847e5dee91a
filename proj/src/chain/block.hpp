// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chain/election.hpp"
#include "chain/transaction.hpp"

namespace votechain {

struct QuorumSignature {
  std::string node_id;
  Signature signature;

  friend bool operator==(const QuorumSignature&, const QuorumSignature&) = default;
};

struct Block {
  std::uint64_t index = 0;
  Digest32 prev_hash;
  std::int64_t timestamp = 0;
  Digest32 election_digest;
  std::string proposer_id;
  std::vector<Transaction> transactions;
  std::vector<QuorumSignature> quorum_signatures;  // excluded from block_hash
  Digest32 block_hash;

  friend bool operator==(const Block&, const Block&) = default;
};

// Header then body: index, prev_hash, timestamp, election_digest,
// proposer_id, transactions (each as a length-prefixed full encoding).
Bytes canonical_bytes(const Block& block);
Digest32 compute_block_hash(const Block& block);
// Canonical byte length / 1024, rounded up.
std::uint64_t size_kb(const Block& block);

// Persisted record: canonical bytes, stored block_hash, quorum signatures.
Bytes encode(const Block& block);
Block decode_block(ByteView data);

Signature sign_block(const Block& block, const KeyPair& node_key);

// Number of distinct roster members with a valid signature on block_hash.
std::size_t count_valid_signatures(const Block& block, const NodeRoster& roster);
// Every attached signature comes from a distinct roster member and verifies.
bool all_signatures_valid(const Block& block, const NodeRoster& roster);

Block make_genesis(const ElectionConfig& cfg, std::int64_t timestamp);

}  // namespace votechain
