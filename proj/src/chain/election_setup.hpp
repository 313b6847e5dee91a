// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chain/crypto.hpp"
#include "chain/election.hpp"
#include "chain/transaction.hpp"

namespace votechain {

struct ElectionSpec {
  std::string election_id = "election";
  std::vector<std::string> candidates;
  std::int64_t start_time = 0;
  std::int64_t end_time = 0;
  std::uint64_t token_amount = 1;
  std::size_t nodes = 5;
};

struct ElectionKeys {
  KeyPair authority;
  std::vector<KeyPair> nodes;  // roster order
};

struct SeededElection {
  ElectionConfig cfg;
  ElectionKeys keys;
};

std::string node_id_for(std::size_t index);

// Keys derive from the seed, so the same spec and seed always produce the
// same config digest.
SeededElection make_election(const ElectionSpec& spec, std::uint64_t seed);
// Same layout with caller-supplied keys, one per roster node.
SeededElection make_election(const ElectionSpec& spec, ElectionKeys keys);

// Deterministic voter key used by simulations and seeded elections.
KeyPair seeded_voter_key(std::uint64_t seed, std::uint64_t index);

Transaction make_mint(const ElectionConfig& cfg, const KeyPair& authority, const Address& to, std::uint64_t nonce,
                      std::int64_t timestamp);
Transaction make_vote(const ElectionConfig& cfg, const KeyPair& voter, const Address& to, std::uint64_t nonce,
                      std::int64_t timestamp);
Transaction make_sweep(const ElectionConfig& cfg, const KeyPair& authority, const Address& source,
                       std::uint64_t amount, std::uint64_t nonce, std::int64_t timestamp);
Transaction make_close(const ElectionConfig& cfg, const KeyPair& authority, std::uint64_t nonce,
                       std::int64_t timestamp);

}  // namespace votechain
