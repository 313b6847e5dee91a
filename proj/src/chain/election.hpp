// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "common/bytes.hpp"

namespace votechain {

struct RosterEntry {
  std::string node_id;
  PublicKey key;

  friend bool operator==(const RosterEntry&, const RosterEntry&) = default;
};

// Ordered validator set. A block is final once strictly more than half of the
// roster has signed it.
struct NodeRoster {
  std::vector<RosterEntry> nodes;

  static std::size_t majority(std::size_t n) { return n / 2 + 1; }
  std::size_t quorum_threshold() const { return majority(nodes.size()); }
  std::optional<std::size_t> index_of(const std::string& node_id) const;

  friend bool operator==(const NodeRoster&, const NodeRoster&) = default;
};

struct Candidate {
  std::string name;
  Address address;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct ElectionConfig {
  std::string election_id;
  std::vector<Candidate> candidates;
  Address abstain_address;
  std::int64_t start_time = 0;  // unix seconds, inclusive
  std::int64_t end_time = 0;    // unix seconds, inclusive
  std::uint64_t token_amount = 1;
  NodeRoster roster;
  std::size_t quorum_threshold = 0;
  PublicKey authority_key;

  // Candidate and abstain addresses derived from the election id and labels.
  static Address candidate_address(const std::string& election_id, const std::string& name);
  static Address abstain_address_for(const std::string& election_id);

  bool is_candidate(const Address& a) const;
  bool accepts_vote_to(const Address& a) const { return is_candidate(a) || a == abstain_address; }
  const Candidate* candidate_by_address(const Address& a) const;

  // Commitment stored in every block header.
  Digest32 digest() const;

  // Throws Error(Config) when ids collide, the window is inverted or the
  // quorum threshold is not a strict majority of the roster.
  void validate() const;

  friend bool operator==(const ElectionConfig&, const ElectionConfig&) = default;
};

}  // namespace votechain
