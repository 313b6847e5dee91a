// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "chain/election.hpp"

#include <set>

#include "chain/crypto.hpp"
#include "chain/encoding.hpp"
#include "common/error.hpp"

namespace votechain {

std::optional<std::size_t> NodeRoster::index_of(const std::string& node_id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].node_id == node_id) return i;
  }
  return std::nullopt;
}

Address ElectionConfig::candidate_address(const std::string& election_id, const std::string& name) {
  return label_address("candidate", election_id, name);
}

Address ElectionConfig::abstain_address_for(const std::string& election_id) {
  return label_address("abstain", election_id, "go-without-record");
}

bool ElectionConfig::is_candidate(const Address& a) const { return candidate_by_address(a) != nullptr; }

const Candidate* ElectionConfig::candidate_by_address(const Address& a) const {
  for (const auto& c : candidates) {
    if (c.address == a) return &c;
  }
  return nullptr;
}

Digest32 ElectionConfig::digest() const {
  ByteWriter w;
  w.string(election_id);
  w.count(candidates.size());
  for (const auto& c : candidates) {
    w.string(c.name);
    w.fixed(c.address);
  }
  w.fixed(abstain_address);
  w.i64(start_time);
  w.i64(end_time);
  w.u64(token_amount);
  w.count(roster.nodes.size());
  for (const auto& n : roster.nodes) {
    w.string(n.node_id);
    w.fixed(n.key);
  }
  w.u64(quorum_threshold);
  w.fixed(authority_key);
  return hash_bytes(w.data());
}

void ElectionConfig::validate() const {
  if (election_id.empty()) throw Error(ErrorCode::Config, "election_id is empty");
  if (end_time < start_time) throw Error(ErrorCode::Config, "voting window ends before it starts");
  if (token_amount == 0) throw Error(ErrorCode::Config, "token_amount must be at least 1");
  if (roster.nodes.empty()) throw Error(ErrorCode::Config, "node roster is empty");
  std::set<std::string> ids;
  for (const auto& n : roster.nodes) {
    if (!ids.insert(n.node_id).second) throw Error(ErrorCode::Config, "duplicate node id " + n.node_id);
  }
  const std::size_t n = roster.nodes.size();
  if (quorum_threshold * 2 <= n || quorum_threshold > n) {
    throw Error(ErrorCode::Config, "quorum threshold must be a strict majority of the roster");
  }
  std::set<Address> addrs{abstain_address};
  std::set<std::string> names;
  for (const auto& c : candidates) {
    if (!names.insert(c.name).second) throw Error(ErrorCode::Config, "duplicate candidate " + c.name);
    if (!addrs.insert(c.address).second) throw Error(ErrorCode::Config, "candidate address collides");
  }
  if (addrs.contains(derive_address(authority_key))) {
    throw Error(ErrorCode::Config, "authority address collides with a ballot address");
  }
}

}  // namespace votechain
