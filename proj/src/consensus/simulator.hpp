// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chain/transaction.hpp"
#include "common/json.hpp"
#include "consensus/cluster.hpp"

namespace votechain::consensus {

struct PartitionEvent {
  std::int64_t time = 0;  // seconds after the election opens
  std::vector<std::vector<std::string>> groups;
};

// A scheduled transaction. Either `raw` is set, or a vote is generated from
// the seeded voter key `voter` towards candidate index `candidate`
// (-1 selects the abstain address).
struct TxEvent {
  std::int64_t time = 0;
  std::string origin = "node-0";
  std::optional<Transaction> raw;
  std::uint64_t voter = 0;
  int candidate = 0;
};

struct ByzantineNode {
  std::string node_id;
  Behavior behavior = Behavior::SignInvalid;
  std::int64_t at = 0;  // RewriteChain only: when the history is rewritten
};

struct SimScenario {
  std::uint64_t seed = 0;
  std::size_t nodes = 5;
  std::size_t candidates = 3;
  std::size_t voters = 10;        // funded before the first round
  std::int64_t rounds = 20;       // one proposal attempt per round
  std::int64_t block_interval = 1;
  bool settle = true;             // heal and drain the mempools after the last round
  std::vector<PartitionEvent> partition_schedule;
  std::vector<TxEvent> tx_schedule;
  std::vector<ByzantineNode> byzantine_nodes;

  // Throws Error(Config) on unknown nodes, uncovered partitions or
  // decreasing schedule times.
  void validate() const;
};

SimScenario scenario_from_json(const Json& j);
Json scenario_to_json(const SimScenario& s);

struct ReplicaSummary {
  std::string node_id;
  std::string behavior;
  std::size_t length = 0;
  std::string tip_hash;
  bool valid = true;
};

struct SimTrace {
  std::vector<Json> events;
  std::vector<ReplicaSummary> replicas;
  bool honest_identical = false;

  // One JSON object per line, events first, then a final "replicas" line.
  std::string to_jsonl() const;
};

SimTrace run_simulation(const SimScenario& scenario);

// Seeded scenario with random partitions and votes, no byzantine nodes.
SimScenario random_scenario(std::uint64_t seed, std::size_t nodes = 5);

}  // namespace votechain::consensus
