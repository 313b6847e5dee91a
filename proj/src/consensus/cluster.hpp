// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chain/ledger.hpp"
#include "common/json.hpp"

namespace votechain::consensus {

// Byzantine modes a simulated node can run in.
enum class Behavior {
  Honest,
  SignInvalid,   // proposes blocks containing an invalid tx and signs anything
  Withhold,      // never signs
  Equivocate,    // proposes two different blocks for the same height
  RewriteChain,  // compromised replica whose stored history gets rewritten
};

std::string_view behavior_name(Behavior b);
std::optional<Behavior> parse_behavior(std::string_view name);

// One replica: chain, mempool and the state after applying the mempool.
class Node {
 public:
  Node(std::string id, KeyPair key, Chain chain, Behavior behavior = Behavior::Honest);

  const std::string& id() const { return id_; }
  const KeyPair& key() const { return key_; }
  const Chain& chain() const { return chain_; }
  Chain& mutable_chain() { return chain_; }
  Behavior behavior() const { return behavior_; }
  void set_behavior(Behavior b) { behavior_ = b; }
  bool honest() const { return behavior_ == Behavior::Honest; }

  // Admits tx iff it verifies against the pending state (tip plus every
  // queued transaction), so two pending votes from one key cannot coexist.
  std::optional<RejectReason> offer(const Transaction& tx);
  bool has_tx(const Digest32& id) const { return mempool_ids_.contains(id); }
  const std::vector<Transaction>& mempool() const { return mempool_; }
  const LedgerState& pending_state() const { return pending_; }

  struct Dropped {
    Transaction tx;
    RejectReason reason;
  };

  // Appends a finalized block, removes included txs from the mempool and
  // re-admits the rest against the new tip. Returns the txs that no longer
  // verify.
  std::vector<Dropped> append(const Block& block, SignatureCheck tx_sigs = SignatureCheck::Verify);
  // Replaces the replica with a better, already validated chain.
  std::vector<Dropped> adopt(const Chain& chain);

  // Longest valid prefix of the mempool, capped at max_txs.
  std::vector<Transaction> select_for_block(std::size_t max_txs) const;

  std::optional<Block>& tentative() { return tentative_; }

 private:
  std::vector<Dropped> rebuild_pending();

  std::string id_;
  KeyPair key_;
  Chain chain_;
  Behavior behavior_;
  std::vector<Transaction> mempool_;
  std::set<Digest32> mempool_ids_;
  LedgerState pending_;
  std::optional<Block> tentative_;
};

struct BroadcastResult {
  Digest32 tx_id;
  std::vector<std::string> accepted;
  std::map<std::string, RejectReason> rejected;
};

struct RoundOutcome {
  bool finalized = false;
  std::string proposer;
  std::uint64_t height = 0;
  std::size_t signatures = 0;
  bool equivocation = false;
  std::optional<Block> block;  // the finalized block, or the stalled proposal
};

using EventSink = std::function<void(const Json&)>;

// Longest valid finalized chain wins; equal lengths break toward the
// lexicographically smallest tip hash. Candidates failing validate_chain are
// skipped. Returns the index of the winner or throws Error(NoCanonicalChain).
std::size_t resolve_fork(std::span<const std::vector<Block>> candidates, const ElectionConfig& cfg);

struct ClusterOptions {
  std::size_t max_block_txs = 1000;
};

// In-process network of replicas. Not thread-safe; callers serialize access.
class Cluster {
 public:
  Cluster(const ElectionConfig& cfg, const std::vector<KeyPair>& node_keys, const Chain& initial,
          ClusterOptions options = {}, EventSink sink = {});

  std::size_t size() const { return nodes_.size(); }
  Node& node(std::size_t i) { return nodes_.at(i); }
  const Node& node(std::size_t i) const { return nodes_.at(i); }
  std::optional<std::size_t> index_of(const std::string& node_id) const;
  const ElectionConfig& config() const { return cfg_; }

  void set_time(std::int64_t now) { now_ = now; }
  std::int64_t time() const { return now_; }

  // Groups must cover every node exactly once. Triggers a sync and mempool
  // gossip inside every new group.
  void set_partition(const std::vector<std::vector<std::string>>& groups);
  void heal();
  bool reachable(std::size_t a, std::size_t b) const { return group_of_[a] == group_of_[b]; }

  BroadcastResult broadcast_tx(std::size_t origin, const Transaction& tx);

  // Round-robin proposer: (next network height + failed attempts) mod n.
  std::size_t expected_proposer() const;
  RoundOutcome propose_and_collect();
  RoundOutcome propose_from(std::size_t proposer);

  // Every honest node adopts the best valid chain offered inside its group
  // and drops any unfinalized tentative block.
  void sync();

  // Marks node i compromised and rewrites its stored history: the first vote
  // in its latest vote-bearing block is redirected and every later hash
  // recomputed. Quorum signatures cannot be forged, so the replica no longer
  // validates.
  void compromise(std::size_t i);

  // Ids of replicas whose stored chain fails full validation.
  std::vector<std::string> cross_validate() const;

  // Honest replicas in the same group hold byte-identical chains.
  bool honest_replicas_identical() const;

 private:
  void emit(Json event);
  void sync_group(int group);
  void gossip_group(int group);
  void record_dropped(const Node& node, const std::vector<Node::Dropped>& dropped);
  Block make_invalid_block(const Node& proposer);

  ElectionConfig cfg_;
  ClusterOptions options_;
  EventSink sink_;
  std::vector<Node> nodes_;
  std::vector<int> group_of_;
  std::uint64_t failed_attempts_ = 0;
  std::int64_t now_ = 0;
};

}  // namespace votechain::consensus
