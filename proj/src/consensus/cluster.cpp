// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "consensus/cluster.hpp"

#include <algorithm>
#include <unordered_map>

namespace votechain::consensus {

namespace {

constexpr std::pair<Behavior, std::string_view> kBehaviorNames[] = {
    {Behavior::Honest, "Honest"},         {Behavior::SignInvalid, "SignInvalid"},
    {Behavior::Withhold, "Withhold"},     {Behavior::Equivocate, "Equivocate"},
    {Behavior::RewriteChain, "RewriteChain"},
};

bool tip_better(const Chain& a, const Chain& b) {
  if (a.length() != b.length()) return a.length() > b.length();
  return a.tip().block_hash < b.tip().block_hash;
}

}  // namespace

std::string_view behavior_name(Behavior b) {
  for (const auto& [v, name] : kBehaviorNames) {
    if (v == b) return name;
  }
  return "Unknown";
}

std::optional<Behavior> parse_behavior(std::string_view name) {
  for (const auto& [v, n] : kBehaviorNames) {
    if (n == name) return v;
  }
  return std::nullopt;
}

// ---- Node ----

Node::Node(std::string id, KeyPair key, Chain chain, Behavior behavior)
    : id_(std::move(id)), key_(std::move(key)), chain_(std::move(chain)), behavior_(behavior),
      pending_(chain_.state()) {}

std::optional<RejectReason> Node::offer(const Transaction& tx) {
  const Digest32 id = tx_hash(tx);
  if (mempool_ids_.contains(id)) return std::nullopt;
  if (auto reason = verify_transaction(tx, pending_, chain_.config())) return reason;
  mempool_.push_back(tx);
  mempool_ids_.insert(id);
  pending_.apply(tx);
  return std::nullopt;
}

std::vector<Node::Dropped> Node::rebuild_pending() {
  std::vector<Dropped> dropped;
  std::vector<Transaction> kept;
  pending_ = chain_.state();
  mempool_ids_.clear();
  for (auto& tx : mempool_) {
    // Signatures were checked on admission.
    if (auto reason = verify_transaction(tx, pending_, chain_.config(), SignatureCheck::Skip)) {
      dropped.push_back({std::move(tx), *reason});
      continue;
    }
    pending_.apply(tx);
    mempool_ids_.insert(tx_hash(tx));
    kept.push_back(std::move(tx));
  }
  mempool_ = std::move(kept);
  return dropped;
}

std::vector<Node::Dropped> Node::append(const Block& block, SignatureCheck tx_sigs) {
  chain_.append(block, tx_sigs);
  std::set<Digest32> included;
  for (const auto& tx : block.transactions) included.insert(tx_hash(tx));
  std::erase_if(mempool_, [&](const Transaction& tx) { return included.contains(tx_hash(tx)); });
  tentative_.reset();
  return rebuild_pending();
}

std::vector<Node::Dropped> Node::adopt(const Chain& chain) {
  chain_ = chain;
  std::set<Digest32> included;
  for (const auto& b : chain_.blocks()) {
    for (const auto& tx : b.transactions) included.insert(tx_hash(tx));
  }
  std::erase_if(mempool_, [&](const Transaction& tx) { return included.contains(tx_hash(tx)); });
  return rebuild_pending();
}

std::vector<Transaction> Node::select_for_block(std::size_t max_txs) const {
  const std::size_t n = std::min(max_txs, mempool_.size());
  return {mempool_.begin(), mempool_.begin() + static_cast<std::ptrdiff_t>(n)};
}

// ---- fork choice ----

std::size_t resolve_fork(std::span<const std::vector<Block>> candidates, const ElectionConfig& cfg) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    if (c.empty() || !validate_chain(c, cfg).valid) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto& b = candidates[*best];
    if (c.size() > b.size() || (c.size() == b.size() && c.back().block_hash < b.back().block_hash)) best = i;
  }
  if (!best) throw Error(ErrorCode::NoCanonicalChain, "no candidate chain validates");
  return *best;
}

// ---- Cluster ----

Cluster::Cluster(const ElectionConfig& cfg, const std::vector<KeyPair>& node_keys, const Chain& initial,
                 ClusterOptions options, EventSink sink)
    : cfg_(cfg), options_(options), sink_(std::move(sink)) {
  if (node_keys.size() != cfg_.roster.nodes.size()) {
    throw Error(ErrorCode::InvalidArgument, "one key per roster entry required");
  }
  for (std::size_t i = 0; i < node_keys.size(); ++i) {
    if (node_keys[i].public_key() != cfg_.roster.nodes[i].key) {
      throw Error(ErrorCode::KeyMismatch, cfg_.roster.nodes[i].node_id);
    }
    nodes_.emplace_back(cfg_.roster.nodes[i].node_id, node_keys[i], initial);
  }
  group_of_.assign(nodes_.size(), 0);
}

std::optional<std::size_t> Cluster::index_of(const std::string& node_id) const {
  return cfg_.roster.index_of(node_id);
}

void Cluster::emit(Json event) {
  if (!sink_) return;
  Json out;
  out["t"] = now_;
  for (auto& [k, v] : event.items()) out[k] = std::move(v);
  sink_(out);
}

void Cluster::set_partition(const std::vector<std::vector<std::string>>& groups) {
  std::vector<int> assignment(nodes_.size(), -1);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (const auto& id : groups[g]) {
      const auto i = index_of(id);
      if (!i) throw Error(ErrorCode::InvalidArgument, "unknown node " + id);
      if (assignment[*i] != -1) throw Error(ErrorCode::InvalidArgument, "node in two groups: " + id);
      assignment[*i] = static_cast<int>(g);
    }
  }
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == -1) throw Error(ErrorCode::InvalidArgument, "partition misses " + nodes_[i].id());
  }
  group_of_ = std::move(assignment);
  Json ev{{"event", groups.size() == 1 ? "heal" : "partition"}, {"groups", groups}};
  emit(std::move(ev));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    sync_group(static_cast<int>(g));
    gossip_group(static_cast<int>(g));
  }
}

void Cluster::heal() {
  std::vector<std::string> all;
  for (const auto& n : nodes_) all.push_back(n.id());
  set_partition({all});
}

void Cluster::record_dropped(const Node& node, const std::vector<Node::Dropped>& dropped) {
  for (const auto& d : dropped) {
    emit({{"event", "tx_dropped"},
          {"node", node.id()},
          {"tx", tx_hash(d.tx).hex()},
          {"reason", reject_reason_name(d.reason)}});
  }
}

BroadcastResult Cluster::broadcast_tx(std::size_t origin, const Transaction& tx) {
  BroadcastResult result;
  result.tx_id = tx_hash(tx);
  Json rejected = Json::object();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!reachable(origin, i)) continue;
    if (auto reason = nodes_[i].offer(tx)) {
      result.rejected.emplace(nodes_[i].id(), *reason);
      rejected[nodes_[i].id()] = reject_reason_name(*reason);
    } else {
      result.accepted.push_back(nodes_[i].id());
    }
  }
  emit({{"event", "broadcast"},
        {"origin", nodes_.at(origin).id()},
        {"tx", result.tx_id.hex()},
        {"kind", tx_kind_name(tx.kind)},
        {"accepted", result.accepted},
        {"rejected", rejected}});
  return result;
}

std::size_t Cluster::expected_proposer() const {
  std::size_t longest = 0;
  for (const auto& n : nodes_) longest = std::max(longest, n.chain().length());
  return static_cast<std::size_t>((longest + failed_attempts_) % nodes_.size());
}

RoundOutcome Cluster::propose_and_collect() { return propose_from(expected_proposer()); }

Block Cluster::make_invalid_block(const Node& proposer) {
  const auto txs = proposer.select_for_block(options_.max_block_txs);
  Block b = build_block(proposer.chain().tip(), proposer.chain().state(), txs, proposer.id(), now_, cfg_);
  // A mint signed by a node key instead of the authority key.
  Transaction bogus;
  bogus.kind = TxKind::Mint;
  bogus.election_id = cfg_.election_id;
  bogus.from_pubkey = proposer.key().public_key();
  bogus.to_address = label_address("forged", cfg_.election_id, proposer.id() + "/" + std::to_string(b.index));
  bogus.amount = cfg_.token_amount;
  bogus.timestamp = b.timestamp;
  bogus.nonce = proposer.chain().state().nonce(derive_address(proposer.key().public_key()));
  sign_transaction(bogus, proposer.key());
  b.transactions.push_back(bogus);
  b.block_hash = compute_block_hash(b);
  return b;
}

RoundOutcome Cluster::propose_from(std::size_t p) {
  Node& proposer = nodes_.at(p);
  RoundOutcome out;
  out.proposer = proposer.id();
  out.height = proposer.chain().length();

  std::vector<Block> versions;
  if (proposer.behavior() == Behavior::SignInvalid) {
    versions.push_back(make_invalid_block(proposer));
  } else {
    const auto txs = proposer.select_for_block(options_.max_block_txs);
    versions.push_back(build_block(proposer.chain().tip(), proposer.chain().state(), txs, proposer.id(), now_, cfg_));
    if (proposer.behavior() == Behavior::Equivocate) {
      Block alt = versions.front();
      alt.timestamp += 1;
      alt.block_hash = compute_block_hash(alt);
      versions.push_back(std::move(alt));
    }
  }

  // Delivery: the proposer keeps version 0; an equivocator alternates the
  // versions across its other reachable peers.
  std::vector<std::size_t> peers;
  std::vector<std::size_t> received(nodes_.size(), 0);
  std::size_t turn = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!reachable(p, i)) continue;
    peers.push_back(i);
    if (i != p) received[i] = (turn++) % versions.size();
  }

  // Echo: honest peers exchange the hash they received.
  std::set<std::size_t> seen_by_honest;
  for (std::size_t i : peers) {
    if (nodes_[i].honest()) seen_by_honest.insert(received[i]);
  }
  out.equivocation = seen_by_honest.size() > 1;
  if (out.equivocation) {
    emit({{"event", "equivocation"}, {"proposer", proposer.id()}, {"height", out.height}});
  }

  std::vector<std::size_t> honest_validated;
  for (std::size_t i : peers) {
    Node& n = nodes_[i];
    Block& b = versions[received[i]];
    bool sign = false;
    switch (n.behavior()) {
      case Behavior::Honest:
        sign = !out.equivocation && !n.chain().check_successor(b, QuorumCheck::Skip);
        if (sign) honest_validated.push_back(i);
        break;
      case Behavior::Withhold:
        break;
      case Behavior::SignInvalid:
      case Behavior::Equivocate:
      case Behavior::RewriteChain:
        sign = true;
        break;
    }
    if (sign) b.quorum_signatures.push_back({n.id(), sign_block(b, n.key())});
  }
  // An equivocating proposer signs every version it produced.
  if (proposer.behavior() == Behavior::Equivocate) {
    for (std::size_t v = 1; v < versions.size(); ++v) {
      versions[v].quorum_signatures.push_back({proposer.id(), sign_block(versions[v], proposer.key())});
    }
  }

  const std::size_t threshold = cfg_.quorum_threshold;
  std::optional<std::size_t> winner;
  for (std::size_t v = 0; v < versions.size(); ++v) {
    const std::size_t count = count_valid_signatures(versions[v], cfg_.roster);
    out.signatures = std::max(out.signatures, count);
    if (!winner && count >= threshold) winner = v;
  }

  if (!winner) {
    ++failed_attempts_;
    out.block = versions.front();
    for (std::size_t i : peers) {
      if (i == p || std::find(honest_validated.begin(), honest_validated.end(), i) != honest_validated.end()) {
        nodes_[i].tentative() = versions[received[i]];
      }
    }
    emit({{"event", "stalled"},
          {"proposer", proposer.id()},
          {"height", out.height},
          {"signatures", out.signatures},
          {"threshold", threshold}});
    return out;
  }

  const Block& final_block = versions[*winner];
  failed_attempts_ = 0;
  out.finalized = true;
  out.block = final_block;
  for (std::size_t i : peers) {
    Node& n = nodes_[i];
    const bool verified = std::find(honest_validated.begin(), honest_validated.end(), i) != honest_validated.end() &&
                          received[i] == *winner;
    try {
      record_dropped(n, n.append(final_block, verified ? SignatureCheck::Skip : SignatureCheck::Verify));
    } catch (const Error& e) {
      // Honest replicas never accept a block that fails their own checks.
      emit({{"event", "append_refused"}, {"node", n.id()}, {"height", out.height}, {"error", e.what()}});
    }
  }
  Json signers = Json::array();
  for (const auto& s : final_block.quorum_signatures) signers.push_back(s.node_id);
  emit({{"event", "finalized"},
        {"proposer", proposer.id()},
        {"height", out.height},
        {"block_hash", final_block.block_hash.hex()},
        {"txs", final_block.transactions.size()},
        {"signatures", out.signatures},
        {"signers", signers}});
  return out;
}

void Cluster::sync() {
  std::set<int> groups(group_of_.begin(), group_of_.end());
  for (int g : groups) sync_group(g);
}

void Cluster::sync_group(int group) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (group_of_[i] == group) members.push_back(i);
  }

  // Candidates ordered best first by the fork rule; the first one that
  // validates is canonical for the group.
  std::vector<std::size_t> order = members;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return tip_better(nodes_[a].chain(), nodes_[b].chain()); });

  std::optional<Chain> canonical;
  std::unordered_map<std::string, bool> verdicts;
  for (std::size_t c : order) {
    const Chain& cand = nodes_[c].chain();
    const std::string key = cand.tip().block_hash.hex() + "/" + std::to_string(cand.length());
    if (auto it = verdicts.find(key); it != verdicts.end() && !it->second) continue;

    // Extend an honest replica that is a prefix of the candidate; otherwise
    // replay the candidate from genesis.
    std::optional<Chain> built;
    for (std::size_t h : members) {
      const Chain& base = nodes_[h].chain();
      if (!nodes_[h].honest() || base.length() > cand.length()) continue;
      if (base.tip().block_hash != cand.blocks()[base.length() - 1].block_hash) continue;
      if (!std::equal(base.blocks().begin(), base.blocks().end(), cand.blocks().begin(),
                      [](const Block& x, const Block& y) { return x.block_hash == y.block_hash; })) {
        continue;
      }
      Chain extended = base;
      try {
        for (std::size_t k = base.length(); k < cand.length(); ++k) extended.append(cand.blocks()[k]);
        built = std::move(extended);
      } catch (const Error&) {
      }
      break;
    }
    if (!built) {
      try {
        built = Chain::from_blocks(cfg_, cand.blocks());
      } catch (const Error&) {
      }
    }
    verdicts[key] = built.has_value();
    if (built) {
      canonical = std::move(built);
      break;
    }
  }
  if (!canonical) return;

  for (std::size_t i : members) {
    Node& n = nodes_[i];
    if (!n.honest()) continue;
    if (auto& t = n.tentative()) {
      const bool kept = t->index < canonical->length() && canonical->blocks()[t->index].block_hash == t->block_hash;
      if (!kept) {
        emit({{"event", "fork_discarded"},
              {"node", n.id()},
              {"height", t->index},
              {"block_hash", t->block_hash.hex()}});
      }
      t.reset();
    }
    if (n.chain().length() == canonical->length() && n.chain().tip().block_hash == canonical->tip().block_hash) {
      continue;
    }
    const std::size_t before = n.chain().length();
    record_dropped(n, n.adopt(*canonical));
    emit({{"event", "sync_adopted"},
          {"node", n.id()},
          {"from_length", before},
          {"to_length", canonical->length()},
          {"tip", canonical->tip().block_hash.hex()}});
  }
}

void Cluster::gossip_group(int group) {
  std::vector<Transaction> pool;
  std::set<Digest32> ids;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (group_of_[i] != group) continue;
    for (const auto& tx : nodes_[i].mempool()) {
      if (ids.insert(tx_hash(tx)).second) pool.push_back(tx);
    }
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (group_of_[i] != group) continue;
    for (const auto& tx : pool) {
      if (!nodes_[i].has_tx(tx_hash(tx))) nodes_[i].offer(tx);
    }
  }
}

void Cluster::compromise(std::size_t i) {
  Node& n = nodes_.at(i);
  n.set_behavior(Behavior::RewriteChain);
  auto& blocks = n.mutable_chain().mutable_blocks_for_tamper();
  std::size_t target = blocks.size() - 1;
  bool redirected = false;
  for (std::size_t k = blocks.size(); k-- > 1;) {
    auto& txs = blocks[k].transactions;
    auto it = std::find_if(txs.begin(), txs.end(), [](const Transaction& t) { return t.kind == TxKind::Vote; });
    if (it == txs.end()) continue;
    const Address original = it->to_address;
    for (const auto& c : cfg_.candidates) {
      if (c.address != original) {
        it->to_address = c.address;
        break;
      }
    }
    target = k;
    redirected = true;
    break;
  }
  if (!redirected) blocks[target].timestamp += 1;
  for (std::size_t k = target; k < blocks.size(); ++k) {
    if (k > target) blocks[k].prev_hash = blocks[k - 1].block_hash;
    blocks[k].block_hash = compute_block_hash(blocks[k]);
  }
  emit({{"event", "compromised"}, {"node", n.id()}, {"rewritten_from", target}});
}

std::vector<std::string> Cluster::cross_validate() const {
  std::vector<std::string> bad;
  for (const auto& n : nodes_) {
    if (!validate_chain(n.chain().blocks(), cfg_).valid) bad.push_back(n.id());
  }
  return bad;
}

bool Cluster::honest_replicas_identical() const {
  std::map<int, const Node*> reference;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].honest()) continue;
    auto [it, inserted] = reference.emplace(group_of_[i], &nodes_[i]);
    if (!inserted && it->second->chain().blocks() != nodes_[i].chain().blocks()) return false;
  }
  return true;
}

}  // namespace votechain::consensus
