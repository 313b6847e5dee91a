// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "chain/block.hpp"

#include <set>

#include "chain/encoding.hpp"
#include "common/error.hpp"

namespace votechain {

namespace {
void write_canonical(ByteWriter& w, const Block& b) {
  w.u64(b.index);
  w.fixed(b.prev_hash);
  w.i64(b.timestamp);
  w.fixed(b.election_digest);
  w.string(b.proposer_id);
  w.count(b.transactions.size());
  for (const auto& tx : b.transactions) w.bytes(encode(tx));
}
}  // namespace

Bytes canonical_bytes(const Block& block) {
  ByteWriter w;
  write_canonical(w, block);
  return std::move(w).take();
}

Digest32 compute_block_hash(const Block& block) { return hash_bytes(canonical_bytes(block)); }

std::uint64_t size_kb(const Block& block) { return (canonical_bytes(block).size() + 1023) / 1024; }

Bytes encode(const Block& block) {
  ByteWriter w;
  write_canonical(w, block);
  w.fixed(block.block_hash);
  w.count(block.quorum_signatures.size());
  for (const auto& s : block.quorum_signatures) {
    w.string(s.node_id);
    w.fixed(s.signature);
  }
  return std::move(w).take();
}

Block decode_block(ByteView data) {
  ByteReader r(data);
  Block b;
  b.index = r.u64();
  b.prev_hash = r.fixed<Digest32>();
  b.timestamp = r.i64();
  b.election_digest = r.fixed<Digest32>();
  b.proposer_id = r.string();
  const std::size_t ntx = r.count();
  if (ntx > r.remaining()) throw Error(ErrorCode::DecodeError, "transaction count exceeds record");
  b.transactions.reserve(ntx);
  for (std::size_t i = 0; i < ntx; ++i) b.transactions.push_back(decode_transaction(r.bytes()));
  b.block_hash = r.fixed<Digest32>();
  const std::size_t nsig = r.count();
  if (nsig > r.remaining()) throw Error(ErrorCode::DecodeError, "signature count exceeds record");
  for (std::size_t i = 0; i < nsig; ++i) {
    QuorumSignature s;
    s.node_id = r.string();
    s.signature = r.fixed<Signature>();
    b.quorum_signatures.push_back(std::move(s));
  }
  if (!r.done()) throw Error(ErrorCode::DecodeError, "trailing bytes after block");
  return b;
}

Signature sign_block(const Block& block, const KeyPair& node_key) { return node_key.sign(block.block_hash.view()); }

std::size_t count_valid_signatures(const Block& block, const NodeRoster& roster) {
  std::set<std::string> seen;
  for (const auto& s : block.quorum_signatures) {
    const auto idx = roster.index_of(s.node_id);
    if (!idx || seen.contains(s.node_id)) continue;
    if (verify_signature(roster.nodes[*idx].key, block.block_hash.view(), s.signature)) seen.insert(s.node_id);
  }
  return seen.size();
}

bool all_signatures_valid(const Block& block, const NodeRoster& roster) {
  std::set<std::string> seen;
  for (const auto& s : block.quorum_signatures) {
    const auto idx = roster.index_of(s.node_id);
    if (!idx || !seen.insert(s.node_id).second) return false;
    if (!verify_signature(roster.nodes[*idx].key, block.block_hash.view(), s.signature)) return false;
  }
  return true;
}

Block make_genesis(const ElectionConfig& cfg, std::int64_t timestamp) {
  Block g;
  g.index = 0;
  g.timestamp = timestamp;
  g.election_digest = cfg.digest();
  g.proposer_id = "genesis";
  g.block_hash = compute_block_hash(g);
  return g;
}

}  // namespace votechain
