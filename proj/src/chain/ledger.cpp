// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "chain/ledger.hpp"

#include <algorithm>

namespace votechain {

std::string_view reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::BadSignature: return "BadSignature";
    case RejectReason::OutsideWindow: return "OutsideWindow";
    case RejectReason::InsufficientBalance: return "InsufficientBalance";
    case RejectReason::BadNonce: return "BadNonce";
    case RejectReason::UnknownRecipient: return "UnknownRecipient";
    case RejectReason::DoubleVote: return "DoubleVote";
    case RejectReason::Malformed: return "MalformedTransaction";
    case RejectReason::DuplicateMint: return "DuplicateMint";
  }
  return "MalformedTransaction";
}

std::optional<RejectReason> parse_reject_reason(std::string_view name) {
  for (auto r : {RejectReason::BadSignature, RejectReason::OutsideWindow, RejectReason::InsufficientBalance,
                 RejectReason::BadNonce, RejectReason::UnknownRecipient, RejectReason::DoubleVote,
                 RejectReason::Malformed, RejectReason::DuplicateMint}) {
    if (reject_reason_name(r) == name) return r;
  }
  return std::nullopt;
}

ErrorCode to_error_code(RejectReason reason) {
  switch (reason) {
    case RejectReason::BadSignature: return ErrorCode::BadSignature;
    case RejectReason::OutsideWindow: return ErrorCode::OutsideWindow;
    case RejectReason::InsufficientBalance: return ErrorCode::InsufficientBalance;
    case RejectReason::BadNonce: return ErrorCode::BadNonce;
    case RejectReason::UnknownRecipient: return ErrorCode::UnknownRecipient;
    case RejectReason::DoubleVote: return ErrorCode::DoubleVote;
    case RejectReason::Malformed: return ErrorCode::MalformedTransaction;
    case RejectReason::DuplicateMint: return ErrorCode::DuplicateMint;
  }
  return ErrorCode::MalformedTransaction;
}

std::string_view chain_fault_name(ChainFault fault) {
  switch (fault) {
    case ChainFault::Malformed: return "Malformed";
    case ChainFault::BadGenesis: return "BadGenesis";
    case ChainFault::BadIndex: return "BadIndex";
    case ChainFault::NonLinking: return "NonLinking";
    case ChainFault::BadTimestamp: return "BadTimestamp";
    case ChainFault::WrongElection: return "WrongElection";
    case ChainFault::BadHash: return "BadHash";
    case ChainFault::BadQuorum: return "BadQuorum";
    case ChainFault::InvalidTx: return "InvalidTx";
  }
  return "Malformed";
}

std::uint64_t LedgerState::balance(const Address& a) const {
  const auto it = balances.find(a);
  return it == balances.end() ? 0 : it->second;
}

std::uint64_t LedgerState::nonce(const Address& a) const {
  const auto it = next_nonce.find(a);
  return it == next_nonce.end() ? 0 : it->second;
}

std::uint64_t LedgerState::sum_balances() const {
  std::uint64_t sum = 0;
  for (const auto& [_, v] : balances) sum += v;
  return sum;
}

void LedgerState::apply(const Transaction& tx) {
  const Address signer = derive_address(tx.from_pubkey);
  ++next_nonce[signer];
  switch (tx.kind) {
    case TxKind::Vote:
      balances[signer] -= tx.amount;
      balances[tx.to_address] += tx.amount;
      spent_keys.insert(tx.from_pubkey);
      break;
    case TxKind::Mint:
      balances[tx.to_address] += tx.amount;
      total_minted += tx.amount;
      minted_addresses.insert(tx.to_address);
      break;
    case TxKind::Sweep:
      balances[tx.source] -= tx.amount;
      balances[tx.to_address] += tx.amount;
      break;
    case TxKind::Close:
      closed = true;
      break;
  }
}

std::optional<RejectReason> verify_transaction(const Transaction& tx, const LedgerState& state,
                                               const ElectionConfig& cfg, SignatureCheck sig_check) {
  if (tx.election_id != cfg.election_id) return RejectReason::Malformed;

  const bool by_authority = tx.from_pubkey == cfg.authority_key;
  if (tx.is_system() && !by_authority) return RejectReason::BadSignature;
  if (sig_check == SignatureCheck::Verify && !signature_valid(tx)) return RejectReason::BadSignature;
  if (tx.kind == TxKind::Vote && by_authority) return RejectReason::Malformed;

  if (state.closed) return RejectReason::OutsideWindow;
  switch (tx.kind) {
    case TxKind::Vote:
      if (tx.timestamp < cfg.start_time || tx.timestamp > cfg.end_time) return RejectReason::OutsideWindow;
      break;
    case TxKind::Mint:
      if (tx.timestamp > cfg.end_time) return RejectReason::OutsideWindow;
      break;
    case TxKind::Sweep:
    case TxKind::Close:
      if (tx.timestamp <= cfg.end_time) return RejectReason::OutsideWindow;
      break;
  }

  if (tx.kind == TxKind::Vote && state.spent_keys.contains(tx.from_pubkey)) return RejectReason::DoubleVote;

  if (tx.kind == TxKind::Close ? tx.amount != 0 : tx.amount == 0) return RejectReason::Malformed;

  const Address authority = derive_address(cfg.authority_key);
  switch (tx.kind) {
    case TxKind::Vote:
      if (!cfg.accepts_vote_to(tx.to_address)) return RejectReason::UnknownRecipient;
      break;
    case TxKind::Mint:
      if (cfg.accepts_vote_to(tx.to_address) || tx.to_address == authority) return RejectReason::UnknownRecipient;
      break;
    case TxKind::Sweep:
      if (tx.to_address != cfg.abstain_address || cfg.accepts_vote_to(tx.source) || tx.source == authority) {
        return RejectReason::UnknownRecipient;
      }
      break;
    case TxKind::Close:
      if (tx.to_address != cfg.abstain_address) return RejectReason::UnknownRecipient;
      break;
  }

  const Address signer = derive_address(tx.from_pubkey);
  if (tx.nonce != state.nonce(signer)) return RejectReason::BadNonce;

  if (tx.kind == TxKind::Vote && state.balance(signer) < tx.amount) return RejectReason::InsufficientBalance;
  if (tx.kind == TxKind::Sweep && state.balance(tx.source) < tx.amount) return RejectReason::InsufficientBalance;
  if (tx.kind == TxKind::Mint && state.minted_addresses.contains(tx.to_address)) return RejectReason::DuplicateMint;

  return std::nullopt;
}

Block build_block(const Block& parent, const LedgerState& state, std::span<const Transaction> txs,
                  const std::string& proposer_id, std::int64_t now, const ElectionConfig& cfg) {
  LedgerState working = state;
  for (std::size_t i = 0; i < txs.size(); ++i) {
    if (const auto reason = verify_transaction(txs[i], working, cfg)) {
      throw Error(ErrorCode::BuildRejected, std::to_string(i) + " " + std::string(reject_reason_name(*reason)));
    }
    working.apply(txs[i]);
  }
  Block b;
  b.index = parent.index + 1;
  b.prev_hash = parent.block_hash;
  b.timestamp = std::max(now, parent.timestamp);
  b.election_digest = cfg.digest();
  b.proposer_id = proposer_id;
  b.transactions.assign(txs.begin(), txs.end());
  b.block_hash = compute_block_hash(b);
  return b;
}

std::optional<BlockFault> check_and_apply_block(const Block& parent, const Block& block, LedgerState& state,
                                                const ElectionConfig& cfg, SignatureCheck sig_check,
                                                QuorumCheck quorum) {
  if (block.index != parent.index + 1) return BlockFault{ChainFault::BadIndex, {}, "index does not follow parent"};
  if (block.prev_hash != parent.block_hash) return BlockFault{ChainFault::NonLinking, {}, "prev_hash mismatch"};
  if (block.timestamp < parent.timestamp) return BlockFault{ChainFault::BadTimestamp, {}, "timestamp before parent"};
  if (block.election_digest != cfg.digest()) return BlockFault{ChainFault::WrongElection, {}, "election digest"};
  if (compute_block_hash(block) != block.block_hash) return BlockFault{ChainFault::BadHash, {}, "block hash"};
  if (quorum == QuorumCheck::Require && (!all_signatures_valid(block, cfg.roster) ||
                                         count_valid_signatures(block, cfg.roster) < cfg.quorum_threshold)) {
    return BlockFault{ChainFault::BadQuorum, {}, "quorum signatures"};
  }
  for (std::size_t i = 0; i < block.transactions.size(); ++i) {
    const auto& tx = block.transactions[i];
    if (const auto reason = verify_transaction(tx, state, cfg, sig_check)) {
      return BlockFault{ChainFault::InvalidTx, reason, "transaction " + std::to_string(i)};
    }
    state.apply(tx);
  }
  return std::nullopt;
}

ChainVerdict ChainVerdict::bad(std::uint64_t index, ChainFault fault, std::optional<RejectReason> reason,
                               std::string detail) {
  ChainVerdict v;
  v.valid = false;
  v.first_bad_index = index;
  v.fault = fault;
  v.tx_reason = reason;
  v.detail = std::move(detail);
  return v;
}

namespace {
std::optional<BlockFault> check_genesis(const Block& g, const ElectionConfig& cfg) {
  if (g.index != 0 || !g.prev_hash.is_zero() || !g.transactions.empty() || !g.quorum_signatures.empty()) {
    return BlockFault{ChainFault::BadGenesis, {}, "genesis shape"};
  }
  if (g.election_digest != cfg.digest()) return BlockFault{ChainFault::WrongElection, {}, "election digest"};
  if (compute_block_hash(g) != g.block_hash) return BlockFault{ChainFault::BadHash, {}, "genesis hash"};
  return std::nullopt;
}
}  // namespace

ChainVerdict validate_chain(std::span<const Block> blocks, const ElectionConfig& cfg, LedgerState* replayed_state) {
  if (blocks.empty()) return ChainVerdict::bad(0, ChainFault::BadGenesis, {}, "empty chain");
  if (const auto f = check_genesis(blocks[0], cfg)) return ChainVerdict::bad(0, f->fault, f->tx_reason, f->detail);
  LedgerState state;
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    if (const auto f = check_and_apply_block(blocks[i - 1], blocks[i], state, cfg)) {
      return ChainVerdict::bad(i, f->fault, f->tx_reason, f->detail);
    }
  }
  if (replayed_state) *replayed_state = std::move(state);
  return ChainVerdict::ok();
}

namespace {
std::string describe(const ChainVerdict& v) {
  std::string s = "block " + std::to_string(v.first_bad_index) + ": ";
  if (v.fault) s += chain_fault_name(*v.fault);
  if (v.tx_reason) s += std::string(" ") + std::string(reject_reason_name(*v.tx_reason));
  if (!v.detail.empty()) s += " (" + v.detail + ")";
  return s;
}
}  // namespace

Chain::Chain(ElectionConfig cfg, Block genesis) : cfg_(std::move(cfg)) {
  if (const auto f = check_genesis(genesis, cfg_)) {
    throw Error(ErrorCode::InvalidChain, std::string(chain_fault_name(f->fault)));
  }
  blocks_.push_back(std::move(genesis));
}

Chain Chain::genesis(ElectionConfig cfg, std::int64_t timestamp) {
  Block g = make_genesis(cfg, timestamp);
  return Chain(std::move(cfg), std::move(g));
}

Chain Chain::from_blocks(ElectionConfig cfg, std::vector<Block> blocks) {
  LedgerState state;
  const ChainVerdict v = validate_chain(blocks, cfg, &state);
  if (!v.valid) throw Error(ErrorCode::InvalidChain, describe(v));
  Chain c(std::move(cfg), blocks.front());
  c.blocks_ = std::move(blocks);
  c.state_ = std::move(state);
  return c;
}

std::optional<BlockFault> Chain::check_successor(const Block& block, QuorumCheck quorum) const {
  LedgerState scratch = state_;
  return check_and_apply_block(tip(), block, scratch, cfg_, SignatureCheck::Verify, quorum);
}

void Chain::append(Block block, SignatureCheck tx_sigs) {
  LedgerState next = state_;
  if (const auto f = check_and_apply_block(tip(), block, next, cfg_, tx_sigs)) {
    switch (f->fault) {
      case ChainFault::BadIndex:
      case ChainFault::NonLinking:
        throw Error(ErrorCode::NonLinking, f->detail);
      case ChainFault::BadQuorum:
        throw Error(ErrorCode::NotFinalized, f->detail);
      case ChainFault::InvalidTx:
        throw Error(ErrorCode::InvalidTx,
                    f->detail + (f->tx_reason ? " " + std::string(reject_reason_name(*f->tx_reason)) : ""));
      default:
        throw Error(ErrorCode::InvalidChain, std::string(chain_fault_name(f->fault)));
    }
  }
  blocks_.push_back(std::move(block));
  state_ = std::move(next);
}

}  // namespace votechain
