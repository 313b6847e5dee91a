// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chain/block.hpp"
#include "chain/election.hpp"
#include "chain/transaction.hpp"
#include "common/error.hpp"

namespace votechain {

enum class RejectReason {
  BadSignature,
  OutsideWindow,
  InsufficientBalance,
  BadNonce,
  UnknownRecipient,
  DoubleVote,
  Malformed,      // wrong election id, zero amount, authority voting
  DuplicateMint,  // a second mint to an already funded address
};

std::string_view reject_reason_name(RejectReason reason);
std::optional<RejectReason> parse_reject_reason(std::string_view name);
ErrorCode to_error_code(RejectReason reason);

// Account-model ledger state at some chain height.
struct LedgerState {
  std::map<Address, std::uint64_t> balances;
  std::map<Address, std::uint64_t> next_nonce;
  std::set<PublicKey> spent_keys;
  std::set<Address> minted_addresses;
  std::uint64_t total_minted = 0;
  bool closed = false;

  std::uint64_t balance(const Address& a) const;
  std::uint64_t nonce(const Address& a) const;
  std::uint64_t sum_balances() const;

  // Applies a transaction that already passed verify_transaction.
  void apply(const Transaction& tx);

  friend bool operator==(const LedgerState&, const LedgerState&) = default;
};

enum class SignatureCheck { Verify, Skip };
enum class QuorumCheck { Require, Skip };

// nullopt means Accept. Checks run in a fixed order so every input maps to
// exactly one reason: election id, signature/authority, closed election,
// window, spent key, amount, recipient, nonce, balance, duplicate mint.
std::optional<RejectReason> verify_transaction(const Transaction& tx, const LedgerState& state,
                                               const ElectionConfig& cfg,
                                               SignatureCheck sig_check = SignatureCheck::Verify);

// Builds an unsigned successor of `parent`. Every transaction must be valid
// against `state` with its predecessors applied, otherwise
// Error(BuildRejected, "<index>") names the first offender.
Block build_block(const Block& parent, const LedgerState& state, std::span<const Transaction> txs,
                  const std::string& proposer_id, std::int64_t now, const ElectionConfig& cfg);

enum class ChainFault {
  Malformed,
  BadGenesis,
  BadIndex,
  NonLinking,
  BadTimestamp,
  WrongElection,
  BadHash,
  BadQuorum,
  InvalidTx,
};

std::string_view chain_fault_name(ChainFault fault);

struct BlockFault {
  ChainFault fault;
  std::optional<RejectReason> tx_reason;
  std::string detail;
};

// Checks `block` as the successor of `parent` and applies its transactions to
// `state`. On failure `state` is left partially updated.
std::optional<BlockFault> check_and_apply_block(const Block& parent, const Block& block, LedgerState& state,
                                                const ElectionConfig& cfg,
                                                SignatureCheck sig_check = SignatureCheck::Verify,
                                                QuorumCheck quorum = QuorumCheck::Require);

struct ChainVerdict {
  bool valid = true;
  std::uint64_t first_bad_index = 0;
  std::optional<ChainFault> fault;
  std::optional<RejectReason> tx_reason;
  std::string detail;

  static ChainVerdict ok() { return {}; }
  static ChainVerdict bad(std::uint64_t index, ChainFault fault, std::optional<RejectReason> reason = {},
                          std::string detail = {});
};

// Full replay from genesis: links, hashes, quorum signatures and every
// transaction against the reconstructed state.
ChainVerdict validate_chain(std::span<const Block> blocks, const ElectionConfig& cfg,
                            LedgerState* replayed_state = nullptr);

// An append-only chain replica with its incrementally maintained state.
// Single writer; copies are independent snapshots.
class Chain {
 public:
  Chain(ElectionConfig cfg, Block genesis);
  static Chain genesis(ElectionConfig cfg, std::int64_t timestamp);
  // Full validation; throws Error(InvalidChain) with the verdict as detail.
  static Chain from_blocks(ElectionConfig cfg, std::vector<Block> blocks);

  // Throws NonLinking, NotFinalized (quorum not met or a bad signature) or
  // InvalidTx. SignatureCheck::Skip is for blocks whose transactions this
  // replica already verified while signing.
  void append(Block block, SignatureCheck tx_sigs = SignatureCheck::Verify);
  // Same checks as append without mutating; nullopt when append would succeed.
  // QuorumCheck::Skip is what a validator runs before adding its signature.
  std::optional<BlockFault> check_successor(const Block& block, QuorumCheck quorum = QuorumCheck::Require) const;

  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& tip() const { return blocks_.back(); }
  std::uint64_t height() const { return tip().index; }
  std::size_t length() const { return blocks_.size(); }
  const LedgerState& state() const { return state_; }
  const ElectionConfig& config() const { return cfg_; }

  // Test and simulation hook for modelling a compromised replica.
  std::vector<Block>& mutable_blocks_for_tamper() { return blocks_; }

 private:
  ElectionConfig cfg_;
  std::vector<Block> blocks_;
  LedgerState state_;
};

}  // namespace votechain
