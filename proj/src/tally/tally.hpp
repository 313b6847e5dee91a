// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "chain/crypto.hpp"
#include "chain/ledger.hpp"
#include "common/json.hpp"

namespace votechain::audit {

struct CandidateTally {
  std::string name;
  Address address;
  std::uint64_t balance = 0;
};

struct TallyResult {
  std::string election_id;
  std::vector<CandidateTally> per_candidate;  // election config order
  std::uint64_t abstain_balance = 0;
  std::uint64_t explicit_abstain_votes = 0;  // votes cast to the abstain address
  std::uint64_t swept_tokens = 0;            // moved there after close
  std::uint64_t total_minted = 0;
  std::uint64_t voted_tokens = 0;
  std::uint64_t unswept_residue = 0;  // still held by voter accounts
  std::vector<std::string> winners;   // every candidate at the maximum balance
  bool closed = false;
  std::uint64_t height = 0;
  Digest32 tip_hash;

  double turnout_fraction() const {
    return total_minted == 0 ? 0.0 : static_cast<double>(voted_tokens) / static_cast<double>(total_minted);
  }
};

// Replays the blocks from genesis. Throws Error(InvalidChain).
TallyResult tally(std::span<const Block> blocks, const ElectionConfig& cfg);
// Uses the already validated state of `chain`.
TallyResult tally(const Chain& chain);

// `withhold_candidates` hides per-candidate balances and winners, for
// publishing an open election without provisional results.
Json tally_to_json(const TallyResult& result, bool withhold_candidates = false);

struct SweepPlan {
  std::vector<Transaction> sweeps;  // one per voter account still holding tokens
  Transaction close;

  std::vector<Transaction> all() const;
};

// Errors: WindowStillOpen (now <= end_time), AlreadySwept (state closed).
SweepPlan sweep_abstain(const LedgerState& state, const ElectionConfig& cfg, const KeyPair& authority,
                        std::int64_t now);

struct InclusionRecord {
  Digest32 tx_hash;
  std::uint64_t block_index = 0;
  Digest32 block_hash;
  std::uint64_t position = 0;
  std::int64_t tx_timestamp = 0;
  std::int64_t block_timestamp = 0;
  Address recipient;
};

std::optional<InclusionRecord> verify_vote(const PublicKey& voter, std::span<const Block> blocks);
Json inclusion_to_json(const InclusionRecord& record);

// Columns and order of the public block listing.
struct ExplorerRow {
  Digest32 previous_hash;
  Digest32 block_hash;
  std::uint64_t size_kb = 0;
  std::string time;  // UTC, "YYYY-MM-DD HH:MM:SS"
  std::int64_t timestamp = 0;
};

struct ExplorerPage {
  std::vector<ExplorerRow> rows;  // newest first
  std::uint64_t page = 1;         // 1-based
  std::uint64_t page_size = 0;
  std::uint64_t total_blocks = 0;
  std::uint64_t total_pages = 0;
};

inline constexpr std::uint64_t kMaxPageSize = 1000;

std::string utc_time(std::int64_t unix_seconds);

// Throws PageOutOfRange for a page outside [1, total_pages] and
// InvalidArgument for a page size outside [1, kMaxPageSize].
ExplorerPage explorer_page(std::span<const Block> blocks, std::uint64_t page, std::uint64_t page_size);
Json explorer_page_to_json(const ExplorerPage& page);

struct AuditReport {
  std::string election_id;
  std::uint64_t total_vote_txs = 0;  // accepted plus rejected submissions
  std::uint64_t accepted = 0;
  std::map<std::string, std::uint64_t> rejected_by_reason;
  std::map<PublicKey, std::uint64_t> per_key_vote_count;
  std::set<PublicKey> unregistered_keys;
  std::uint64_t registered_nonvoters = 0;
  std::map<std::string, std::uint64_t> per_candidate;  // by candidate name
  std::uint64_t explicit_abstain_votes = 0;
  std::uint64_t sweep_txs = 0;
  std::uint64_t swept_tokens = 0;
  std::uint64_t mint_txs = 0;
  std::uint64_t max_votes_per_key = 0;
};

// Full traversal after validation; `rejections` are the reasons logged by
// the submission path for ballots that never reached the chain.
AuditReport recount(std::span<const Block> blocks, const ElectionConfig& cfg, const std::set<PublicKey>& registered,
                    std::span<const RejectReason> rejections = {});
Json audit_to_json(const AuditReport& report);

}  // namespace votechain::audit
