// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "tally/tally.hpp"

#include <algorithm>
#include <ctime>

#include "chain/election_setup.hpp"

namespace votechain::audit {

namespace {

struct Flows {
  std::uint64_t voted = 0;
  std::uint64_t explicit_abstain = 0;
  std::uint64_t swept = 0;
};

Flows scan_flows(std::span<const Block> blocks, const ElectionConfig& cfg) {
  Flows f;
  for (const auto& b : blocks) {
    for (const auto& tx : b.transactions) {
      if (tx.kind == TxKind::Vote) {
        f.voted += tx.amount;
        if (tx.to_address == cfg.abstain_address) f.explicit_abstain += tx.amount;
      } else if (tx.kind == TxKind::Sweep) {
        f.swept += tx.amount;
      }
    }
  }
  return f;
}

TallyResult from_state(std::span<const Block> blocks, const ElectionConfig& cfg, const LedgerState& state) {
  TallyResult r;
  r.election_id = cfg.election_id;
  std::uint64_t counted = 0;
  std::uint64_t best = 0;
  for (const auto& c : cfg.candidates) {
    const std::uint64_t bal = state.balance(c.address);
    r.per_candidate.push_back({c.name, c.address, bal});
    counted += bal;
    best = std::max(best, bal);
  }
  for (const auto& c : r.per_candidate) {
    if (c.balance == best) r.winners.push_back(c.name);
  }
  r.abstain_balance = state.balance(cfg.abstain_address);
  r.total_minted = state.total_minted;
  const Flows f = scan_flows(blocks, cfg);
  r.voted_tokens = f.voted;
  r.explicit_abstain_votes = f.explicit_abstain;
  r.swept_tokens = f.swept;
  r.unswept_residue = r.total_minted - counted - r.abstain_balance;
  r.closed = state.closed;
  r.height = blocks.back().index;
  r.tip_hash = blocks.back().block_hash;
  return r;
}

void require_valid(std::span<const Block> blocks, const ElectionConfig& cfg, LedgerState* state) {
  const ChainVerdict v = validate_chain(blocks, cfg, state);
  if (!v.valid) throw Error(ErrorCode::InvalidChain, "block " + std::to_string(v.first_bad_index));
}

}  // namespace

TallyResult tally(std::span<const Block> blocks, const ElectionConfig& cfg) {
  LedgerState state;
  require_valid(blocks, cfg, &state);
  return from_state(blocks, cfg, state);
}

TallyResult tally(const Chain& chain) { return from_state(chain.blocks(), chain.config(), chain.state()); }

Json tally_to_json(const TallyResult& r, bool withhold_candidates) {
  Json j;
  j["election_id"] = r.election_id;
  j["height"] = r.height;
  j["tip_hash"] = r.tip_hash.hex();
  j["closed"] = r.closed;
  j["provisional_withheld"] = withhold_candidates;
  if (!withhold_candidates) {
    Json per = Json::array();
    for (const auto& c : r.per_candidate) {
      per.push_back({{"name", c.name}, {"address", c.address.hex()}, {"balance", c.balance}});
    }
    j["per_candidate"] = std::move(per);
    j["abstain_balance"] = r.abstain_balance;
    j["explicit_abstain_votes"] = r.explicit_abstain_votes;
    j["swept_tokens"] = r.swept_tokens;
    j["winners"] = r.winners;
  }
  j["total_minted"] = r.total_minted;
  j["voted_tokens"] = r.voted_tokens;
  j["unswept_residue"] = r.unswept_residue;
  j["turnout_fraction"] = r.turnout_fraction();
  return j;
}

std::vector<Transaction> SweepPlan::all() const {
  std::vector<Transaction> out = sweeps;
  out.push_back(close);
  return out;
}

SweepPlan sweep_abstain(const LedgerState& state, const ElectionConfig& cfg, const KeyPair& authority,
                        std::int64_t now) {
  if (now <= cfg.end_time) throw Error(ErrorCode::WindowStillOpen, "voting window ends at " + std::to_string(cfg.end_time));
  if (state.closed) throw Error(ErrorCode::AlreadySwept, "election already closed");
  if (authority.public_key() != cfg.authority_key) throw Error(ErrorCode::KeyMismatch, "not the election authority");
  const Address authority_addr = derive_address(cfg.authority_key);
  std::uint64_t nonce = state.nonce(authority_addr);
  SweepPlan plan;
  for (const auto& [addr, bal] : state.balances) {
    if (bal == 0 || cfg.accepts_vote_to(addr) || addr == authority_addr) continue;
    plan.sweeps.push_back(make_sweep(cfg, authority, addr, bal, nonce++, now));
  }
  plan.close = make_close(cfg, authority, nonce, now);
  return plan;
}

std::optional<InclusionRecord> verify_vote(const PublicKey& voter, std::span<const Block> blocks) {
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.transactions.size(); ++i) {
      const auto& tx = b.transactions[i];
      if (tx.kind != TxKind::Vote || tx.from_pubkey != voter) continue;
      return InclusionRecord{tx_hash(tx), b.index, b.block_hash, i, tx.timestamp, b.timestamp, tx.to_address};
    }
  }
  return std::nullopt;
}

Json inclusion_to_json(const InclusionRecord& r) {
  return {{"tx_hash", r.tx_hash.hex()},       {"block_index", r.block_index},
          {"block_hash", r.block_hash.hex()}, {"position", r.position},
          {"tx_timestamp", r.tx_timestamp},   {"block_timestamp", r.block_timestamp},
          {"recipient", r.recipient.hex()}};
}

std::string utc_time(std::int64_t unix_seconds) {
  const std::time_t t = static_cast<std::time_t>(unix_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%d %H:%M:%S", &tm);
  return buf;
}

ExplorerPage explorer_page(std::span<const Block> blocks, std::uint64_t page, std::uint64_t page_size) {
  if (page_size == 0 || page_size > kMaxPageSize) {
    throw Error(ErrorCode::InvalidArgument, "page size must be in [1, " + std::to_string(kMaxPageSize) + "]");
  }
  ExplorerPage out;
  out.page = page;
  out.page_size = page_size;
  out.total_blocks = blocks.size();
  out.total_pages = (blocks.size() + page_size - 1) / page_size;
  if (page < 1 || page > out.total_pages) {
    throw Error(ErrorCode::PageOutOfRange, std::to_string(page) + " of " + std::to_string(out.total_pages));
  }
  const std::uint64_t first = (page - 1) * page_size;
  for (std::uint64_t k = first; k < std::min<std::uint64_t>(first + page_size, blocks.size()); ++k) {
    const Block& b = blocks[blocks.size() - 1 - k];
    out.rows.push_back({b.prev_hash, b.block_hash, size_kb(b), utc_time(b.timestamp), b.timestamp});
  }
  return out;
}

Json explorer_page_to_json(const ExplorerPage& p) {
  Json rows = Json::array();
  for (const auto& r : p.rows) {
    rows.push_back({{"previous_hash", r.previous_hash.hex()},
                    {"block_hash", r.block_hash.hex()},
                    {"size_kb", r.size_kb},
                    {"time", r.time},
                    {"timestamp", r.timestamp}});
  }
  return {{"page", p.page},
          {"page_size", p.page_size},
          {"total_blocks", p.total_blocks},
          {"total_pages", p.total_pages},
          {"rows", std::move(rows)}};
}

AuditReport recount(std::span<const Block> blocks, const ElectionConfig& cfg, const std::set<PublicKey>& registered,
                    std::span<const RejectReason> rejections) {
  require_valid(blocks, cfg, nullptr);
  AuditReport r;
  r.election_id = cfg.election_id;
  for (const auto& c : cfg.candidates) r.per_candidate[c.name] = 0;
  for (const auto& b : blocks) {
    for (const auto& tx : b.transactions) {
      switch (tx.kind) {
        case TxKind::Vote: {
          ++r.accepted;
          const std::uint64_t n = ++r.per_key_vote_count[tx.from_pubkey];
          r.max_votes_per_key = std::max(r.max_votes_per_key, n);
          if (!registered.contains(tx.from_pubkey)) r.unregistered_keys.insert(tx.from_pubkey);
          if (const Candidate* c = cfg.candidate_by_address(tx.to_address)) {
            r.per_candidate[c->name] += tx.amount;
          } else {
            r.explicit_abstain_votes += tx.amount;
          }
          break;
        }
        case TxKind::Sweep:
          ++r.sweep_txs;
          r.swept_tokens += tx.amount;
          break;
        case TxKind::Mint:
          ++r.mint_txs;
          break;
        case TxKind::Close:
          break;
      }
    }
  }
  for (const RejectReason reason : rejections) ++r.rejected_by_reason[std::string(reject_reason_name(reason))];
  r.total_vote_txs = r.accepted + rejections.size();
  std::uint64_t voted_registered = 0;
  for (const auto& k : registered) voted_registered += r.per_key_vote_count.contains(k);
  r.registered_nonvoters = registered.size() - voted_registered;
  return r;
}

Json audit_to_json(const AuditReport& r) {
  Json per_key = Json::object();
  for (const auto& [k, n] : r.per_key_vote_count) per_key[k.hex()] = n;
  Json unregistered = Json::array();
  for (const auto& k : r.unregistered_keys) unregistered.push_back(k.hex());
  Json rejected = Json::object();
  for (const auto& [reason, n] : r.rejected_by_reason) rejected[reason] = n;
  Json per_candidate = Json::object();
  for (const auto& [name, n] : r.per_candidate) per_candidate[name] = n;
  return {{"election_id", r.election_id},
          {"total_vote_txs", r.total_vote_txs},
          {"accepted", r.accepted},
          {"rejected_by_reason", std::move(rejected)},
          {"per_candidate", std::move(per_candidate)},
          {"explicit_abstain_votes", r.explicit_abstain_votes},
          {"sweep_txs", r.sweep_txs},
          {"swept_tokens", r.swept_tokens},
          {"mint_txs", r.mint_txs},
          {"max_votes_per_key", r.max_votes_per_key},
          {"unregistered_keys", std::move(unregistered)},
          {"registered_nonvoters", r.registered_nonvoters},
          {"per_key_vote_count", std::move(per_key)}};
}

}  // namespace votechain::audit
