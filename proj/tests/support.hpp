// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "chain/block.hpp"
#include "chain/election_setup.hpp"
#include "chain/ledger.hpp"

namespace votechain::testing {

inline constexpr std::int64_t kStart = 1'673'481'600;  // 2023-01-12T00:00:00Z
inline constexpr std::int64_t kEnd = kStart + 12 * 3600;

inline SeededElection test_election(std::size_t candidates = 3, std::size_t nodes = 5, std::uint64_t seed = 1) {
  ElectionSpec spec;
  spec.election_id = "test-election";
  for (std::size_t i = 0; i < candidates; ++i) spec.candidates.push_back("Candidate " + std::string(1, char('A' + i)));
  spec.start_time = kStart;
  spec.end_time = kEnd;
  spec.nodes = nodes;
  return make_election(spec, seed);
}

// Signs with the first `signers` roster keys (all by default).
inline void sign_quorum(Block& b, const SeededElection& e, std::size_t signers = SIZE_MAX) {
  b.quorum_signatures.clear();
  for (std::size_t i = 0; i < e.keys.nodes.size() && i < signers; ++i) {
    b.quorum_signatures.push_back({node_id_for(i), sign_block(b, e.keys.nodes[i])});
  }
}

inline Block finalized_block(const Chain& chain, const SeededElection& e, const std::vector<Transaction>& txs,
                             std::int64_t now) {
  Block b = build_block(chain.tip(), chain.state(), txs, node_id_for(chain.length() % e.keys.nodes.size()), now,
                        e.cfg);
  sign_quorum(b, e);
  return b;
}

// Funds voters [0, n) in one block and returns their keys.
inline std::vector<KeyPair> fund_voters(Chain& chain, const SeededElection& e, std::size_t n, std::uint64_t seed = 7) {
  std::vector<KeyPair> voters;
  std::vector<Transaction> mints;
  std::uint64_t nonce = chain.state().nonce(derive_address(e.cfg.authority_key));
  for (std::size_t i = 0; i < n; ++i) {
    voters.push_back(seeded_voter_key(seed, i));
    mints.push_back(make_mint(e.cfg, e.keys.authority, voters.back().address(), nonce++, kStart - 10));
  }
  chain.append(finalized_block(chain, e, mints, kStart - 5));
  return voters;
}

// A finished voting phase: funded voters, random choices, some repeat
// attempts that the ledger refuses. choice: -2 did not vote, -1 abstained.
struct SeededRun {
  SeededElection e;
  Chain chain;
  std::vector<KeyPair> voters;
  std::vector<int> choice;
  std::vector<RejectReason> rejections;
};

inline SeededRun seeded_run(std::uint64_t seed, std::size_t candidates, std::size_t n_voters,
                            std::size_t block_size = 64) {
  SeededElection e = test_election(candidates, 5, seed);
  Chain chain = Chain::genesis(e.cfg, kStart - 1000);
  std::vector<KeyPair> voters = fund_voters(chain, e, n_voters, seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(candidates) - 1);
  std::vector<int> choice(n_voters, -2);
  std::vector<std::pair<std::size_t, int>> attempts;  // (voter, choice)
  for (std::size_t i = 0; i < n_voters; ++i) {
    const double r = u(rng);
    if (r < 0.15) continue;
    choice[i] = r < 0.25 ? -1 : pick(rng);
    attempts.emplace_back(i, choice[i]);
    if (u(rng) < 0.1) attempts.emplace_back(i, pick(rng));  // refused repeat
  }
  auto addr = [&](int c) { return c < 0 ? e.cfg.abstain_address : e.cfg.candidates[static_cast<std::size_t>(c)].address; };
  std::vector<RejectReason> rejections;
  std::vector<Transaction> batch;
  LedgerState working = chain.state();
  std::int64_t t = kStart;
  auto flush = [&] {
    if (batch.empty()) return;
    chain.append(finalized_block(chain, e, batch, t));
    batch.clear();
  };
  for (const auto& [i, c] : attempts) {
    const Transaction tx = make_vote(e.cfg, voters[i], addr(c), 0, ++t);
    if (const auto reason = verify_transaction(tx, working, e.cfg)) {
      rejections.push_back(*reason);
      continue;
    }
    working.apply(tx);
    batch.push_back(tx);
    if (batch.size() == block_size) flush();
  }
  flush();
  return {std::move(e), std::move(chain), std::move(voters), std::move(choice), std::move(rejections)};
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / (name + "-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace votechain::testing
