// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>
#include <openssl/sha.h>

#include <random>

#include "chain/chain_file.hpp"
#include "chain/encoding.hpp"
#include "chain/json_codec.hpp"
#include "support.hpp"

using namespace votechain;
using namespace votechain::testing;

namespace {

Transaction random_tx(std::mt19937_64& rng) {
  Transaction tx;
  tx.kind = static_cast<TxKind>(rng() % 4);
  tx.election_id = "e-" + std::to_string(rng() % 1000);
  for (auto& b : tx.from_pubkey.bytes) b = static_cast<std::uint8_t>(rng());
  for (auto& b : tx.source.bytes) b = static_cast<std::uint8_t>(rng());
  for (auto& b : tx.to_address.bytes) b = static_cast<std::uint8_t>(rng());
  tx.amount = rng() % 5;
  tx.timestamp = static_cast<std::int64_t>(rng() % 4'000'000'000ULL);
  tx.nonce = rng() % 3;
  for (auto& b : tx.signature.bytes) b = static_cast<std::uint8_t>(rng());
  return tx;
}

// Independent validity oracle: every fact is re-derived by scanning the raw
// list of previously accepted transactions instead of consulting LedgerState.
std::optional<RejectReason> oracle_verdict(const Transaction& tx, const std::vector<Transaction>& accepted,
                                           const ElectionConfig& cfg) {
  const Address authority = derive_address(cfg.authority_key);
  auto addr_of = [](const Transaction& t) { return derive_address(t.from_pubkey); };
  auto balance = [&](const Address& a) {
    std::int64_t bal = 0;
    for (const auto& t : accepted) {
      if (t.to_address == a && t.kind != TxKind::Close) bal += static_cast<std::int64_t>(t.amount);
      if (t.kind == TxKind::Vote && addr_of(t) == a) bal -= static_cast<std::int64_t>(t.amount);
      if (t.kind == TxKind::Sweep && t.source == a) bal -= static_cast<std::int64_t>(t.amount);
    }
    return bal;
  };
  std::uint64_t sent = 0;
  bool spent = false, minted = false, closed = false;
  for (const auto& t : accepted) {
    if (addr_of(t) == addr_of(tx)) ++sent;
    if (t.kind == TxKind::Vote && t.from_pubkey == tx.from_pubkey) spent = true;
    if (t.kind == TxKind::Mint && t.to_address == tx.to_address) minted = true;
    if (t.kind == TxKind::Close) closed = true;
  }
  bool ballot_addr = tx.to_address == cfg.abstain_address;
  bool source_ballot = tx.source == cfg.abstain_address;
  for (const auto& c : cfg.candidates) {
    ballot_addr = ballot_addr || c.address == tx.to_address;
    source_ballot = source_ballot || c.address == tx.source;
  }

  if (tx.election_id != cfg.election_id) return RejectReason::Malformed;
  const bool sys = tx.kind != TxKind::Vote;
  if (sys && tx.from_pubkey != cfg.authority_key) return RejectReason::BadSignature;
  if (!verify_signature(tx.from_pubkey, canonical_bytes(tx), tx.signature)) return RejectReason::BadSignature;
  if (!sys && tx.from_pubkey == cfg.authority_key) return RejectReason::Malformed;
  if (closed) return RejectReason::OutsideWindow;
  if (tx.kind == TxKind::Vote && (tx.timestamp < cfg.start_time || tx.timestamp > cfg.end_time)) {
    return RejectReason::OutsideWindow;
  }
  if (tx.kind == TxKind::Mint && tx.timestamp > cfg.end_time) return RejectReason::OutsideWindow;
  if ((tx.kind == TxKind::Sweep || tx.kind == TxKind::Close) && tx.timestamp <= cfg.end_time) {
    return RejectReason::OutsideWindow;
  }
  if (tx.kind == TxKind::Vote && spent) return RejectReason::DoubleVote;
  if ((tx.kind == TxKind::Close) != (tx.amount == 0)) return RejectReason::Malformed;
  if (tx.kind == TxKind::Vote && !ballot_addr) return RejectReason::UnknownRecipient;
  if (tx.kind == TxKind::Mint && (ballot_addr || tx.to_address == authority)) return RejectReason::UnknownRecipient;
  if (tx.kind == TxKind::Sweep && (tx.to_address != cfg.abstain_address || source_ballot || tx.source == authority)) {
    return RejectReason::UnknownRecipient;
  }
  if (tx.kind == TxKind::Close && tx.to_address != cfg.abstain_address) return RejectReason::UnknownRecipient;
  if (tx.nonce != sent) return RejectReason::BadNonce;
  if (tx.kind == TxKind::Vote && balance(addr_of(tx)) < static_cast<std::int64_t>(tx.amount)) {
    return RejectReason::InsufficientBalance;
  }
  if (tx.kind == TxKind::Sweep && balance(tx.source) < static_cast<std::int64_t>(tx.amount)) {
    return RejectReason::InsufficientBalance;
  }
  if (tx.kind == TxKind::Mint && minted) return RejectReason::DuplicateMint;
  return std::nullopt;
}

// Builds a valid chain of `blocks` finalized blocks with a mix of mints and
// votes so that every block carries transactions.
Chain build_test_chain(const SeededElection& e, std::size_t blocks, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Chain chain = Chain::genesis(e.cfg, kStart - 100);
  std::uint64_t next_voter = 0;
  std::vector<KeyPair> funded;
  const Address authority = derive_address(e.cfg.authority_key);
  for (std::size_t h = 1; h <= blocks; ++h) {
    std::vector<Transaction> txs;
    std::uint64_t nonce = chain.state().nonce(authority);
    const int mints = 1 + static_cast<int>(rng() % 2);
    for (int m = 0; m < mints; ++m) {
      funded.push_back(seeded_voter_key(seed, next_voter++));
      txs.push_back(make_mint(e.cfg, e.keys.authority, funded.back().address(), nonce++, kStart));
    }
    if (funded.size() > 3 && rng() % 2 == 0) {
      const KeyPair& v = funded[funded.size() - 3];
      if (!chain.state().spent_keys.contains(v.public_key())) {
        const auto& c = e.cfg.candidates[rng() % e.cfg.candidates.size()];
        txs.push_back(make_vote(e.cfg, v, c.address, 0, kStart + static_cast<std::int64_t>(h)));
      }
    }
    chain.append(finalized_block(chain, e, txs, kStart + static_cast<std::int64_t>(h)));
  }
  return chain;
}

}  // namespace

TEST_SUITE("hash_bytes") {
  TEST_CASE("empty input yields the published SHA-256 digest") {
    CHECK(hash_bytes(ByteView{}).hex() == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(hash_bytes(std::string_view("abc")).hex() ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("agrees with an independent SHA-256 implementation on random inputs") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
      Bytes data(rng() % 300);
      for (auto& b : data) b = static_cast<std::uint8_t>(rng());
      unsigned char ref[SHA256_DIGEST_LENGTH];
      SHA256(data.data(), data.size(), ref);
      CHECK(hash_bytes(data).hex() == to_hex(ByteView(ref, sizeof ref)));
    }
  }

  TEST_CASE("deterministic and sensitive to every single-bit change") {
    std::mt19937_64 rng(12);
    int collisions = 0;
    for (int trial = 0; trial < 10'000; ++trial) {
      Bytes data(1 + rng() % 64);
      for (auto& b : data) b = static_cast<std::uint8_t>(rng());
      const Digest32 a = hash_bytes(data);
      REQUIRE(a == hash_bytes(data));
      data[rng() % data.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
      if (hash_bytes(data) == a) ++collisions;
    }
    CHECK(collisions == 0);
  }
}

TEST_SUITE("signatures") {
  TEST_CASE("Ed25519 matches RFC 8032 test vectors") {
    struct Vector {
      const char* seed;
      const char* pub;
      const char* msg;
      const char* sig;
    };
    const Vector vectors[] = {
        {"9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60",
         "d75a980182b10ab7d54bfed3c964073a0ee172f3daa62325af021a68f707511a", "",
         "e5564300c360ac729086e2cc806e828a84877f1eb8e5d974d873e065224901555fb8821590a33bacc61e39701cf9b46bd25bf5f0595bbe"
         "24655141438e7a100b"},
        {"4ccd089b28ff96da9db6c346ec114e0f5b8a319f35aba624da8cf6ed4fb8a6fb",
         "3d4017c3e843895a92b70aa74d1b7ebc9c982ccf2ec4968cc0cd55f12af4660c", "72",
         "92a009a9f0d4cab8720e820b5f642540a2b27b5416503f8fb3762223ebdb69da085ac1e43e15996e458f3613d0f11d8c387b2eaeb430"
         "2aeeb00d291612bb0c00"},
        {"c5aa8df43f9f837bedb7442f31dcb7b166d38535076f094b85ce3a2e0b4458f7",
         "fc51cd8e6218a1a38da47ed00230f0580816ed13ba3303ac5deb911548908025", "af82",
         "6291d657deec24024827e69c3abe01a30ce548a284743a445e3680d7db5ac3ac18ff9b538d16f290ae67f760984dc6594a7c15e9716e"
         "d28dc027beceea1ec40a"},
    };
    for (const auto& v : vectors) {
      const KeyPair kp = KeyPair::from_seed(from_hex(v.seed));
      CHECK(kp.public_key().hex() == v.pub);
      const Bytes msg = from_hex(v.msg);
      const Signature sig = kp.sign(msg);
      CHECK(sig.hex() == v.sig);
      CHECK(verify_signature(kp.public_key(), msg, sig));
    }
  }

  TEST_CASE("sign then verify, and tampering any to_address byte invalidates") {
    const auto e = test_election();
    const KeyPair voter = seeded_voter_key(3, 0);
    const Transaction tx = make_vote(e.cfg, voter, e.cfg.candidates[0].address, 0, kStart);
    CHECK(signature_valid(tx));
    for (std::size_t i = 0; i < Address::size; ++i) {
      for (std::uint8_t mask : {std::uint8_t{0x01}, std::uint8_t{0x80}, std::uint8_t{0xff}}) {
        Transaction t = tx;
        t.to_address.bytes[i] ^= mask;
        CHECK_FALSE(signature_valid(t));
      }
    }
    Transaction other = tx;
    other.from_pubkey = seeded_voter_key(3, 1).public_key();
    CHECK_FALSE(signature_valid(other));
  }

  TEST_CASE("signing with a key that does not own from_pubkey is refused") {
    const auto e = test_election();
    Transaction tx;
    tx.from_pubkey = seeded_voter_key(3, 0).public_key();
    try {
      (void)sign_transaction(tx, seeded_voter_key(3, 1));
      FAIL("expected KeyMismatch");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::KeyMismatch);
    }
  }

  TEST_CASE("address derivation is deterministic") {
    const KeyPair a = seeded_voter_key(5, 5);
    CHECK(derive_address(a.public_key()) == derive_address(a.public_key()));
    CHECK(a.address().hex().size() == 40);
    const Digest32 d = hash_bytes(a.public_key().view());
    CHECK(a.address().hex() == d.hex().substr(0, 40));
  }
}

TEST_SUITE("canonical_bytes") {
  TEST_CASE("zero nonce encodes as eight zero bytes at its field offset") {
    const auto e = test_election();
    Transaction tx = make_vote(e.cfg, seeded_voter_key(1, 1), e.cfg.candidates[1].address, 0, kStart);
    const Bytes b = canonical_bytes(tx);
    // kind(8) election_id(4+n) from_pubkey(4+32) source(4+20) to(4+20) amount(8) timestamp(8)
    const std::size_t nonce_at = 8 + 4 + tx.election_id.size() + 36 + 24 + 24 + 8 + 8;
    for (std::size_t i = 0; i < 8; ++i) CHECK(b[nonce_at + i] == 0);
    CHECK(decode_transaction(encode(tx)).nonce == 0);

    Transaction tx2 = tx;
    tx2.nonce = 0x0102030405060708ULL;
    const Bytes b2 = canonical_bytes(tx2);
    REQUIRE(b.size() == b2.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      const bool in_window = i >= nonce_at && i < nonce_at + 8;
      if (!in_window) CHECK(b[i] == b2[i]);
    }
    CHECK(b2[nonce_at] == 0x01);
    CHECK(b2[nonce_at + 7] == 0x08);
  }

  TEST_CASE("signature field is zeroed in canonical bytes but kept in the full encoding") {
    const auto e = test_election();
    const Transaction tx = make_vote(e.cfg, seeded_voter_key(1, 1), e.cfg.candidates[1].address, 0, kStart);
    Transaction unsigned_tx = tx;
    unsigned_tx.signature = {};
    CHECK(canonical_bytes(tx) == canonical_bytes(unsigned_tx));
    CHECK(encode(tx) != encode(unsigned_tx));
  }

  TEST_CASE("round trip preserves canonical bytes for 1000 random transactions") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 1000; ++i) {
      const Transaction tx = random_tx(rng);
      const Transaction back = decode_transaction(encode(tx));
      REQUIRE(back == tx);
      REQUIRE(canonical_bytes(back) == canonical_bytes(tx));
    }
  }

  TEST_CASE("truncated or padded records fail to decode") {
    std::mt19937_64 rng(5);
    const Bytes enc = encode(random_tx(rng));
    Bytes shorter(enc.begin(), enc.end() - 1);
    CHECK_THROWS_AS(decode_transaction(shorter), Error);
    Bytes longer = enc;
    longer.push_back(0);
    CHECK_THROWS_AS(decode_transaction(longer), Error);
  }
}

TEST_SUITE("verify_transaction") {
  TEST_CASE("happy path, double vote and window boundary") {
    const auto e = test_election();
    Chain chain = Chain::genesis(e.cfg, kStart - 100);
    const auto voters = fund_voters(chain, e, 2);
    const auto& cand = e.cfg.candidates[0].address;

    const Transaction first = make_vote(e.cfg, voters[0], cand, 0, kStart + 1);
    CHECK_FALSE(verify_transaction(first, chain.state(), e.cfg).has_value());

    LedgerState after = chain.state();
    after.apply(first);
    const Transaction second = make_vote(e.cfg, voters[0], e.cfg.candidates[1].address, 1, kStart + 2);
    CHECK(verify_transaction(second, after, e.cfg) == RejectReason::DoubleVote);
    // Replaying the identical transaction is a double vote too.
    CHECK(verify_transaction(first, after, e.cfg) == RejectReason::DoubleVote);

    const Transaction late = make_vote(e.cfg, voters[1], cand, 0, kEnd + 1);
    CHECK(verify_transaction(late, chain.state(), e.cfg) == RejectReason::OutsideWindow);
    const Transaction on_end = make_vote(e.cfg, voters[1], cand, 0, kEnd);
    CHECK_FALSE(verify_transaction(on_end, chain.state(), e.cfg).has_value());
    const Transaction early = make_vote(e.cfg, voters[1], cand, 0, kStart - 1);
    CHECK(verify_transaction(early, chain.state(), e.cfg) == RejectReason::OutsideWindow);
  }

  TEST_CASE("each reject reason is reachable") {
    const auto e = test_election();
    Chain chain = Chain::genesis(e.cfg, kStart - 100);
    const auto voters = fund_voters(chain, e, 2);
    const auto& st = chain.state();
    const auto& cand = e.cfg.candidates[0].address;

    Transaction bad_sig = make_vote(e.cfg, voters[0], cand, 0, kStart);
    bad_sig.signature.bytes[0] ^= 1;
    CHECK(verify_transaction(bad_sig, st, e.cfg) == RejectReason::BadSignature);

    CHECK(verify_transaction(make_vote(e.cfg, voters[0], Address{}, 0, kStart), st, e.cfg) ==
          RejectReason::UnknownRecipient);
    CHECK(verify_transaction(make_vote(e.cfg, voters[0], cand, 1, kStart), st, e.cfg) == RejectReason::BadNonce);
    CHECK(verify_transaction(make_vote(e.cfg, seeded_voter_key(99, 0), cand, 0, kStart), st, e.cfg) ==
          RejectReason::InsufficientBalance);

    const std::uint64_t anonce = st.nonce(derive_address(e.cfg.authority_key));
    CHECK(verify_transaction(make_mint(e.cfg, e.keys.authority, voters[0].address(), anonce, kStart), st, e.cfg) ==
          RejectReason::DuplicateMint);
    // Mint signed by anyone but the authority.
    Transaction forged = make_vote(e.cfg, voters[1], voters[1].address(), 0, kStart);
    forged.kind = TxKind::Mint;
    forged = sign_transaction(forged, voters[1]);
    CHECK(verify_transaction(forged, st, e.cfg) == RejectReason::BadSignature);

    Transaction wrong_election = make_vote(e.cfg, voters[0], cand, 0, kStart);
    wrong_election.election_id = "other";
    wrong_election = sign_transaction(wrong_election, voters[0]);
    CHECK(verify_transaction(wrong_election, st, e.cfg) == RejectReason::Malformed);

    Transaction zero = make_vote(e.cfg, voters[0], cand, 0, kStart);
    zero.amount = 0;
    zero = sign_transaction(zero, voters[0]);
    CHECK(verify_transaction(zero, st, e.cfg) == RejectReason::Malformed);

    // Sweeps and close are only valid after the window.
    CHECK(verify_transaction(make_sweep(e.cfg, e.keys.authority, voters[0].address(), 1, anonce, kEnd), st, e.cfg) ==
          RejectReason::OutsideWindow);
    CHECK_FALSE(verify_transaction(make_sweep(e.cfg, e.keys.authority, voters[0].address(), 1, anonce, kEnd + 1), st,
                                   e.cfg)
                    .has_value());
    LedgerState closed = st;
    closed.apply(make_close(e.cfg, e.keys.authority, anonce, kEnd + 1));
    CHECK(closed.closed);
    CHECK(verify_transaction(make_vote(e.cfg, voters[0], cand, 0, kStart), closed, e.cfg) ==
          RejectReason::OutsideWindow);
  }

  TEST_CASE("500 random transactions agree with the naive replay oracle") {
    const auto e = test_election(3, 3, 4);
    std::mt19937_64 rng(500);
    std::vector<KeyPair> voters;
    for (int i = 0; i < 40; ++i) voters.push_back(seeded_voter_key(4, static_cast<std::uint64_t>(i)));
    LedgerState state;
    std::vector<Transaction> accepted;
    std::map<std::string, int> reasons;
    const Address authority = derive_address(e.cfg.authority_key);

    auto pick_ts = [&](bool system_after) -> std::int64_t {
      switch (rng() % 5) {
        case 0: return kStart - 1;
        case 1: return kEnd + 1;
        case 2: return system_after ? kEnd + 5 : kStart;
        default: return system_after ? kEnd + 10 : kStart + static_cast<std::int64_t>(rng() % 100);
      }
    };
    for (int i = 0; i < 500; ++i) {
      const KeyPair& v = voters[rng() % voters.size()];
      const std::uint64_t nonce_jitter = rng() % 4 == 0 ? 1 : 0;
      Transaction tx;
      switch (rng() % 10) {
        case 0:
        case 1:
        case 2: {
          const std::uint64_t n = state.nonce(authority) + nonce_jitter;
          tx = make_mint(e.cfg, e.keys.authority, v.address(), n, rng() % 6 == 0 ? kEnd + 1 : kStart);
          break;
        }
        case 3: {
          const std::uint64_t n = state.nonce(authority) + nonce_jitter;
          tx = make_sweep(e.cfg, e.keys.authority, v.address(), 1 + rng() % 2, n, pick_ts(true));
          break;
        }
        case 4:
          if (i > 450 && rng() % 6 == 0) {
            tx = make_close(e.cfg, e.keys.authority, state.nonce(authority), pick_ts(true));
            break;
          }
          [[fallthrough]];
        default: {
          Address to = rng() % 8 == 0 ? Address{} : e.cfg.candidates[rng() % 3].address;
          if (rng() % 10 == 0) to = e.cfg.abstain_address;
          tx = make_vote(e.cfg, v, to, state.nonce(v.address()) + nonce_jitter, pick_ts(false));
          if (rng() % 12 == 0) tx.signature.bytes[rng() % 64] ^= 0x10;
          break;
        }
      }
      const auto got = verify_transaction(tx, state, e.cfg);
      const auto want = oracle_verdict(tx, accepted, e.cfg);
      REQUIRE(got == want);
      reasons[got ? std::string(reject_reason_name(*got)) : "Accept"]++;
      if (!got) {
        state.apply(tx);
        accepted.push_back(tx);
      }
    }
    // The generator must exercise both outcomes broadly.
    CHECK(reasons["Accept"] > 20);
    CHECK(reasons.size() >= 6);
  }
}

TEST_SUITE("blocks and chain") {
  TEST_CASE("empty block on genesis") {
    const auto e = test_election();
    Chain chain = Chain::genesis(e.cfg, kStart - 100);
    CHECK(chain.tip().prev_hash.hex() == std::string(64, '0'));
    const Block b = build_block(chain.tip(), chain.state(), {}, "node-1", kStart, e.cfg);
    CHECK(b.index == 1);
    CHECK(b.prev_hash == chain.tip().block_hash);
    CHECK(b.quorum_signatures.empty());
    CHECK(b.block_hash == compute_block_hash(b));
    CHECK(size_kb(b) == 1);
  }

  TEST_CASE("in-block double vote is rejected at the second vote") {
    const auto e = test_election();
    Chain chain = Chain::genesis(e.cfg, kStart - 100);
    const auto voters = fund_voters(chain, e, 2);
    const std::vector<Transaction> txs{
        make_vote(e.cfg, voters[1], e.cfg.candidates[0].address, 0, kStart),
        make_vote(e.cfg, voters[0], e.cfg.candidates[0].address, 0, kStart),
        make_vote(e.cfg, voters[0], e.cfg.candidates[1].address, 1, kStart),
    };
    try {
      (void)build_block(chain.tip(), chain.state(), txs, "node-0", kStart, e.cfg);
      FAIL("expected BuildRejected");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::BuildRejected);
      CHECK(err.detail().rfind("2 ", 0) == 0);
    }
  }

  TEST_CASE("50 seeded random blocks keep their hash through encode/decode") {
    const auto e = test_election(4, 5, 9);
    const Chain chain = build_test_chain(e, 50, 77);
    for (const auto& b : chain.blocks()) {
      const Block back = decode_block(encode(b));
      CHECK(back == b);
      CHECK(compute_block_hash(back) == b.block_hash);
    }
  }

  TEST_CASE("append advances the tip and rejects non-linking or unfinalized blocks") {
    const auto e = test_election();
    Chain chain = Chain::genesis(e.cfg, kStart - 100);
    Block b = build_block(chain.tip(), chain.state(), {}, "node-1", kStart, e.cfg);

    Block unsigned_block = b;
    CHECK_THROWS_WITH_AS(chain.append(unsigned_block), doctest::Contains("NotFinalized"), Error);
    Block minority = b;
    sign_quorum(minority, e, 2);
    CHECK_THROWS_WITH_AS(chain.append(minority), doctest::Contains("NotFinalized"), Error);

    sign_quorum(b, e, 3);
    chain.append(b);
    CHECK(chain.height() == 1);

    Block stale = build_block(chain.blocks()[0], LedgerState{}, {}, "node-2", kStart, e.cfg);
    sign_quorum(stale, e);
    try {
      chain.append(stale);
      FAIL("expected NonLinking");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::NonLinking);
    }
  }

  TEST_CASE("conservation holds over 100 random schedules") {
    const auto e = test_election(3, 3, 21);
    const Address authority = derive_address(e.cfg.authority_key);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      std::mt19937_64 rng(seed);
      Chain chain = Chain::genesis(e.cfg, kStart - 100);
      std::vector<KeyPair> voters;
      const std::size_t n = 3 + rng() % 8;
      for (std::size_t i = 0; i < n; ++i) voters.push_back(seeded_voter_key(seed, i));
      for (int round = 0; round < 4; ++round) {
        std::vector<Transaction> txs;
        LedgerState working = chain.state();
        for (int k = 0; k < 5; ++k) {
          const KeyPair& v = voters[rng() % n];
          Transaction tx = rng() % 2 ? make_mint(e.cfg, e.keys.authority, v.address(), working.nonce(authority), kStart)
                                     : make_vote(e.cfg, v, e.cfg.candidates[rng() % 3].address, 0, kStart + round);
          if (!verify_transaction(tx, working, e.cfg)) {
            working.apply(tx);
            txs.push_back(tx);
          }
        }
        chain.append(finalized_block(chain, e, txs, kStart + round));
        CHECK(chain.state().sum_balances() == chain.state().total_minted);
      }
    }
  }

  TEST_CASE("validate_chain accepts an untampered 100-block chain and replays to the same state") {
    const auto e = test_election(3, 5, 31);
    const Chain chain = build_test_chain(e, 100, 31);
    LedgerState replayed;
    const ChainVerdict v = validate_chain(chain.blocks(), e.cfg, &replayed);
    CHECK(v.valid);
    CHECK(replayed == chain.state());
    CHECK(validate_chain_bytes(encode_chain(chain.blocks()), e.cfg).valid);
  }

  TEST_CASE("single-byte tampering of persisted chain bytes is always detected") {
    const auto e = test_election(3, 3, 41);
    const Chain chain = build_test_chain(e, 30, 41);
    const Bytes bytes = encode_chain(chain.blocks());
    // Record start offsets so a detection can be checked to be at or before
    // the mutated block.
    std::vector<std::size_t> starts;
    for (std::size_t pos = 0; pos < bytes.size();) {
      starts.push_back(pos);
      const std::size_t len = (std::size_t{bytes[pos]} << 24) | (std::size_t{bytes[pos + 1]} << 16) |
                              (std::size_t{bytes[pos + 2]} << 8) | bytes[pos + 3];
      pos += 4 + len;
    }
    std::mt19937_64 rng(41);
    for (int sample = 0; sample < 300; ++sample) {
      const std::size_t offset = rng() % bytes.size();
      Bytes mutated = bytes;
      mutated[offset] ^= static_cast<std::uint8_t>(1 + rng() % 255);
      const ChainVerdict v = validate_chain_bytes(mutated, e.cfg);
      REQUIRE_FALSE(v.valid);
      const auto block_of = static_cast<std::uint64_t>(
          std::upper_bound(starts.begin(), starts.end(), offset) - starts.begin() - 1);
      CHECK(v.first_bad_index <= block_of);
    }
  }

  TEST_CASE("reordering transactions with conflicting nonces is reported as BadNonce") {
    const auto e = test_election();
    Chain chain = Chain::genesis(e.cfg, kStart - 100);
    const Address a1 = seeded_voter_key(8, 1).address();
    const Address a2 = seeded_voter_key(8, 2).address();
    const Transaction m0 = make_mint(e.cfg, e.keys.authority, a1, 0, kStart);
    const Transaction m1 = make_mint(e.cfg, e.keys.authority, a2, 1, kStart);
    Block b = build_block(chain.tip(), chain.state(), std::vector<Transaction>{m0, m1}, "node-1", kStart, e.cfg);
    std::swap(b.transactions[0], b.transactions[1]);
    b.block_hash = compute_block_hash(b);
    sign_quorum(b, e);
    std::vector<Block> blocks = chain.blocks();
    blocks.push_back(b);
    const ChainVerdict v = validate_chain(blocks, e.cfg);
    CHECK_FALSE(v.valid);
    CHECK(v.first_bad_index == 1);
    CHECK(v.fault == ChainFault::InvalidTx);
    CHECK(v.tx_reason == RejectReason::BadNonce);
  }

  TEST_CASE("one key casts at most one vote on any valid chain") {
    const auto e = test_election(3, 5, 51);
    const Chain chain = build_test_chain(e, 60, 51);
    std::map<PublicKey, int> votes;
    for (const auto& b : chain.blocks()) {
      for (const auto& tx : b.transactions) {
        if (tx.kind == TxKind::Vote) CHECK(++votes[tx.from_pubkey] == 1);
      }
    }
    for (std::size_t i = 1; i < chain.length(); ++i) {
      CHECK(chain.blocks()[i].prev_hash == chain.blocks()[i - 1].block_hash);
      CHECK(chain.blocks()[i].block_hash == hash_bytes(canonical_bytes(chain.blocks()[i])));
    }
  }
}

TEST_SUITE("chain file") {
  TEST_CASE("torn final record is discarded in tolerant mode and rejected in strict mode") {
    const auto e = test_election();
    const Chain chain = build_test_chain(e, 5, 3);
    Bytes bytes = encode_chain(chain.blocks());
    bytes.resize(bytes.size() - 7);
    const DecodedChain d = decode_chain(bytes, true);
    CHECK(d.blocks.size() == chain.length() - 1);
    CHECK(d.discarded_tail_bytes > 0);
    CHECK_THROWS_AS(decode_chain(bytes, false), Error);
  }

  TEST_CASE("appended records read back identically") {
    TempDir dir("chainfile");
    const auto e = test_election();
    const Chain chain = build_test_chain(e, 4, 8);
    {
      ChainFile f(dir.path() / "chain.dat");
      for (const auto& b : chain.blocks()) f.append(b);
    }
    const DecodedChain d = decode_chain(read_file(dir.path() / "chain.dat"), false);
    CHECK(d.blocks == chain.blocks());
    CHECK(Chain::from_blocks(e.cfg, d.blocks).state() == chain.state());
  }

  TEST_CASE("election config round-trips through JSON with a stable digest") {
    const auto e = test_election();
    const ElectionConfig back = election_from_json(parse_json(election_to_json(e.cfg).dump()));
    CHECK(back == e.cfg);
    CHECK(back.digest() == e.cfg.digest());
    const Transaction tx = make_vote(e.cfg, seeded_voter_key(1, 1), e.cfg.candidates[0].address, 0, kStart);
    CHECK(transaction_from_json(transaction_to_json(tx)) == tx);
  }
}
