// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every expected value comes from an oracle written here,
// independent of the code under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "chain/chain_file.hpp"
#include "common/durable.hpp"
#include "consensus/cluster.hpp"
#include "economics/economics.hpp"
#include "service_support.hpp"
#include "tally/tally.hpp"

using namespace votechain;
using namespace votechain::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Collects every failed expectation of one criterion.
class Expect {
 public:
  void operator()(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ += !ok;
  }
  Outcome done(const std::string& summary) const {
    if (failed_ == 0) return {true, summary};
    std::string d = std::to_string(failed_) + " of " + std::to_string(checks_) + " checks failed";
    for (const auto& f : failures_) d += "; " + f;
    return {false, d};
  }

 private:
  std::size_t checks_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
};

std::size_t majority_by_search(std::size_t n) {
  std::size_t k = 0;
  while (2 * k <= n) ++k;
  return k;
}

Address choice_address(const ElectionConfig& cfg, int c) {
  return c < 0 ? cfg.abstain_address : cfg.candidates[static_cast<std::size_t>(c)].address;
}

// ---- immutability ----

Outcome immutability() {
  Expect expect;
  const auto e = test_election(3, 5, 101);
  Chain chain = Chain::genesis(e.cfg, kStart - 1000);
  const auto voters = fund_voters(chain, e, 300, 101);
  std::size_t v = 0;
  std::int64_t t = kStart;
  while (chain.length() < 100) {
    std::vector<Transaction> txs;
    for (int k = 0; k < 3 && v < voters.size(); ++k, ++v) {
      txs.push_back(make_vote(e.cfg, voters[v], choice_address(e.cfg, static_cast<int>(v % 4) - 1), 0, t));
    }
    chain.append(finalized_block(chain, e, txs, t++));
  }
  const Bytes bytes = encode_chain(chain.blocks());
  expect(chain.length() == 100, "chain length");
  expect(validate_chain_bytes(bytes, e.cfg).valid, "untouched chain validates");

  std::mt19937_64 rng(4242);
  std::set<std::size_t> offsets{0, bytes.size() - 1};
  for (std::size_t o = 0; o < bytes.size(); o += std::max<std::size_t>(1, bytes.size() / 1000)) offsets.insert(o);
  while (offsets.size() < 1200) offsets.insert(rng() % bytes.size());
  std::size_t detected = 0;
  for (const std::size_t o : offsets) {
    Bytes mutated = bytes;
    mutated[o] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    const bool caught = !validate_chain_bytes(mutated, e.cfg).valid;
    detected += caught;
    expect(caught, "offset " + std::to_string(o) + " undetected");
  }
  return expect.done(std::to_string(detected) + "/" + std::to_string(offsets.size()) + " single-byte flips detected over " +
                     std::to_string(bytes.size()) + " bytes, 100 blocks");
}

// ---- double vote ----

Outcome double_vote() {
  Expect expect;
  constexpr std::size_t kVoters = 1000;
  const auto e = test_election(4, 5, 202);
  consensus::Cluster cluster(e.cfg, e.keys.nodes, Chain::genesis(e.cfg, kStart - 1000));
  cluster.set_time(kStart - 100);
  std::vector<KeyPair> voters;
  for (std::size_t i = 0; i < kVoters; ++i) {
    voters.push_back(seeded_voter_key(202, i));
    cluster.broadcast_tx(i % 5, make_mint(e.cfg, e.keys.authority, voters.back().address(), i, kStart - 100));
  }
  while (!cluster.node(0).mempool().empty()) expect(cluster.propose_and_collect().finalized, "funding block");
  cluster.set_time(kStart + 10);

  // Two ballots per voter, shuffled, with proposals at random points.
  std::mt19937_64 rng(9001);
  std::vector<std::pair<std::size_t, int>> attempts;
  for (std::size_t i = 0; i < kVoters; ++i) {
    attempts.emplace_back(i, static_cast<int>(rng() % 4));
    attempts.emplace_back(i, static_cast<int>(rng() % 4));
  }
  std::shuffle(attempts.begin(), attempts.end(), rng);
  std::size_t accepts = 0;
  std::map<std::string, std::size_t> rejects;
  std::int64_t ts = kStart + 10;
  for (const auto& [i, c] : attempts) {
    const std::size_t origin = rng() % 5;
    const auto r = cluster.broadcast_tx(origin, make_vote(e.cfg, voters[i], e.cfg.candidates[c].address, 0, ++ts));
    const auto it = r.rejected.find(node_id_for(origin));
    if (it == r.rejected.end()) {
      ++accepts;
    } else {
      ++rejects[std::string(reject_reason_name(it->second))];
    }
    if (rng() % 50 == 0) cluster.propose_and_collect();
  }
  for (int guard = 0; guard < 20 && !cluster.node(0).mempool().empty(); ++guard) cluster.propose_and_collect();

  // Count straight from the finalized blocks.
  std::map<PublicKey, std::size_t> per_key;
  std::map<Address, std::uint64_t> received;
  for (const auto& b : cluster.node(0).chain().blocks()) {
    for (const auto& tx : b.transactions) {
      if (tx.kind != TxKind::Vote) continue;
      ++per_key[tx.from_pubkey];
      received[tx.to_address] += tx.amount;
    }
  }
  std::uint64_t candidate_sum = 0;
  for (const auto& c : e.cfg.candidates) candidate_sum += received[c.address];
  const std::size_t double_votes = rejects["DoubleVote"];
  expect(accepts == kVoters, "accepts " + std::to_string(accepts));
  expect(double_votes == kVoters, "DoubleVote rejects " + std::to_string(double_votes));
  expect(rejects.size() == 1, "only DoubleVote rejections");
  expect(per_key.size() == kVoters, "distinct voting keys on chain");
  expect(std::all_of(per_key.begin(), per_key.end(), [](const auto& p) { return p.second == 1; }), "one vote per key");
  expect(candidate_sum == kVoters, "candidate balances sum " + std::to_string(candidate_sum));
  expect(cluster.honest_replicas_identical(), "replicas identical");
  return expect.done(std::to_string(accepts) + " accepted, " + std::to_string(double_votes) +
                     " DoubleVote, candidate sum " + std::to_string(candidate_sum));
}

// ---- tally ----

// Independent counter: replays the raw vote records without the ledger.
std::map<std::string, std::uint64_t> brute_force(const std::vector<Block>& blocks, const ElectionConfig& cfg) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& c : cfg.candidates) out[c.name] = 0;
  for (const auto& b : blocks) {
    for (const auto& tx : b.transactions) {
      if (tx.kind != TxKind::Vote) continue;
      for (const auto& c : cfg.candidates) {
        if (c.address == tx.to_address) out[c.name] += tx.amount;
      }
    }
  }
  return out;
}

Outcome tally_equivalence() {
  Expect expect;
  std::size_t elections = 0, ties = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const std::size_t candidates = 1 + (seed * 7) % 10;
    const std::size_t voters = 1 + (seed * 97) % 500;
    const auto run = seeded_run(seed * 31337, candidates, voters);
    const auto r = audit::tally(run.chain.blocks(), run.e.cfg);
    const auto counts = brute_force(run.chain.blocks(), run.e.cfg);

    // Second oracle: the intended choices of each voter.
    std::vector<std::uint64_t> intended(candidates, 0);
    for (const int c : run.choice) {
      if (c >= 0) ++intended[static_cast<std::size_t>(c)];
    }
    std::uint64_t best = 0;
    for (const auto& [name, n] : counts) best = std::max(best, n);
    std::vector<std::string> winners;
    for (const auto& c : run.e.cfg.candidates) {
      if (counts.at(c.name) == best) winners.push_back(c.name);
    }
    ties += winners.size() > 1;
    const std::string tag = "seed " + std::to_string(seed);
    for (std::size_t k = 0; k < candidates; ++k) {
      const auto& pc = r.per_candidate[k];
      expect(pc.balance == counts.at(pc.name), tag + " brute-force " + pc.name);
      expect(pc.balance == intended[k], tag + " intended " + pc.name);
    }
    expect(r.winners == winners, tag + " winners");
    ++elections;
  }
  return expect.done(std::to_string(elections) + " elections match both oracles; " + std::to_string(ties) +
                     " tied outcomes reported as sets");
}

// ---- conservation ----

Outcome conservation() {
  Expect expect;
  std::size_t runs = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto run = seeded_run(seed * 104729, 1 + seed % 6, 20 + seed * 3);
    const ElectionConfig& cfg = run.e.cfg;
    auto check = [&](const Chain& chain, bool swept) {
      // Independent replay of balances from the raw transfers.
      std::map<Address, std::int64_t> bal;
      std::uint64_t minted = 0;
      for (const auto& b : chain.blocks()) {
        for (const auto& tx : b.transactions) {
          if (tx.kind == TxKind::Mint) minted += tx.amount;
          if (tx.kind == TxKind::Vote || tx.kind == TxKind::Sweep) bal[derive_address(tx.from_pubkey)] -= tx.amount;
          if (tx.kind != TxKind::Close) bal[tx.to_address] += tx.amount;
        }
      }
      std::uint64_t held = 0;
      for (const auto& [addr, n] : bal) {
        if (addr != cfg.abstain_address && !cfg.candidate_by_address(addr)) held += static_cast<std::uint64_t>(n);
      }
      const auto r = audit::tally(chain.blocks(), cfg);
      std::uint64_t sum = 0;
      for (const auto& c : r.per_candidate) sum += c.balance;
      const std::string tag = "seed " + std::to_string(seed) + (swept ? " after" : " before");
      expect(r.total_minted == minted, tag + " minted");
      expect(r.unswept_residue == held, tag + " residue");
      expect(sum + r.abstain_balance + r.unswept_residue == r.total_minted, tag + " conservation");
      if (swept) {
        expect(held == 0, tag + " nothing left outside candidates and abstain");
        expect(sum + r.abstain_balance == r.total_minted, tag + " exact");
      }
    };
    check(run.chain, false);
    const auto plan = audit::sweep_abstain(run.chain.state(), cfg, run.e.keys.authority, kEnd + 1);
    run.chain.append(finalized_block(run.chain, run.e, plan.all(), kEnd + 1));
    check(run.chain, true);
    ++runs;
  }
  return expect.done(std::to_string(runs) + " seeded runs conserve tokens before and after sweep_abstain");
}

// ---- quorum ----

Outcome quorum() {
  Expect expect;
  std::size_t cases = 0;
  for (const std::size_t n : {3u, 5u, 7u}) {
    const auto e = test_election(2, n, 300 + n);
    Chain chain = Chain::genesis(e.cfg, kStart - 100);
    for (std::size_t k = 0; k <= n; ++k) {
      Block b = build_block(chain.tip(), chain.state(), {}, node_id_for(0), kStart - 50, e.cfg);
      sign_quorum(b, e, k);
      const bool accepted = !chain.check_successor(b).has_value();
      expect(accepted == (k >= majority_by_search(n)), "n=" + std::to_string(n) + " k=" + std::to_string(k));
      ++cases;
    }
    // One signer repeated never counts more than once.
    Block padded = build_block(chain.tip(), chain.state(), {}, node_id_for(0), kStart - 50, e.cfg);
    for (std::size_t k = 0; k < n; ++k) padded.quorum_signatures.push_back({node_id_for(0), sign_block(padded, e.keys.nodes[0])});
    expect(chain.check_successor(padded).has_value(), "repeated signer refused");
  }

  // Scripted minority partition, 20 seeded runs over the three roster sizes.
  std::size_t stalled = 0, discarded_ok = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = std::array<std::size_t, 3>{3, 5, 7}[seed % 3];
    const auto e = test_election(2, n, 400 + seed);
    std::vector<Json> events;
    consensus::Cluster cluster(e.cfg, e.keys.nodes, Chain::genesis(e.cfg, kStart - 100), {},
                               [&](const Json& ev) { events.push_back(ev); });
    cluster.set_time(kStart - 50);
    std::vector<KeyPair> voters;
    for (std::size_t i = 0; i < 4; ++i) {
      voters.push_back(seeded_voter_key(seed, i));
      cluster.broadcast_tx(0, make_mint(e.cfg, e.keys.authority, voters.back().address(), i, kStart - 50));
    }
    expect(cluster.propose_and_collect().finalized, "funding");
    cluster.set_time(kStart + 5);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t minority_size = 1 + rng() % (majority_by_search(n) - 1);
    std::vector<std::string> minority, majority;
    for (std::size_t i = 0; i < n; ++i) (i < minority_size ? minority : majority).push_back(node_id_for(order[i]));
    cluster.set_partition({minority, majority});

    cluster.broadcast_tx(order[0], make_vote(e.cfg, voters[0], e.cfg.candidates[0].address, 0, kStart + 5));
    cluster.broadcast_tx(order[n - 1], make_vote(e.cfg, voters[1], e.cfg.candidates[1].address, 0, kStart + 5));
    const auto minority_round = cluster.propose_from(order[0]);
    const auto majority_round = cluster.propose_from(order[n - 1]);
    const std::string tag = "seed " + std::to_string(seed) + " n=" + std::to_string(n);
    expect(!minority_round.finalized && minority_round.signatures == minority_size, tag + " minority stalls");
    expect(majority_round.finalized, tag + " majority finalizes");
    stalled += !minority_round.finalized;

    events.clear();
    cluster.heal();
    std::set<std::string> discarded;
    for (const auto& ev : events) {
      if (ev["event"] == "fork_discarded" && minority_round.block &&
          ev["block_hash"] == minority_round.block->block_hash.hex()) {
        discarded.insert(ev["node"].get<std::string>());
      }
    }
    const std::set<std::string> expected_discards(minority.begin(), minority.end());
    bool same_tip = majority_round.block.has_value();
    for (std::size_t i = 0; i < n && same_tip; ++i) {
      same_tip = cluster.node(i).chain().tip().block_hash == majority_round.block->block_hash;
    }
    const bool ok = discarded == expected_discards && same_tip && cluster.honest_replicas_identical();
    expect(ok, tag + " fork discarded on heal");
    discarded_ok += ok;
  }
  return expect.done(std::to_string(cases) + " signature counts over n in {3,5,7} finalize iff >= floor(n/2)+1; " +
                     std::to_string(stalled) + "/20 minority partitions stalled, " + std::to_string(discarded_ok) +
                     "/20 forks discarded on heal");
}

// ---- latency ----

Outcome latency() {
  Expect expect;
  ServiceHarness h(40, "accept-latency");
  h.create_election(3);
  expect(h.svc().config().nodes == 5, "five nodes");
  std::vector<double> ms;
  for (std::size_t i = 0; i < 30; ++i) {
    // Everything up to the ballot, then time the ballot alone.
    const auto steps = h.voter_flow(i, 0, 1);
    std::string sid;
    for (const auto& st : steps) {
      if (st.route == "/liveness/frame") sid = st.response.body.value("session_id", std::string{});
    }
    for (std::size_t f = 1; f < 3; ++f) h.post("/liveness/frame", {{"session_id", sid}, {"frame", "0a0b0c"}});
    const ElectionConfig cfg = h.election();
    const Transaction tx = make_vote(cfg, seeded_voter_key(31, i), cfg.candidates[i % 3].address, 0, h.now());
    const Json body{{"session_id", sid}, {"candidate_address", cfg.candidates[i % 3].address.hex()},
                    {"transaction", transaction_to_json(tx)}};
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = h.post("/vote", body, {{"idempotency-key", "lat-" + std::to_string(i)}});
    const auto t1 = std::chrono::steady_clock::now();
    expect(r.status == 200 && r.body.value("status", "") == "finalized", "vote " + std::to_string(i) + " finalized");
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(ms.begin(), ms.end());
  expect(ms.back() < 2000.0, "max latency under 2 s");
  std::ostringstream d;
  d.precision(1);
  d << std::fixed << ms.size() << " votes finalized on 5 nodes; median " << ms[ms.size() / 2] << " ms, max " << ms.back()
    << " ms (budget 2000 ms)";
  return expect.done(d.str());
}

// ---- economics ----

Outcome economics_model() {
  Expect expect;
  namespace econ = votechain::economics;
  const econ::CostParams p;
  const auto r = econ::cost_estimate(p);
  // Component sums.
  const std::uint64_t first = 4'000'000ULL + 100'000'010ULL;
  const std::uint64_t ballots = 100'000'000ULL * 2ULL;
  expect(r.first_cycle_total == first, "first cycle " + std::to_string(r.first_cycle_total));
  expect(r.subsequent_cycle_total == 50'000'010ULL, "subsequent " + std::to_string(r.subsequent_cycle_total));
  expect(r.paper_ballot_total == ballots, "paper ballots " + std::to_string(r.paper_ballot_total));
  expect(r.first_cycle_total != 104'000'000'000ULL, "printed figure not reproduced");
  expect(econ::feasibility(90.0) == econ::Feasibility::Feasible, "90 feasible");
  expect(econ::feasibility(std::nextafter(90.0, 0.0)) == econ::Feasibility::Infeasible, "just below 90 infeasible");
  expect(econ::feasibility(89.9) == econ::Feasibility::Infeasible, "89.9 infeasible");
  expect(econ::feasibility(100.0) == econ::Feasibility::Feasible, "100 feasible");
  return expect.done("first cycle " + std::to_string(r.first_cycle_total) + ", subsequent " +
                     std::to_string(r.subsequent_cycle_total) + ", paper ballots " + std::to_string(r.paper_ballot_total) +
                     "; feasibility flips at exactly 90%");
}

// ---- privacy ----

void collect_keys(const Json& j, std::set<std::string>& keys) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      keys.insert(k);
      collect_keys(v, keys);
    }
  } else if (j.is_array()) {
    for (const auto& v : j) collect_keys(v, keys);
  }
}

Outcome privacy() {
  Expect expect;
  constexpr std::size_t kVoters = 40;
  ServiceHarness h(kVoters, "accept-privacy");
  h.create_election(3);
  for (std::size_t i = 0; i < kVoters; ++i) {
    if (i % 7 == 6) {
      h.voter_flow(i, 0, 0);
    } else {
      expect(h.voter_flow(i, static_cast<int>(i % 4) - 1).back().ok(), "voter " + std::to_string(i));
    }
  }
  h.set_time(kEnd + 1);
  expect(h.admin_post("/admin/election/close", Json::object()).status == 200, "close");

  std::vector<std::string> bodies;
  std::set<std::string> keys;
  auto fetch = [&](const std::string& path, std::map<std::string, std::string> q = {}) {
    const auto r = h.get(path, std::move(q));
    collect_keys(r.body, keys);
    bodies.push_back(r.text());
    return r;
  };
  fetch("/public/election");
  fetch("/public/results");
  const auto page = fetch("/public/blocks", {{"page", "1"}, {"size", "1000"}});
  for (const auto& row : page.body["rows"]) fetch("/public/blocks/" + row["block_hash"].get<std::string>());
  for (std::size_t i = 0; i < kVoters; ++i) fetch("/public/verify/" + seeded_voter_key(31, i).public_key().hex());
  const auto chain = h.svc().chain();
  std::string raw_chain;
  for (const Bytes& b : {encode_chain(chain), read_file(h.config().data_dir / "chain.dat")}) {
    raw_chain.append(reinterpret_cast<const char*>(b.data()), b.size());
  }

  const std::set<std::string> identity_fields{"national_id", "first_name", "last_name", "full_name", "email", "dob",
                                              "phone", "voter_card_number", "city", "address_line", "postal_address",
                                              "photo", "video", "name_on_card"};
  for (const auto& f : identity_fields) expect(!keys.contains(f), "public field " + f);
  std::size_t values = 0, hits = 0;
  for (std::size_t i = 0; i < kVoters; ++i) {
    const Json form = voter_form(i);
    for (const auto& [field, value] : form.items()) {
      const std::string v = value.get<std::string>();
      ++values;
      bool found = raw_chain.find(v) != std::string::npos;
      for (const auto& b : bodies) found = found || b.find(v) != std::string::npos;
      hits += found;
      expect(!found, "value of " + field + " for voter " + std::to_string(i));
    }
  }
  return expect.done(std::to_string(bodies.size()) + " public responses and " + std::to_string(raw_chain.size()) +
                     " chain bytes scanned for " + std::to_string(values) + " identity values: " +
                     std::to_string(hits) + " occurrences");
}

// ---- crash recovery ----

Outcome crash_recovery() {
  Expect expect;
  auto script = [](ServiceHarness& h, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) h.voter_flow(i, static_cast<int>(i % 4) - 1);
  };
  std::uint64_t total = 0;
  {
    ServiceHarness h(64, "accept-crash-count");
    h.create_election();
    durable::arm_crash(UINT64_MAX, 0);
    script(h, 0, 8);
    total = durable::writes_since_arm();
    durable::disarm();
  }
  std::mt19937_64 rng(777);
  std::size_t crashed = 0, recovered = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint64_t point = rng() % total;
    const std::string tag = "crash at write " + std::to_string(point);
    ServiceHarness h(64, "accept-crash");
    h.create_election();
    durable::arm_crash(point, rng() % 256);
    try {
      script(h, 0, 8);
    } catch (const durable::CrashInjected&) {
      ++crashed;
    }
    durable::disarm();
    h.close();
    try {
      h.open();
    } catch (const std::exception& ex) {
      expect(false, tag + ": restart failed: " + ex.what());
      continue;
    }
    const auto blocks = h.svc().chain();
    const ElectionConfig cfg = h.election();
    const bool chain_ok = validate_chain(blocks, cfg).valid;
    const auto invariants = h.svc().check_invariants();
    std::map<Address, int> mints;
    std::map<PublicKey, int> votes;
    for (const auto& b : blocks) {
      for (const auto& tx : b.transactions) {
        if (tx.kind == TxKind::Mint) ++mints[tx.to_address];
        if (tx.kind == TxKind::Vote) ++votes[tx.from_pubkey];
      }
    }
    const bool unique = std::all_of(mints.begin(), mints.end(), [](const auto& m) { return m.second == 1; }) &&
                        std::all_of(votes.begin(), votes.end(), [](const auto& v) { return v.second == 1; });
    expect(chain_ok, tag + ": chain invalid");
    expect(invariants.empty(), tag + ": " + (invariants.empty() ? "" : invariants.front()));
    expect(unique, tag + ": duplicate mint or vote");
    // The election carries on after the restart.
    script(h, 8, 10);
    expect(h.svc().check_invariants().empty(), tag + ": invariants after resuming");
    recovered += chain_ok && invariants.empty() && unique;
  }
  expect(crashed == 50, "every armed point crashed");
  return expect.done(std::to_string(recovered) + "/50 restarts valid (chain, registry invariants, unique mints and " +
                     "votes) over " + std::to_string(total) + " durable writes");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"immutability", immutability},
      {"double-vote-prevention", double_vote},
      {"tally-oracle-equivalence", tally_equivalence},
      {"conservation", conservation},
      {"quorum-51-percent", quorum},
      {"settlement-latency", latency},
      {"economic-model", economics_model},
      {"privacy-boundary", privacy},
      {"crash-recovery", crash_recovery},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
