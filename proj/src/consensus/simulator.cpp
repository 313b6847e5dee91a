// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "consensus/simulator.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "chain/election_setup.hpp"
#include "chain/json_codec.hpp"

namespace votechain::consensus {

namespace {

constexpr std::int64_t kSimEpoch = 1'700'000'000;
constexpr std::int64_t kSimWindow = 30 * 86'400;

}  // namespace

void SimScenario::validate() const {
  if (nodes == 0) throw Error(ErrorCode::Config, "nodes must be positive");
  if (candidates == 0) throw Error(ErrorCode::Config, "candidates must be positive");
  if (rounds < 0 || block_interval <= 0) throw Error(ErrorCode::Config, "rounds/block_interval out of range");
  if (rounds * block_interval >= kSimWindow / 2) throw Error(ErrorCode::Config, "schedule longer than the window");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < nodes; ++i) ids.insert(node_id_for(i));
  auto known = [&](const std::string& id) {
    if (!ids.contains(id)) throw Error(ErrorCode::Config, "unknown node " + id);
  };
  std::int64_t last = 0;
  for (const auto& p : partition_schedule) {
    if (p.time < last) throw Error(ErrorCode::Config, "partition_schedule times decrease");
    last = p.time;
    std::set<std::string> covered;
    for (const auto& g : p.groups) {
      for (const auto& id : g) {
        known(id);
        if (!covered.insert(id).second) throw Error(ErrorCode::Config, "node in two partition groups: " + id);
      }
    }
    if (covered.size() != nodes) throw Error(ErrorCode::Config, "partition does not cover all nodes");
  }
  last = 0;
  for (const auto& t : tx_schedule) {
    if (t.time < last) throw Error(ErrorCode::Config, "tx_schedule times decrease");
    last = t.time;
    known(t.origin);
    if (!t.raw && (t.voter >= voters || t.candidate < -1 || t.candidate >= static_cast<int>(candidates))) {
      throw Error(ErrorCode::Config, "tx_schedule entry references an unknown voter or candidate");
    }
  }
  std::set<std::string> byz;
  for (const auto& b : byzantine_nodes) {
    known(b.node_id);
    if (!byz.insert(b.node_id).second) throw Error(ErrorCode::Config, "byzantine node listed twice");
  }
}

SimScenario scenario_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Config, "scenario must be a JSON object");
  SimScenario s;
  try {
    s.seed = j.value("seed", std::uint64_t{0});
    s.nodes = j.value("nodes", s.nodes);
    s.candidates = j.value("candidates", s.candidates);
    s.voters = j.value("voters", s.voters);
    s.rounds = j.value("rounds", s.rounds);
    s.block_interval = j.value("block_interval", s.block_interval);
    s.settle = j.value("settle", s.settle);
    for (const auto& p : j.value("partition_schedule", Json::array())) {
      PartitionEvent ev;
      ev.time = require_int(p, "time");
      ev.groups = require(p, "groups").get<std::vector<std::vector<std::string>>>();
      s.partition_schedule.push_back(std::move(ev));
    }
    for (const auto& t : j.value("tx_schedule", Json::array())) {
      TxEvent ev;
      ev.time = require_int(t, "time");
      ev.origin = t.value("origin", ev.origin);
      if (t.contains("tx")) {
        ev.raw = transaction_from_json(t.at("tx"));
      } else {
        ev.voter = static_cast<std::uint64_t>(require_int(t, "voter"));
        ev.candidate = static_cast<int>(t.value("candidate", 0));
      }
      s.tx_schedule.push_back(std::move(ev));
    }
    for (const auto& b : j.value("byzantine_nodes", Json::array())) {
      ByzantineNode node;
      if (b.is_string()) {
        node.node_id = b.get<std::string>();
      } else {
        node.node_id = require_string(b, "node_id");
        const auto name = b.value("behavior", std::string("SignInvalid"));
        const auto behavior = parse_behavior(name);
        if (!behavior || *behavior == Behavior::Honest) throw Error(ErrorCode::Config, "unknown behavior " + name);
        node.behavior = *behavior;
        node.at = b.value("at", std::int64_t{0});
      }
      s.byzantine_nodes.push_back(std::move(node));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  s.validate();
  return s;
}

Json scenario_to_json(const SimScenario& s) {
  Json j;
  j["seed"] = s.seed;
  j["nodes"] = s.nodes;
  j["candidates"] = s.candidates;
  j["voters"] = s.voters;
  j["rounds"] = s.rounds;
  j["block_interval"] = s.block_interval;
  j["settle"] = s.settle;
  j["partition_schedule"] = Json::array();
  for (const auto& p : s.partition_schedule) j["partition_schedule"].push_back({{"time", p.time}, {"groups", p.groups}});
  j["tx_schedule"] = Json::array();
  for (const auto& t : s.tx_schedule) {
    Json e{{"time", t.time}, {"origin", t.origin}};
    if (t.raw) {
      e["tx"] = transaction_to_json(*t.raw);
    } else {
      e["voter"] = t.voter;
      e["candidate"] = t.candidate;
    }
    j["tx_schedule"].push_back(std::move(e));
  }
  j["byzantine_nodes"] = Json::array();
  for (const auto& b : s.byzantine_nodes) {
    j["byzantine_nodes"].push_back({{"node_id", b.node_id}, {"behavior", behavior_name(b.behavior)}, {"at", b.at}});
  }
  return j;
}

std::string SimTrace::to_jsonl() const {
  std::string out;
  for (const auto& e : events) {
    out += e.dump();
    out += '\n';
  }
  Json summary{{"event", "replicas"}, {"honest_identical", honest_identical}, {"replicas", Json::array()}};
  for (const auto& r : replicas) {
    summary["replicas"].push_back({{"node_id", r.node_id},
                                   {"behavior", r.behavior},
                                   {"length", r.length},
                                   {"tip_hash", r.tip_hash},
                                   {"valid", r.valid}});
  }
  out += summary.dump();
  out += '\n';
  return out;
}

SimTrace run_simulation(const SimScenario& scenario) {
  scenario.validate();
  SimTrace trace;

  ElectionSpec spec;
  spec.election_id = "sim-" + std::to_string(scenario.seed);
  for (std::size_t i = 0; i < scenario.candidates; ++i) spec.candidates.push_back("Candidate " + std::to_string(i + 1));
  spec.start_time = kSimEpoch;
  spec.end_time = kSimEpoch + kSimWindow;
  spec.nodes = scenario.nodes;
  const SeededElection e = make_election(spec, scenario.seed);

  Cluster cluster(e.cfg, e.keys.nodes, Chain::genesis(e.cfg, kSimEpoch - 60), {},
                  [&](const Json& ev) { trace.events.push_back(ev); });
  cluster.set_time(kSimEpoch - 60);
  trace.events.push_back({{"t", kSimEpoch - 60},
                          {"event", "start"},
                          {"seed", scenario.seed},
                          {"election_id", e.cfg.election_id},
                          {"nodes", scenario.nodes},
                          {"threshold", e.cfg.quorum_threshold}});

  std::vector<std::pair<std::int64_t, std::size_t>> rewrites;
  for (const auto& b : scenario.byzantine_nodes) {
    const std::size_t i = *cluster.index_of(b.node_id);
    if (b.behavior == Behavior::RewriteChain) {
      rewrites.emplace_back(b.at, i);
    } else {
      cluster.node(i).set_behavior(b.behavior);
    }
  }

  // Registration: every seeded voter is funded before the window opens.
  std::vector<KeyPair> voters;
  for (std::uint64_t v = 0; v < scenario.voters; ++v) {
    voters.push_back(seeded_voter_key(scenario.seed, v));
    cluster.broadcast_tx(0, make_mint(e.cfg, e.keys.authority, voters.back().address(), v, kSimEpoch - 30));
  }

  std::size_t next_partition = 0;
  std::size_t next_tx = 0;
  std::size_t next_rewrite = 0;
  std::sort(rewrites.begin(), rewrites.end());
  for (std::int64_t r = 0; r < scenario.rounds; ++r) {
    const std::int64_t t = r * scenario.block_interval;
    cluster.set_time(kSimEpoch + t);
    while (next_partition < scenario.partition_schedule.size() && scenario.partition_schedule[next_partition].time <= t) {
      cluster.set_partition(scenario.partition_schedule[next_partition++].groups);
    }
    while (next_rewrite < rewrites.size() && rewrites[next_rewrite].first <= t) {
      cluster.compromise(rewrites[next_rewrite++].second);
    }
    while (next_tx < scenario.tx_schedule.size() && scenario.tx_schedule[next_tx].time <= t) {
      const TxEvent& ev = scenario.tx_schedule[next_tx++];
      Transaction tx;
      if (ev.raw) {
        tx = *ev.raw;
      } else {
        const Address to = ev.candidate < 0 ? e.cfg.abstain_address : e.cfg.candidates[ev.candidate].address;
        tx = make_vote(e.cfg, voters[ev.voter], to, 0, kSimEpoch + ev.time);
      }
      cluster.broadcast_tx(*cluster.index_of(ev.origin), tx);
    }
    cluster.propose_and_collect();
  }

  if (scenario.settle) {
    std::int64_t t = scenario.rounds * scenario.block_interval;
    cluster.set_time(kSimEpoch + t);
    cluster.heal();
    // Drain: stop after a finalized round once no honest mempool holds work.
    bool finalized_once = false;
    for (std::size_t attempt = 0; attempt < 4 * scenario.nodes + 4; ++attempt) {
      bool pending = false;
      for (std::size_t i = 0; i < cluster.size(); ++i) {
        if (cluster.node(i).honest() && !cluster.node(i).mempool().empty()) pending = true;
      }
      if (finalized_once && !pending) break;
      t += scenario.block_interval;
      cluster.set_time(kSimEpoch + t);
      finalized_once = cluster.propose_and_collect().finalized || finalized_once;
    }
    cluster.sync();
  }

  const auto invalid = cluster.cross_validate();
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    const Node& n = cluster.node(i);
    trace.replicas.push_back({n.id(), std::string(behavior_name(n.behavior())), n.chain().length(),
                              n.chain().tip().block_hash.hex(),
                              std::find(invalid.begin(), invalid.end(), n.id()) == invalid.end()});
  }
  trace.honest_identical = cluster.honest_replicas_identical();
  return trace;
}

SimScenario random_scenario(std::uint64_t seed, std::size_t nodes) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };

  SimScenario s;
  s.seed = seed;
  s.nodes = nodes;
  s.candidates = static_cast<std::size_t>(uniform(2, 4));
  s.voters = static_cast<std::size_t>(uniform(8, 24));
  s.rounds = uniform(12, 30);

  std::vector<std::string> ids;
  for (std::size_t i = 0; i < nodes; ++i) ids.push_back(node_id_for(i));
  std::int64_t t = 0;
  const std::int64_t splits = uniform(0, 2);
  for (std::int64_t k = 0; k < splits; ++k) {
    t = uniform(t, s.rounds - 1);
    auto shuffled = ids;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto cut = static_cast<std::ptrdiff_t>(uniform(1, static_cast<std::int64_t>(nodes) - 1));
    s.partition_schedule.push_back(
        {t, {{shuffled.begin(), shuffled.begin() + cut}, {shuffled.begin() + cut, shuffled.end()}}});
    if (uniform(0, 1) == 1) {
      t = uniform(t, s.rounds - 1);
      s.partition_schedule.push_back({t, {ids}});
    }
  }

  for (std::uint64_t v = 0; v < s.voters; ++v) {
    TxEvent ev;
    ev.time = uniform(0, s.rounds - 1);
    ev.origin = ids[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(nodes) - 1))];
    ev.voter = v;
    ev.candidate = static_cast<int>(uniform(-1, static_cast<std::int64_t>(s.candidates) - 1));
    s.tx_schedule.push_back(ev);
    if (uniform(0, 5) == 0) {  // a second ballot from the same key
      ev.time = uniform(ev.time, s.rounds - 1);
      ev.candidate = static_cast<int>(uniform(0, static_cast<std::int64_t>(s.candidates) - 1));
      s.tx_schedule.push_back(ev);
    }
  }
  std::stable_sort(s.tx_schedule.begin(), s.tx_schedule.end(),
                   [](const TxEvent& a, const TxEvent& b) { return a.time < b.time; });
  return s;
}

}  // namespace votechain::consensus
