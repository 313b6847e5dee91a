// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "service/service.hpp"


#include <chrono>
#include <fstream>
#include <set>

#include "arbitration/arbitration.hpp"
#include "chain/chain_file.hpp"
#include "chain/crypto.hpp"
#include "chain/json_codec.hpp"
#include "common/durable.hpp"
#include "common/event_log.hpp"
#include "consensus/cluster.hpp"
#include "economics/economics.hpp"
#include "registry/registry.hpp"
#include "service/log.hpp"
#include "tally/tally.hpp"

namespace votechain::service {

namespace fs = std::filesystem;

// ---- config ----

std::string_view tls_mode_name(TlsMode mode) { return mode == TlsMode::Required ? "required" : "test_plaintext"; }

TlsMode parse_tls_mode(std::string_view name) {
  if (name == "required") return TlsMode::Required;
  if (name == "test_plaintext") return TlsMode::TestPlaintext;
  throw Error(ErrorCode::Config, "tls_mode must be required or test_plaintext");
}

ServiceConfig ServiceConfig::from_json(const Json& j) {
  try {
    ServiceConfig c;
    c.bind_host = j.value("bind_host", c.bind_host);
    c.port = j.value("port", c.port);
    c.data_dir = j.value("data_dir", std::string{});
    if (j.contains("election_config")) c.election_config = j["election_config"].get<std::string>();
    if (j.contains("gov_registry")) c.gov_registry = j["gov_registry"].get<std::string>();
    c.tls_mode = parse_tls_mode(j.value("tls_mode", std::string("required")));
    if (j.contains("tls_cert")) c.tls_cert = j["tls_cert"].get<std::string>();
    if (j.contains("tls_key")) c.tls_key = j["tls_key"].get<std::string>();
    c.provisional_results = j.value("provisional_results", false);
    c.nodes = j.value("nodes", c.nodes);
    c.admin_token = j.value("admin_token", std::string{});
    c.min_liveness_frames = j.value("min_liveness_frames", c.min_liveness_frames);
    if (j.contains("key_seed")) c.key_seed = j["key_seed"].get<std::uint64_t>();
    return c;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Config, e.what());
  }
}

void ServiceConfig::validate() const {
  if (data_dir.empty()) throw Error(ErrorCode::Config, "data_dir is required");
  if (tls_mode == TlsMode::Required && (!tls_cert || !tls_key)) {
    throw Error(ErrorCode::Config, "tls_mode=required needs tls_cert and tls_key");
  }
  if (nodes < 1) throw Error(ErrorCode::Config, "at least one node");
}

// ---- error mapping ----

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::MalformedField:
    case ErrorCode::DecodeError:
    case ErrorCode::MalformedTransaction:
    case ErrorCode::EmptyFrame:
    case ErrorCode::BallotMismatch:
    case ErrorCode::KeyMismatch:
    case ErrorCode::IdempotencyKeyRequired:
      return 400;
    case ErrorCode::Unauthorized:
    case ErrorCode::InvalidSession:
    case ErrorCode::WrongCode:
      return 401;
    case ErrorCode::NotVerified:
    case ErrorCode::NotGranted:
    case ErrorCode::NotKeyBound:
    case ErrorCode::NotRegistered:
    case ErrorCode::InsufficientLiveness:
    case ErrorCode::OutsideRegistrationWindow:
    case ErrorCode::WindowClosed:
      return 403;
    case ErrorCode::NotFound:
    case ErrorCode::UnknownVoter:
    case ErrorCode::UnknownSession:
    case ErrorCode::PageOutOfRange:
      return 404;
    case ErrorCode::DuplicateNationalId:
    case ErrorCode::AlreadyBound:
    case ErrorCode::KeyInUse:
    case ErrorCode::AlreadyGranted:
    case ErrorCode::AlreadyVoted:
    case ErrorCode::DoubleVote:
    case ErrorCode::DuplicateMint:
    case ErrorCode::ElectionExists:
    case ErrorCode::AlreadySwept:
    case ErrorCode::InvalidState:
    case ErrorCode::SessionNotOpen:
    case ErrorCode::WindowStillOpen:
    case ErrorCode::NoElection:
    case ErrorCode::NoChallenge:
      return 409;
    case ErrorCode::Expired:
      return 410;
    case ErrorCode::BadSignature:
    case ErrorCode::OutsideWindow:
    case ErrorCode::InsufficientBalance:
    case ErrorCode::BadNonce:
    case ErrorCode::UnknownRecipient:
    case ErrorCode::InvalidTx:
    case ErrorCode::BuildRejected:
    case ErrorCode::NonLinking:
    case ErrorCode::NotFinalized:
      return 422;
    case ErrorCode::Exhausted:
      return 429;
    default:
      return 500;
  }
}

Response error_response(const Error& e) {
  return {http_status_for(e.code()),
          Json{{"error", {{"code", std::string(error_code_name(e.code()))}, {"message", e.detail()}}}}};
}

Json RestoreReport::to_json() const {
  return {{"chain_blocks", chain_blocks},
          {"discarded_chain_bytes", discarded_chain_bytes},
          {"registry_events", registry_events},
          {"discarded_registry_bytes", discarded_registry_bytes},
          {"discarded_log_bytes", discarded_log_bytes},
          {"pending_rebroadcast", pending_rebroadcast},
          {"grants_reconciled", grants_reconciled},
          {"votes_reconciled", votes_reconciled}};
}

// ---- election files ----

ElectionSpec election_spec_from_json(const Json& j) {
  try {
    ElectionSpec s;
    s.election_id = require_string(j, "election_id");
    s.candidates.clear();
    for (const auto& c : require(j, "candidates")) s.candidates.push_back(c.get<std::string>());
    s.start_time = require_int(j, "start_time");
    s.end_time = require_int(j, "end_time");
    s.token_amount = j.value("token_amount", std::uint64_t{1});
    s.nodes = j.value("nodes", std::size_t{5});
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, e.what());
  }
}

Json election_spec_to_json(const ElectionSpec& s) {
  return {{"election_id", s.election_id}, {"candidates", s.candidates}, {"start_time", s.start_time},
          {"end_time", s.end_time},       {"token_amount", s.token_amount}, {"nodes", s.nodes}};
}

namespace {

std::string read_text(const fs::path& p) {
  const Bytes b = read_file(p);
  return {b.begin(), b.end()};
}

void write_secret(const fs::path& p, std::string_view text) {
  write_file_atomic(p, as_bytes(text));
  fs::permissions(p, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
}

KeyPair load_key(const fs::path& p) {
  try {
    return KeyPair::from_seed(from_hex(read_text(p)));
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptStore, p.filename().string() + ": " + e.detail());
  }
}

fs::path node_key_path(const DataPaths& paths, std::size_t i) {
  return paths.keys() / (node_id_for(i) + ".key");
}

Bytes derive_secret(ByteView root, std::string_view purpose) {
  Bytes buf(root.begin(), root.end());
  buf.insert(buf.end(), purpose.begin(), purpose.end());
  const Digest32 d = hash_bytes(buf);
  return {d.bytes.begin(), d.bytes.end()};
}

}  // namespace

SeededElection init_election(const fs::path& data_dir, const ElectionSpec& spec, std::optional<std::uint64_t> key_seed,
                             std::int64_t now) {
  const DataPaths paths{data_dir};
  if (fs::exists(paths.election())) throw Error(ErrorCode::ElectionExists, "data directory already holds an election");
  SeededElection e;
  try {
    if (key_seed) {
      e = make_election(spec, *key_seed);
    } else {
      ElectionKeys keys{KeyPair::generate(), {}};
      for (std::size_t i = 0; i < spec.nodes; ++i) keys.nodes.push_back(KeyPair::generate());
      e = make_election(spec, std::move(keys));
    }
  } catch (const Error& err) {
    if (err.code() == ErrorCode::Config) throw Error(ErrorCode::InvalidArgument, err.detail());
    throw;
  }
  fs::create_directories(paths.keys());
  write_secret(paths.keys() / "authority.key", to_hex(e.keys.authority.seed()));
  for (std::size_t i = 0; i < e.keys.nodes.size(); ++i) write_secret(node_key_path(paths, i), to_hex(e.keys.nodes[i].seed()));
  const Chain genesis = Chain::genesis(e.cfg, now);
  write_file_atomic(paths.chain(), encode_chain(genesis.blocks()));
  // election.json last: its presence marks a complete initialization.
  const Json doc{{"spec", election_spec_to_json(spec)}, {"config", election_to_json(e.cfg)}};
  write_file_atomic(paths.election(), as_bytes(doc.dump(2) + "\n"));
  return e;
}

// ---- service internals ----

namespace {

// Forwards through node-0 and journals the outcome.
class JournalingGateway : public arbitration::TxGateway {
 public:
  JournalingGateway(consensus::Cluster& cluster, EventLog& pending, EventLog& rejections,
                    std::vector<RejectReason>& rejected)
      : inner_(cluster, 0), pending_(pending), rejections_(rejections), rejected_(rejected) {}

  std::optional<RejectReason> submit(const Transaction& tx) override {
    const auto reason = inner_.submit(tx);
    if (reason) {
      if (tx.kind == TxKind::Vote) {
        rejections_.append({{"reason", std::string(reject_reason_name(*reason))}});
        rejected_.push_back(*reason);
      }
    } else {
      pending_.append({{"tx", transaction_to_json(tx)}});
    }
    return reason;
  }
  bool key_spent(const PublicKey& key) const override { return inner_.key_spent(key); }

 private:
  arbitration::ClusterGateway inner_;
  EventLog& pending_;
  EventLog& rejections_;
  std::vector<RejectReason>& rejected_;
};

struct Snapshot {
  Chain chain;
};

struct Live {
  ElectionSpec spec;
  SeededElection e;
  registry::GovRegistry gov;
  std::unique_ptr<consensus::Cluster> cluster;
  std::unique_ptr<ChainFile> chain_file;
  std::size_t persisted = 0;
  std::unique_ptr<registry::FileOutbox> outbox;
  std::unique_ptr<registry::Registry> registry;
  std::unique_ptr<EventLog> pending_log;
  std::unique_ptr<EventLog> rejections_log;
  std::vector<RejectReason> rejections;
  std::unique_ptr<JournalingGateway> gateway;
  arbitration::AcceptNonEmptyVerifier verifier;
  std::unique_ptr<arbitration::Arbitration> arb;

  const Chain& chain() const { return cluster->node(0).chain(); }
};

struct IdemEntry {
  std::string fingerprint;
  int status = 0;
  Json body;
};

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    const std::size_t j = path.find('/', i);
    out.emplace_back(path.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
    if (j == std::string_view::npos) break;
    i = j;
  }
  return out;
}

Json parse_body(const std::string& body) {
  if (body.empty()) return Json::object();
  try {
    Json j = parse_json(body);
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be an object");
    return j;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, "request body is not valid JSON");
  }
}

std::string body_string(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw Error(ErrorCode::InvalidArgument, std::string("missing ") + key);
  return j[key].get<std::string>();
}

// Registration form fields; "address" is the postal address.
registry::VoterApplication application_from_body(const Json& j) {
  auto field = [&](const char* key, const char* reported) {
    if (!j.contains(key) || !j[key].is_string()) throw Error(ErrorCode::MalformedField, reported);
    return j[key].get<std::string>();
  };
  registry::VoterApplication a;
  a.national_id = field("national_id", "national_id");
  a.first_name = field("first_name", "first_name");
  a.last_name = field("last_name", "last_name");
  a.email = field("email", "email");
  a.dob = field("dob", "dob");
  a.phone = field("phone", "phone");
  a.voter_card_number = field("voter_card_number", "voter_card_number");
  a.city = field("city", "city");
  a.postal_address = j.contains("postal_address") ? field("postal_address", "postal_address") : field("address", "address");
  try {
    if (j.contains("photo_hashes")) {
      for (const auto& h : j["photo_hashes"]) a.photo_hashes.push_back(Digest32::from_hex(h.get<std::string>()));
    }
    if (j.contains("video_hash") && !j["video_hash"].is_null()) {
      a.video_hash = Digest32::from_hex(j["video_hash"].get<std::string>());
    }
  } catch (const std::exception&) {
    throw Error(ErrorCode::MalformedField, "photo_hashes");
  }
  return a;
}

std::uint64_t query_u64(const Request& r, const std::string& key, std::uint64_t fallback) {
  const auto it = r.query.find(key);
  if (it == r.query.end()) return fallback;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(it->second, &pos);
    if (pos != it->second.size() || it->second.front() == '-') throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, key + " must be a non-negative integer");
  }
}

Json receipt_json(const arbitration::LivenessReceipt& r) {
  return {{"index", r.index},
          {"frame_hash", r.frame_hash.hex()},
          {"t_ms", r.t_ms},
          {"chain_value", r.chain_value.hex()},
          {"verdict", r.verdict}};
}

}  // namespace

struct Service::Impl {
  ServiceConfig cfg;
  DataPaths paths;
  Bytes secret;
  std::string admin_token;
  RestoreReport report;

  mutable std::mutex write_mu;
  mutable std::mutex snap_mu;
  std::shared_ptr<const Snapshot> snap;

  std::unique_ptr<Live> live;
  std::map<std::string, IdemEntry> idem;
  std::unique_ptr<EventLog> idem_log;

  std::int64_t now_ms() const {
    if (cfg.clock_ms) return cfg.clock_ms();
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
  }
  std::int64_t now_s() const { return now_ms() / 1000; }

  std::shared_ptr<const Snapshot> snapshot() const {
    std::lock_guard lock(snap_mu);
    return snap;
  }
  void publish() {
    auto s = live ? std::make_shared<const Snapshot>(Snapshot{live->chain()}) : nullptr;
    std::lock_guard lock(snap_mu);
    snap = std::move(s);
  }

  // ---- startup ----

  void open() {
    fs::create_directories(paths.root);
    fs::create_directories(paths.keys());
    if (fs::exists(paths.secret())) {
      try {
        secret = from_hex(read_text(paths.secret()));
      } catch (const Error& e) {
        throw Error(ErrorCode::CorruptStore, "server.secret: " + e.detail());
      }
    } else {
      secret = cfg.key_seed ? derive_secret(as_bytes(std::to_string(*cfg.key_seed)), "server-secret") : random_bytes(32);
      write_secret(paths.secret(), to_hex(secret));
    }
    if (!cfg.admin_token.empty()) {
      admin_token = cfg.admin_token;
    } else if (fs::exists(paths.admin_token())) {
      admin_token = read_text(paths.admin_token());
    } else {
      admin_token = to_hex(random_bytes(32));
      write_secret(paths.admin_token(), admin_token);
    }

    auto idem_loaded = EventLog::load(paths.idempotency_log());
    report.discarded_log_bytes += idem_loaded.discarded_tail_bytes;
    for (const auto& rec : idem_loaded.records) {
      idem[rec.at("key").get<std::string>()] = {rec.at("fingerprint").get<std::string>(), rec.at("status").get<int>(),
                                                rec.at("body")};
    }
    idem_log = std::make_unique<EventLog>(paths.idempotency_log());

    if (!fs::exists(paths.election()) && cfg.election_config) {
      const ElectionSpec spec = election_spec_from_json(parse_json(read_text(*cfg.election_config)));
      init_election(paths.root, spec, cfg.key_seed, now_s());
    }
    if (fs::exists(paths.election())) open_election();
    publish();
  }

  void open_election() {
    auto l = std::make_unique<Live>();
    Json doc;
    try {
      doc = parse_json(read_text(paths.election()));
      l->spec = election_spec_from_json(doc.at("spec"));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::CorruptStore, std::string("election.json: ") + e.what());
    }
    ElectionKeys keys{load_key(paths.keys() / "authority.key"), {}};
    for (std::size_t i = 0; i < l->spec.nodes; ++i) keys.nodes.push_back(load_key(node_key_path(paths, i)));
    l->e = make_election(l->spec, std::move(keys));
    if (election_to_json(l->e.cfg) != doc.at("config")) {
      throw Error(ErrorCode::CorruptStore, "election.json: config does not match the stored keys");
    }
    const ElectionConfig& cfg_e = l->e.cfg;

    // Chain: a torn final record is dropped, anything else must validate.
    DecodedChain decoded;
    try {
      decoded = decode_chain(read_file(paths.chain()), true);
    } catch (const Error& e) {
      throw Error(ErrorCode::CorruptStore, "chain.dat: " + e.detail());
    }
    if (decoded.blocks.empty()) throw Error(ErrorCode::CorruptStore, "chain.dat: no genesis block");
    std::optional<Chain> chain;
    try {
      chain.emplace(Chain::from_blocks(cfg_e, decoded.blocks));
    } catch (const Error& e) {
      throw Error(ErrorCode::CorruptStore, "chain.dat: " + e.detail());
    }
    if (decoded.discarded_tail_bytes > 0) {
      write_file_atomic(paths.chain(), encode_chain(chain->blocks()));
      log().warn("chain.dat: discarded {} bytes of a torn final record", decoded.discarded_tail_bytes);
    }
    report.chain_blocks = chain->length();
    report.discarded_chain_bytes = decoded.discarded_tail_bytes;

    l->cluster = std::make_unique<consensus::Cluster>(cfg_e, l->e.keys.nodes, *chain);
    l->chain_file = std::make_unique<ChainFile>(paths.chain());
    l->persisted = chain->length();

    const fs::path gov_path = cfg.gov_registry.value_or(paths.gov_registry());
    if (fs::exists(gov_path)) l->gov = registry::GovRegistry::load(gov_path);

    report.discarded_log_bytes += EventLog::load(paths.outbox_log()).discarded_tail_bytes;
    l->outbox = std::make_unique<registry::FileOutbox>(paths.outbox_log());

    auto reg_loaded = EventLog::load(paths.registry_log());
    report.registry_events = reg_loaded.records.size();
    report.discarded_registry_bytes = reg_loaded.discarded_tail_bytes;
    l->registry = std::make_unique<registry::Registry>(registry::RegistryConfig::for_election(cfg_e),
                                                       derive_secret(secret, "registry"), l->outbox.get(),
                                                       std::make_unique<EventLog>(paths.registry_log()));
    l->registry->replay(reg_loaded.records);

    auto rej_loaded = EventLog::load(paths.rejections_log());
    report.discarded_log_bytes += rej_loaded.discarded_tail_bytes;
    for (const auto& r : rej_loaded.records) {
      const auto reason = parse_reject_reason(r.at("reason").get<std::string>());
      if (!reason) throw Error(ErrorCode::CorruptStore, "rejections.log: unknown reason");
      l->rejections.push_back(*reason);
    }
    l->rejections_log = std::make_unique<EventLog>(paths.rejections_log());

    // Pending journal: re-offer what the chain does not hold yet, then compact.
    auto pend_loaded = EventLog::load(paths.pending_log());
    report.discarded_log_bytes += pend_loaded.discarded_tail_bytes;
    std::set<Digest32> on_chain;
    for (const auto& b : chain->blocks()) {
      for (const auto& tx : b.transactions) on_chain.insert(tx_hash(tx));
    }
    std::string kept;
    const std::int64_t now = now_s();
    l->cluster->set_time(now);
    for (const auto& rec : pend_loaded.records) {
      Transaction tx;
      try {
        tx = transaction_from_json(rec.at("tx"));
      } catch (const std::exception& e) {
        throw Error(ErrorCode::CorruptStore, std::string("pending.log: ") + e.what());
      }
      if (on_chain.contains(tx_hash(tx))) continue;
      const auto result = l->cluster->broadcast_tx(0, tx);
      if (result.rejected.contains(l->cluster->node(0).id())) continue;
      ++report.pending_rebroadcast;
      kept += Json{{"tx", transaction_to_json(tx)}}.dump() + "\n";
    }
    write_file_atomic(paths.pending_log(), as_bytes(kept));
    l->pending_log = std::make_unique<EventLog>(paths.pending_log());

    l->gateway = std::make_unique<JournalingGateway>(*l->cluster, *l->pending_log, *l->rejections_log, l->rejections);
    arbitration::ArbitrationConfig ac;
    ac.min_liveness_frames = cfg.min_liveness_frames;
    l->arb = std::make_unique<arbitration::Arbitration>(cfg_e, *l->registry, *l->gateway, l->verifier,
                                                        derive_secret(secret, "arbitration"), ac);
    live = std::move(l);
    reconcile(now);
    settle(now);
    log().info("restored election {}: {} blocks, {} registry events, {} pending re-offered", cfg_e.election_id,
                 report.chain_blocks, report.registry_events, report.pending_rebroadcast);
  }

  // A crash can separate the registry log from the ledger journal. The
  // ledger side wins: grants and vote records follow what was broadcast.
  void reconcile(std::int64_t now) {
    Live& l = *live;
    std::map<Address, Transaction> mints;
    std::map<PublicKey, Digest32> votes;
    auto scan = [&](const Transaction& tx) {
      if (tx.kind == TxKind::Mint) mints.emplace(tx.to_address, tx);
      if (tx.kind == TxKind::Vote) votes.emplace(tx.from_pubkey, tx_hash(tx));
    };
    for (const auto& b : l.chain().blocks()) {
      for (const auto& tx : b.transactions) scan(tx);
    }
    for (const auto& tx : l.cluster->node(0).mempool()) scan(tx);

    for (const PublicKey& key : l.registry->bound_keys()) {
      const registry::KeyBinding* binding = l.registry->binding_for_key(key);
      const std::string nid = binding->national_id;
      if (!l.registry->grant_for(nid)) {
        if (const auto it = mints.find(derive_address(binding->public_key)); it != mints.end()) {
          l.registry->commit_grant(nid, it->second, now);
          ++report.grants_reconciled;
        } else {
          try {
            grant(nid, now);
            ++report.grants_reconciled;
          } catch (const Error& e) {
            log().warn("bound key left without a grant: {}", e.what());
          }
        }
      }
      if (const auto it = votes.find(key); it != votes.end() && !l.registry->vote_submitted(nid)) {
        l.registry->record_vote_submitted(nid, it->second, now);
        ++report.votes_reconciled;
      }
    }
  }

  // ---- write paths ----

  Live& require_live() {
    if (!live) throw Error(ErrorCode::NoElection, "no election configured");
    return *live;
  }

  Transaction grant(const std::string& nid, std::int64_t now) {
    Live& l = *live;
    const std::uint64_t nonce = l.cluster->node(0).pending_state().nonce(derive_address(l.e.cfg.authority_key));
    Transaction mint = l.registry->prepare_grant(nid, now, nonce, l.e.cfg, l.e.keys.authority);
    if (const auto reason = l.gateway->submit(mint)) throw Error(to_error_code(*reason), "mint refused by the ledger");
    l.registry->commit_grant(nid, mint, now);
    return mint;
  }

  // Proposes until node-0's mempool drains or the cluster stops making
  // progress, then persists the new canonical blocks.
  void settle(std::int64_t now) {
    Live& l = *live;
    l.cluster->set_time(now);
    std::size_t failures = 0;
    while (!l.cluster->node(0).mempool().empty() && failures <= l.cluster->size()) {
      const auto round = l.cluster->propose_and_collect();
      failures = round.finalized ? 0 : failures + 1;
    }
    const auto& blocks = l.chain().blocks();
    for (; l.persisted < blocks.size(); ++l.persisted) l.chain_file->append(blocks[l.persisted]);
    publish();
  }

  std::optional<Json> inclusion_for(const Transaction& tx) const {
    const Digest32 id = tx_hash(tx);
    for (const auto& b : live->chain().blocks()) {
      for (std::size_t i = 0; i < b.transactions.size(); ++i) {
        if (tx_hash(b.transactions[i]) != id) continue;
        return audit::inclusion_to_json(audit::InclusionRecord{id, b.index, b.block_hash, i, b.transactions[i].timestamp,
                                                               b.timestamp, b.transactions[i].to_address});
      }
    }
    return std::nullopt;
  }

  Response post(const Request& req) {
    const Json body = parse_body(req.body);
    const std::int64_t now_ms_v = now_ms();
    const std::int64_t now = now_ms_v / 1000;

    if (req.path == "/admin/election") {
      require_admin(req);
      if (live) throw Error(ErrorCode::ElectionExists, "an election is already configured");
      ElectionSpec spec = election_spec_from_json(body);
      if (!body.contains("nodes")) spec.nodes = cfg.nodes;
      init_election(paths.root, spec, cfg.key_seed, now);
      open_election();
      return {201, {{"election", election_to_json(live->e.cfg)}}};
    }
    if (req.path == "/admin/election/close") {
      require_admin(req);
      Live& l = require_live();
      settle(now);
      const auto plan = audit::sweep_abstain(l.chain().state(), l.e.cfg, l.e.keys.authority, now);
      for (const auto& tx : plan.all()) {
        if (const auto reason = l.gateway->submit(tx)) throw Error(to_error_code(*reason), "close-out refused");
      }
      settle(now);
      return {200, {{"sweeps", plan.sweeps.size()}, {"tally", audit::tally_to_json(audit::tally(l.chain()))}}};
    }

    Live& l = require_live();
    if (req.path == "/register") {
      const auto& rec = l.registry->register_voter(application_from_body(body), now);
      return {201, {{"status", std::string(registry::status_name(rec.status))}}};
    }
    if (req.path == "/otp/issue") {
      const std::string nid = body_string(body, "national_id");
      const registry::VoterRecord* rec = l.registry->find(nid);
      if (!rec) throw Error(ErrorCode::UnknownVoter, "no such registration");
      if (rec->status == registry::VoterStatus::Pending) {
        const auto result = l.registry->verify_eligibility(nid, l.gov, now);
        if (!result.verified) throw Error(ErrorCode::NotVerified, result.describe());
      }
      const std::int64_t expires = l.registry->issue_otp(nid, now);
      return {200, {{"status", "sent"}, {"expires_at", expires}}};
    }
    if (req.path == "/otp/verify") {
      const auto s = l.registry->verify_otp(body_string(body, "national_id"), body_string(body, "code"), now);
      return {200, {{"token", s.token}, {"expires_at", s.expires_at}}};
    }
    if (req.path == "/keys/bind") {
      const PublicKey key = PublicKey::from_hex(body_string(body, "public_key"));
      const auto& binding = l.registry->bind_public_key(body_string(body, "token"), key, now);
      const std::string nid = binding.national_id;
      const Address address = derive_address(binding.public_key);
      const Transaction mint = grant(nid, now);
      settle(now);
      const auto inc = inclusion_for(mint);
      return {200,
              {{"status", std::string(registry::status_name(l.registry->find(nid)->status))},
               {"address", address.hex()},
               {"mint_tx", tx_hash(mint).hex()},
               {"inclusion", inc ? *inc : Json(nullptr)}}};
    }
    if (req.path == "/liveness/frame") {
      const Bytes frame = from_hex(body_string(body, "frame"));
      if (!body.contains("session_id")) {
        const auto& s = l.arb->authenticate_voter(body_string(body, "token"), frame, now_ms_v);
        return {201,
                {{"session_id", s.session_id},
                 {"receipt", receipt_json(s.receipts.back())},
                 {"passed_frames", s.passed_frames()},
                 {"required_frames", cfg.min_liveness_frames}}};
      }
      const std::string sid = body_string(body, "session_id");
      const auto& r = l.arb->record_liveness_frame(sid, frame, now_ms_v);
      return {200,
              {{"session_id", sid},
               {"receipt", receipt_json(r)},
               {"passed_frames", l.arb->session(sid)->passed_frames()},
               {"required_frames", cfg.min_liveness_frames}}};
    }
    if (req.path == "/vote") {
      if (!body.contains("transaction")) throw Error(ErrorCode::InvalidArgument, "missing transaction");
      Transaction tx;
      try {
        tx = transaction_from_json(body["transaction"]);
      } catch (const Json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, "malformed transaction");
      }
      arbitration::BallotRequest ballot{body_string(body, "session_id"),
                                        Address::from_hex(body_string(body, "candidate_address")),
                                        body.value("client_timestamp", std::int64_t{0})};
      const Digest32 id = l.arb->submit_vote(ballot, tx, now_ms_v);
      settle(now);
      const auto inc = inclusion_for(tx);
      return {200,
              {{"tx_hash", id.hex()}, {"status", inc ? "finalized" : "pending"}, {"inclusion", inc ? *inc : Json(nullptr)}}};
    }
    throw Error(ErrorCode::NotFound, "no such route");
  }

  void require_admin(const Request& req) const {
    const auto it = req.headers.find("authorization");
    const std::string expected = "Bearer " + admin_token;
    if (it == req.headers.end() || !constant_time_equal(as_bytes(it->second), as_bytes(expected))) {
      throw Error(ErrorCode::Unauthorized, "admin credential required");
    }
  }

  Json audit_json_locked() const {
    if (!live) throw Error(ErrorCode::NoElection, "no election configured");
    const auto report = audit::recount(live->chain().blocks(), live->e.cfg, live->registry->bound_keys(),
                                       live->rejections);
    return audit::audit_to_json(report);
  }

  // ---- read paths ----

  Response get(const Request& req) const {
    const auto parts = split_path(req.path);
    if (req.path == "/health") {
      const auto s = snapshot();
      return {200,
              {{"status", "ready"},
               {"election", s != nullptr},
               {"height", s ? Json(s->chain.height()) : Json(nullptr)},
               {"tls_mode", std::string(tls_mode_name(cfg.tls_mode))},
               {"restore", report.to_json()}}};
    }
    if (parts.size() >= 2 && parts[0] == "admin") {
      require_admin(req);
      if (req.path == "/admin/audit") {
        std::lock_guard lock(write_mu);
        return {200, audit_json_locked()};
      }
      if (req.path == "/admin/cost-estimate") {
        economics::CostParams p;
        p.voters = query_u64(req, "voters", p.voters);
        p.dev_cost = query_u64(req, "dev_cost", p.dev_cost);
        p.first_cycle_equipment = query_u64(req, "first_cycle_equipment", p.first_cycle_equipment);
        p.subsequent_cycle_cost = query_u64(req, "subsequent_cycle_cost", p.subsequent_cycle_cost);
        p.paper_ballot_per_voter = query_u64(req, "paper_ballot_per_voter", p.paper_ballot_per_voter);
        Json j = economics::cost_report_to_json(p, economics::cost_estimate(p));
        if (const auto it = req.query.find("penetration"); it != req.query.end()) {
          double pct = 0;
          try {
            std::size_t pos = 0;
            pct = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("penetration");
          } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, "penetration must be a number");
          }
          j["penetration"] = pct;
          j["feasibility"] = std::string(economics::feasibility_name(economics::feasibility(pct)));
        }
        return {200, j};
      }
      throw Error(ErrorCode::NotFound, "no such route");
    }
    if (parts.empty() || parts[0] != "public") throw Error(ErrorCode::NotFound, "no such route");

    const auto s = snapshot();
    if (!s) throw Error(ErrorCode::NoElection, "no election configured");
    const Chain& chain = s->chain;
    if (req.path == "/public/election") {
      return {200, {{"election", election_to_json(chain.config())}, {"closed", chain.state().closed}}};
    }
    if (req.path == "/public/results") {
      const bool withhold = !cfg.provisional_results && !chain.state().closed;
      return {200, audit::tally_to_json(audit::tally(chain), withhold)};
    }
    if (parts.size() == 3 && parts[1] == "verify") {
      const PublicKey key = PublicKey::from_hex(parts[2]);
      const auto rec = audit::verify_vote(key, chain.blocks());
      if (!rec) throw Error(ErrorCode::NotFound, "no vote from this key");
      return {200, audit::inclusion_to_json(*rec)};
    }
    if (req.path == "/public/blocks") {
      const auto page = audit::explorer_page(chain.blocks(), query_u64(req, "page", 1), query_u64(req, "size", 20));
      return {200, audit::explorer_page_to_json(page)};
    }
    if (parts.size() == 3 && parts[1] == "blocks") {
      const Digest32 h = Digest32::from_hex(parts[2]);
      for (const auto& b : chain.blocks()) {
        if (b.block_hash == h) return {200, block_to_json(b)};
      }
      throw Error(ErrorCode::NotFound, "no block with this hash");
    }
    throw Error(ErrorCode::NotFound, "no such route");
  }

  Response handle_post(const Request& req) {
    const auto key_it = req.headers.find("idempotency-key");
    const std::string key = key_it == req.headers.end() ? "" : key_it->second;
    if (req.path == "/vote" && key.empty()) throw Error(ErrorCode::IdempotencyKeyRequired, "Idempotency-Key header required");
    std::lock_guard lock(write_mu);
    const std::string fingerprint = hash_bytes(req.method + " " + req.path + "\n" + req.body).hex();
    if (!key.empty()) {
      if (const auto it = idem.find(key); it != idem.end()) {
        if (it->second.fingerprint != fingerprint) {
          throw Error(ErrorCode::InvalidArgument, "Idempotency-Key reused for a different request");
        }
        return {it->second.status, it->second.body};
      }
    }
    Response resp;
    try {
      resp = post(req);
    } catch (const Error& e) {
      resp = error_response(e);
    }
    if (!key.empty() && resp.status < 500) {
      idem_log->append({{"key", key}, {"fingerprint", fingerprint}, {"status", resp.status}, {"body", resp.body}});
      idem[key] = {fingerprint, resp.status, resp.body};
    }
    return resp;
  }
};

Service::Service(ServiceConfig cfg) : cfg_(std::move(cfg)), impl_(std::make_unique<Impl>()) {
  if (cfg_.data_dir.empty()) throw Error(ErrorCode::Config, "data_dir is required");
  impl_->cfg = cfg_;
  impl_->paths = DataPaths{cfg_.data_dir};
  impl_->open();
  admin_token_ = impl_->admin_token;
}

Service::~Service() = default;

Response Service::handle(const Request& request) {
  try {
    if (request.method == "GET") return impl_->get(request);
    if (request.method == "POST") return impl_->handle_post(request);
    return {405, Json{{"error", {{"code", "InvalidArgument"}, {"message", "method not allowed"}}}}};
  } catch (const durable::CrashInjected&) {
    throw;
  } catch (const Error& e) {
    return error_response(e);
  } catch (const std::exception& e) {
    log().error("request {} {} failed: {}", request.method, request.path, e.what());
    return error_response(Error(ErrorCode::Internal, "internal error"));
  }
}

const RestoreReport& Service::restore_report() const { return impl_->report; }

bool Service::has_election() const { return impl_->snapshot() != nullptr; }

std::vector<Block> Service::chain() const {
  const auto s = impl_->snapshot();
  return s ? s->chain.blocks() : std::vector<Block>{};
}

std::optional<ElectionConfig> Service::election() const {
  const auto s = impl_->snapshot();
  if (!s) return std::nullopt;
  return s->chain.config();
}

Json Service::registry_state() const {
  std::lock_guard lock(impl_->write_mu);
  return impl_->live ? impl_->live->registry->state_json() : Json(nullptr);
}

std::vector<std::string> Service::check_invariants() const {
  std::lock_guard lock(impl_->write_mu);
  if (!impl_->live) return {};
  const Live& l = *impl_->live;
  std::vector<std::string> out = l.registry->check_invariants();
  const auto& blocks = l.chain().blocks();
  if (const ChainVerdict v = validate_chain(blocks, l.e.cfg); !v.valid) {
    out.push_back("chain invalid at block " + std::to_string(v.first_bad_index));
  }
  const LedgerState& pending = l.cluster->node(0).pending_state();
  if (pending.sum_balances() != pending.total_minted) out.push_back("balances do not sum to minted total");
  if (!l.cluster->honest_replicas_identical()) out.push_back("replicas diverge");
  std::set<Digest32> known;
  for (const auto& b : blocks) {
    for (const auto& tx : b.transactions) known.insert(tx_hash(tx));
  }
  for (const auto& tx : l.cluster->node(0).mempool()) known.insert(tx_hash(tx));
  for (const PublicKey& key : l.registry->bound_keys()) {
    const std::string& nid = l.registry->binding_for_key(key)->national_id;
    if (const auto* g = l.registry->grant_for(nid); g && !known.contains(g->tx_hash)) {
      out.push_back("grant without a ledger mint");
    }
    if (l.registry->vote_submitted(nid) && !pending.spent_keys.contains(key)) {
      out.push_back("vote record without a ledger vote");
    }
  }
  for (const auto& b : blocks) {
    for (const auto& tx : b.transactions) {
      if (tx.kind == TxKind::Vote && !l.registry->binding_for_key(tx.from_pubkey)) out.push_back("vote from an unbound key");
    }
  }
  return out;
}

std::optional<std::string> Service::last_otp(const std::string& phone) const {
  std::lock_guard lock(impl_->write_mu);
  const auto loaded = EventLog::load(impl_->paths.outbox_log());
  for (auto it = loaded.records.rbegin(); it != loaded.records.rend(); ++it) {
    if (it->value("to", "") != phone) continue;
    const std::string msg = it->value("message", "");
    if (const auto pos = msg.find("code is "); pos != std::string::npos) return msg.substr(pos + 8, 6);
  }
  return std::nullopt;
}

Json Service::audit_json() const {
  std::lock_guard lock(impl_->write_mu);
  return impl_->audit_json_locked();
}

Json Service::tally_json() const {
  const auto s = impl_->snapshot();
  if (!s) throw Error(ErrorCode::NoElection, "no election configured");
  return audit::tally_to_json(audit::tally(s->chain), false);
}

}  // namespace votechain::service
