// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "chain/election_setup.hpp"
#include "chain/ledger.hpp"
#include "common/error.hpp"
#include "common/json.hpp"

namespace votechain::service {

enum class TlsMode { Required, TestPlaintext };
std::string_view tls_mode_name(TlsMode mode);
TlsMode parse_tls_mode(std::string_view name);

struct ServiceConfig {
  std::string bind_host = "127.0.0.1";
  int port = 8443;  // 0 picks a free port
  std::filesystem::path data_dir;
  std::optional<std::filesystem::path> election_config;  // spec used when the data dir has none
  std::optional<std::filesystem::path> gov_registry;     // default: <data_dir>/gov_registry.json
  TlsMode tls_mode = TlsMode::Required;
  std::optional<std::filesystem::path> tls_cert;
  std::optional<std::filesystem::path> tls_key;
  bool provisional_results = false;
  std::size_t nodes = 5;
  std::string admin_token;  // empty: read from <data_dir>/admin.token, created on first start
  std::size_t min_liveness_frames = 3;
  // Deterministic keys and secrets for tests; random when unset.
  std::optional<std::uint64_t> key_seed;
  // Milliseconds since the epoch.
  std::function<std::int64_t()> clock_ms;

  static ServiceConfig from_json(const Json& j);
  // Throws Config when TLS is required but no certificate is configured.
  void validate() const;
};

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lowercase names
  std::string body;
};

struct Response {
  int status = 200;
  Json body;
  std::string text() const { return body.dump(); }
};

int http_status_for(ErrorCode code);
Response error_response(const Error& e);

struct RestoreReport {
  std::size_t chain_blocks = 0;
  std::size_t discarded_chain_bytes = 0;
  std::size_t registry_events = 0;
  std::size_t discarded_registry_bytes = 0;
  std::size_t discarded_log_bytes = 0;  // pending, rejection and idempotency logs
  std::size_t pending_rebroadcast = 0;
  std::size_t grants_reconciled = 0;
  std::size_t votes_reconciled = 0;

  Json to_json() const;
};

// Data directory layout.
struct DataPaths {
  std::filesystem::path root;
  std::filesystem::path election() const { return root / "election.json"; }
  std::filesystem::path keys() const { return root / "keys"; }
  std::filesystem::path chain() const { return root / "chain.dat"; }
  std::filesystem::path registry_log() const { return root / "registry.log"; }
  std::filesystem::path outbox_log() const { return root / "outbox.log"; }
  std::filesystem::path pending_log() const { return root / "pending.log"; }
  std::filesystem::path rejections_log() const { return root / "rejections.log"; }
  std::filesystem::path idempotency_log() const { return root / "idempotency.log"; }
  std::filesystem::path secret() const { return root / "keys" / "server.secret"; }
  std::filesystem::path admin_token() const { return root / "admin.token"; }
  std::filesystem::path gov_registry() const { return root / "gov_registry.json"; }
};

ElectionSpec election_spec_from_json(const Json& j);
Json election_spec_to_json(const ElectionSpec& spec);

// Writes election.json, the key files and the genesis block into an empty
// (or election-less) data directory. Throws ElectionExists.
SeededElection init_election(const std::filesystem::path& data_dir, const ElectionSpec& spec,
                             std::optional<std::uint64_t> key_seed, std::int64_t now);

// Registry, arbitration, the in-process node cluster and the public
// explorer behind one request entry point. Mutations are serialized; public
// reads work from an immutable snapshot published after every write.
class Service {
 public:
  // Restores from the data directory. Throws CorruptStore when the chain
  // file fails validation or a log is damaged before its final record.
  explicit Service(ServiceConfig cfg);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  Response handle(const Request& request);

  const ServiceConfig& config() const { return cfg_; }
  const RestoreReport& restore_report() const;
  const std::string& admin_token() const { return admin_token_; }

  bool has_election() const;
  std::vector<Block> chain() const;
  std::optional<ElectionConfig> election() const;
  // Registry private state, for restore equality checks.
  Json registry_state() const;
  // Registry invariants plus cross-checks against the chain.
  std::vector<std::string> check_invariants() const;
  // Outbox content is for tests and the operator console only.
  std::optional<std::string> last_otp(const std::string& phone) const;

  // Body of GET /admin/audit; also used by the CLI.
  Json audit_json() const;
  // Full tally for the operator; never withheld.
  Json tally_json() const;

  struct Impl;

 private:
  ServiceConfig cfg_;
  std::string admin_token_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace votechain::service
