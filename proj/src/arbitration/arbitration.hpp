// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chain/ledger.hpp"
#include "common/json.hpp"
#include "consensus/cluster.hpp"
#include "registry/registry.hpp"

namespace votechain::arbitration {

// Pluggable presence check for captured frames.
class LivenessVerifier {
 public:
  virtual ~LivenessVerifier() = default;
  virtual bool verify(ByteView frame) = 0;
};

// Default stub: any non-empty frame passes.
class AcceptNonEmptyVerifier : public LivenessVerifier {
 public:
  bool verify(ByteView frame) override { return !frame.empty(); }
};

struct LivenessReceipt {
  std::uint64_t index = 0;
  Digest32 frame_hash;
  std::int64_t t_ms = 0;  // strictly increasing within a session
  Digest32 chain_value;   // H(previous chain value || frame_hash), zero seed
  bool verdict = false;
};

// Recomputes the receipt chain, and the frame hashes when frames are given.
// Returns the index of the first receipt that fails, or nullopt.
std::optional<std::size_t> verify_receipts(std::span<const LivenessReceipt> receipts,
                                           std::span<const Bytes> frames = {});

enum class SessionState { Open, VoteSubmitted, Closed };
std::string_view session_state_name(SessionState s);

struct VotingSession {
  std::string session_id;
  std::string national_id;  // private reference, never emitted
  PublicKey public_key;
  std::int64_t started_at_ms = 0;
  std::vector<LivenessReceipt> receipts;
  std::vector<Bytes> frames;
  SessionState state = SessionState::Open;
  std::optional<Digest32> submitted_tx;

  std::size_t passed_frames() const;
};

struct BallotRequest {
  std::string session_id;
  Address candidate_address;
  std::int64_t client_timestamp = 0;
};

// Where forwarded ballots go. submit() returns the forwarding node's verdict.
class TxGateway {
 public:
  virtual ~TxGateway() = default;
  virtual std::optional<RejectReason> submit(const Transaction& tx) = 0;
  virtual bool key_spent(const PublicKey& key) const = 0;
};

// Forwards into a simulated cluster through one origin node.
class ClusterGateway : public TxGateway {
 public:
  ClusterGateway(consensus::Cluster& cluster, std::size_t origin) : cluster_(cluster), origin_(origin) {}
  std::optional<RejectReason> submit(const Transaction& tx) override;
  bool key_spent(const PublicKey& key) const override;

 private:
  consensus::Cluster& cluster_;
  std::size_t origin_;
};

struct ArbitrationConfig {
  std::size_t min_liveness_frames = 3;
};

// Server-B. Holds no secret keys: ballots arrive already signed by the
// voter's device. Not thread-safe; the service serializes callers.
class Arbitration {
 public:
  using EventSink = std::function<void(const Json&)>;

  Arbitration(const ElectionConfig& cfg, registry::Registry& reg, TxGateway& gateway, LivenessVerifier& verifier,
              Bytes secret, ArbitrationConfig options = {}, EventSink sink = {});

  const VotingSession& authenticate_voter(std::string_view login_token, ByteView first_frame, std::int64_t now_ms);
  const LivenessReceipt& record_liveness_frame(const std::string& session_id, ByteView frame, std::int64_t now_ms);
  // Returns the hash of the forwarded transaction. Ledger rejections surface
  // as Error(code mirroring the RejectReason).
  Digest32 submit_vote(const BallotRequest& request, const Transaction& signed_tx, std::int64_t now_ms);
  void close_session(const std::string& session_id);

  const VotingSession* session(const std::string& session_id) const;
  std::size_t session_count() const { return sessions_.size(); }

 private:
  VotingSession& require_open(const std::string& session_id);
  LivenessReceipt& append_receipt(VotingSession& s, ByteView frame, std::int64_t now_ms);
  void emit(Json event) const;

  ElectionConfig cfg_;
  registry::Registry& reg_;
  TxGateway& gateway_;
  LivenessVerifier& verifier_;
  Bytes secret_;
  ArbitrationConfig options_;
  EventSink sink_;
  std::uint64_t counter_ = 0;
  std::map<std::string, VotingSession> sessions_;
};

}  // namespace votechain::arbitration
