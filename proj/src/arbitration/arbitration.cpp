// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "arbitration/arbitration.hpp"

#include <algorithm>

#include "chain/encoding.hpp"

namespace votechain::arbitration {

namespace {

Digest32 chain_step(const Digest32& prev, const Digest32& frame_hash) {
  Bytes buf(prev.bytes.begin(), prev.bytes.end());
  buf.insert(buf.end(), frame_hash.bytes.begin(), frame_hash.bytes.end());
  return hash_bytes(buf);
}

}  // namespace

std::optional<std::size_t> verify_receipts(std::span<const LivenessReceipt> receipts, std::span<const Bytes> frames) {
  Digest32 prev{};
  std::int64_t last_t = 0;
  for (std::size_t i = 0; i < receipts.size(); ++i) {
    const auto& r = receipts[i];
    if (r.index != i) return i;
    if (i > 0 && r.t_ms <= last_t) return i;
    if (!frames.empty() && (i >= frames.size() || hash_bytes(frames[i]) != r.frame_hash)) return i;
    if (chain_step(prev, r.frame_hash) != r.chain_value) return i;
    prev = r.chain_value;
    last_t = r.t_ms;
  }
  if (!frames.empty() && frames.size() != receipts.size()) return receipts.size();
  return std::nullopt;
}

std::string_view session_state_name(SessionState s) {
  switch (s) {
    case SessionState::Open: return "Open";
    case SessionState::VoteSubmitted: return "VoteSubmitted";
    case SessionState::Closed: return "Closed";
  }
  return "Unknown";
}

std::size_t VotingSession::passed_frames() const {
  return static_cast<std::size_t>(std::count_if(receipts.begin(), receipts.end(), [](const auto& r) { return r.verdict; }));
}

std::optional<RejectReason> ClusterGateway::submit(const Transaction& tx) {
  const auto result = cluster_.broadcast_tx(origin_, tx);
  const auto& origin_id = cluster_.node(origin_).id();
  if (const auto it = result.rejected.find(origin_id); it != result.rejected.end()) return it->second;
  return std::nullopt;
}

bool ClusterGateway::key_spent(const PublicKey& key) const {
  return cluster_.node(origin_).pending_state().spent_keys.contains(key);
}

Arbitration::Arbitration(const ElectionConfig& cfg, registry::Registry& reg, TxGateway& gateway,
                         LivenessVerifier& verifier, Bytes secret, ArbitrationConfig options, EventSink sink)
    : cfg_(cfg), reg_(reg), gateway_(gateway), verifier_(verifier), secret_(std::move(secret)), options_(options),
      sink_(std::move(sink)) {}

void Arbitration::emit(Json event) const {
  if (sink_) sink_(event);
}

const VotingSession& Arbitration::authenticate_voter(std::string_view login_token, ByteView first_frame,
                                                     std::int64_t now_ms) {
  const std::int64_t now = now_ms / 1000;
  const std::string nid = reg_.session_voter(login_token, now);
  const registry::VoterRecord* rec = reg_.find(nid);
  if (!rec) throw Error(ErrorCode::NotRegistered, "no registration");
  if (rec->status != registry::VoterStatus::TokenGranted) {
    throw Error(ErrorCode::NotGranted, std::string(registry::status_name(rec->status)));
  }
  if (now < cfg_.start_time || now > cfg_.end_time) throw Error(ErrorCode::WindowClosed, "outside the voting window");
  const PublicKey key = reg_.binding_for(nid)->public_key;
  if (reg_.vote_submitted(nid) || gateway_.key_spent(key)) throw Error(ErrorCode::AlreadyVoted, "ballot already cast");
  if (first_frame.empty()) throw Error(ErrorCode::EmptyFrame, "first frame is empty");

  ByteWriter w;
  w.string("votechain/arbitration-session");
  w.bytes(secret_);
  w.u64(counter_++);
  VotingSession s;
  s.session_id = hash_bytes(w.data()).hex();
  s.national_id = nid;
  s.public_key = key;
  s.started_at_ms = now_ms;
  auto [it, inserted] = sessions_.emplace(s.session_id, std::move(s));
  append_receipt(it->second, first_frame, now_ms);
  emit({{"event", "session_opened"}, {"session", it->first}, {"t_ms", now_ms}});
  return it->second;
}

VotingSession& Arbitration::require_open(const std::string& session_id) {
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no such session");
  if (it->second.state != SessionState::Open) {
    throw Error(ErrorCode::SessionNotOpen, std::string(session_state_name(it->second.state)));
  }
  return it->second;
}

LivenessReceipt& Arbitration::append_receipt(VotingSession& s, ByteView frame, std::int64_t now_ms) {
  LivenessReceipt r;
  r.index = s.receipts.size();
  r.frame_hash = hash_bytes(frame);
  r.t_ms = s.receipts.empty() ? now_ms : std::max(now_ms, s.receipts.back().t_ms + 1);
  r.chain_value = chain_step(s.receipts.empty() ? Digest32{} : s.receipts.back().chain_value, r.frame_hash);
  r.verdict = verifier_.verify(frame);
  s.receipts.push_back(r);
  s.frames.emplace_back(frame.begin(), frame.end());
  emit({{"event", "liveness_receipt"},
        {"session", s.session_id},
        {"index", r.index},
        {"frame_hash", r.frame_hash.hex()},
        {"verdict", r.verdict}});
  return s.receipts.back();
}

const LivenessReceipt& Arbitration::record_liveness_frame(const std::string& session_id, ByteView frame,
                                                          std::int64_t now_ms) {
  VotingSession& s = require_open(session_id);
  if (frame.empty()) throw Error(ErrorCode::EmptyFrame, "frame is empty");
  return append_receipt(s, frame, now_ms);
}

Digest32 Arbitration::submit_vote(const BallotRequest& request, const Transaction& signed_tx, std::int64_t now_ms) {
  VotingSession& s = require_open(request.session_id);
  if (const std::int64_t now = now_ms / 1000; now < cfg_.start_time || now > cfg_.end_time) {
    throw Error(ErrorCode::WindowClosed, "outside the voting window");
  }
  if (s.passed_frames() < options_.min_liveness_frames) {
    throw Error(ErrorCode::InsufficientLiveness, std::to_string(s.passed_frames()) + " of " +
                                                     std::to_string(options_.min_liveness_frames) + " frames");
  }
  if (signed_tx.kind != TxKind::Vote || signed_tx.from_pubkey != s.public_key) {
    throw Error(ErrorCode::KeyMismatch, "ballot is not signed by the bound key");
  }
  if (signed_tx.to_address != request.candidate_address) {
    throw Error(ErrorCode::BallotMismatch, "signed recipient differs from the request");
  }
  const Digest32 id = tx_hash(signed_tx);
  if (const auto reason = gateway_.submit(signed_tx)) {
    emit({{"event", "vote_rejected"}, {"session", s.session_id}, {"reason", reject_reason_name(*reason)}});
    throw Error(to_error_code(*reason), "rejected by the forwarding node");
  }
  reg_.record_vote_submitted(s.national_id, id, now_ms / 1000);
  s.state = SessionState::VoteSubmitted;
  s.submitted_tx = id;
  emit({{"event", "vote_forwarded"}, {"session", s.session_id}, {"tx", id.hex()}});
  return id;
}

void Arbitration::close_session(const std::string& session_id) {
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no such session");
  it->second.state = SessionState::Closed;
  emit({{"event", "session_closed"}, {"session", session_id}});
}

const VotingSession* Arbitration::session(const std::string& session_id) const {
  const auto it = sessions_.find(session_id);
  return it == sessions_.end() ? nullptr : &it->second;
}

}  // namespace votechain::arbitration
