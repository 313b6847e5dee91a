// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chain/crypto.hpp"
#include "chain/election.hpp"
#include "chain/transaction.hpp"
#include "common/event_log.hpp"
#include "common/json.hpp"

namespace votechain::registry {

using Date = std::chrono::year_month_day;

// Strict YYYY-MM-DD; nullopt for anything else, including impossible dates.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& d);
Date date_of(std::int64_t unix_seconds);

// Whole years completed on `on`. A 29 February birthday is reached on
// 1 March in common years.
int age_on(const Date& dob, const Date& on);

enum class VoterStatus { Pending, Verified, Rejected, KeyBound, TokenGranted };
std::string_view status_name(VoterStatus s);
std::optional<VoterStatus> parse_status(std::string_view name);

struct VoterApplication {
  std::string national_id;
  std::string first_name;
  std::string last_name;
  std::string email;
  std::string dob;
  std::string phone;
  std::string voter_card_number;
  std::string city;
  std::string postal_address;
  std::vector<Digest32> photo_hashes;
  std::optional<Digest32> video_hash;
};

// Field order used for validation and for MalformedField reporting.
inline constexpr const char* kApplicationFields[] = {"national_id", "first_name", "last_name",
                                                     "email",       "dob",        "phone",
                                                     "voter_card_number", "city", "postal_address"};

// Returns the name of the first malformed field, if any.
std::optional<std::string> first_malformed_field(const VoterApplication& app);

struct VoterRecord {
  VoterApplication app;
  VoterStatus status = VoterStatus::Pending;
  std::string rejection;  // eligibility reason when Rejected
  std::int64_t registered_at = 0;
};

struct GovRegistryEntry {
  std::string national_id;
  std::string full_name;
  std::string dob;
  std::string phone;
};

// Read-only government record fixture.
class GovRegistry {
 public:
  GovRegistry() = default;
  explicit GovRegistry(std::vector<GovRegistryEntry> entries);
  static GovRegistry from_json(const Json& j);
  static GovRegistry load(const std::filesystem::path& path);

  const GovRegistryEntry* find(const std::string& national_id) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, GovRegistryEntry> entries_;
};

enum class Ineligibility { NotFound, FieldMismatch, Underage };
std::string_view ineligibility_name(Ineligibility r);

struct EligibilityResult {
  bool verified = false;
  std::optional<Ineligibility> reason;
  std::string field;  // FieldMismatch only: "name" or "dob"

  // "Verified", "NotFound", "FieldMismatch(dob)", "Underage".
  std::string describe() const;
};

// Pure eligibility rule.
EligibilityResult check_eligibility(const VoterApplication& app, const GovRegistry& gov, const Date& election_date,
                                    int min_age);

struct KeyBinding {
  std::string national_id;
  PublicKey public_key;
  std::int64_t bound_at = 0;
};

struct Grant {
  std::string national_id;
  Digest32 tx_hash;
  Address address;
  std::int64_t granted_at = 0;
};

struct Session {
  std::string token;  // plaintext, returned once to the client
  std::int64_t expires_at = 0;
};

// Simulated SMS gateway.
class Outbox {
 public:
  virtual ~Outbox() = default;
  virtual void send(const std::string& phone, const std::string& message, std::int64_t now) = 0;
};

class MemoryOutbox : public Outbox {
 public:
  struct Message {
    std::string phone;
    std::string message;
    std::int64_t at;
  };
  void send(const std::string& phone, const std::string& message, std::int64_t now) override;
  const std::vector<Message>& messages() const { return messages_; }
  // Six-digit code from the latest OTP message to `phone`.
  std::optional<std::string> last_code(const std::string& phone) const;

 private:
  std::vector<Message> messages_;
};

class FileOutbox : public Outbox {
 public:
  explicit FileOutbox(const std::filesystem::path& path) : log_(path) {}
  void send(const std::string& phone, const std::string& message, std::int64_t now) override;

 private:
  EventLog log_;
};

struct RegistryConfig {
  Date election_date{};
  std::int64_t registration_deadline = 0;  // grants after this instant are refused
  int min_age = 18;
  std::int64_t otp_ttl_seconds = 300;
  int otp_attempts = 3;
  std::int64_t session_ttl_seconds = 3600;

  static RegistryConfig for_election(const ElectionConfig& cfg);
};

// Server-A private store. Every mutation is written to the event log before
// it is applied, so replaying the log rebuilds the same state.
// Not thread-safe; the service serializes callers.
class Registry {
 public:
  // `secret` keys OTP codes and session tokens; it is never logged.
  Registry(RegistryConfig cfg, Bytes secret, Outbox* outbox, std::unique_ptr<EventLog> log = nullptr);

  // Rebuilds from recorded events (already loaded) without re-logging them.
  void replay(const std::vector<Json>& events);

  const VoterRecord& register_voter(const VoterApplication& app, std::int64_t now);
  EligibilityResult verify_eligibility(const std::string& national_id, const GovRegistry& gov, std::int64_t now);

  // Returns the expiry instant; the code itself goes only to the outbox.
  std::int64_t issue_otp(const std::string& national_id, std::int64_t now);
  Session verify_otp(const std::string& national_id, std::string_view code, std::int64_t now);
  // Throws InvalidSession for unknown or expired tokens.
  std::string session_voter(std::string_view token, std::int64_t now) const;

  const KeyBinding& bind_public_key(std::string_view token, const PublicKey& key, std::int64_t now);

  // Checks preconditions and builds the authority-signed mint without
  // changing state; commit_grant records it. grant_token does both.
  Transaction prepare_grant(const std::string& national_id, std::int64_t now, std::uint64_t authority_nonce,
                            const ElectionConfig& cfg, const KeyPair& authority) const;
  void commit_grant(const std::string& national_id, const Transaction& mint, std::int64_t now);
  Transaction grant_token(const std::string& national_id, std::int64_t now, std::uint64_t authority_nonce,
                          const ElectionConfig& cfg, const KeyPair& authority);

  // At most one submitted ballot per voter; throws AlreadyVoted.
  void record_vote_submitted(const std::string& national_id, const Digest32& tx_hash, std::int64_t now);
  bool vote_submitted(const std::string& national_id) const { return votes_.contains(national_id); }

  const VoterRecord* find(const std::string& national_id) const;
  const KeyBinding* binding_for(const std::string& national_id) const;
  const KeyBinding* binding_for_key(const PublicKey& key) const;
  const Grant* grant_for(const std::string& national_id) const;
  std::set<PublicKey> bound_keys() const;
  std::size_t size() const { return records_.size(); }
  const RegistryConfig& config() const { return cfg_; }

  // Full private state, stable ordering. Equal states serialize identically.
  Json state_json() const;

  // Empty when every stored invariant holds.
  std::vector<std::string> check_invariants() const;

 private:
  struct Otp {
    Digest32 code_hash;
    std::int64_t issued_at = 0;
    std::int64_t expires_at = 0;
    int attempts_remaining = 0;
  };
  struct SessionEntry {
    std::string national_id;
    std::int64_t expires_at = 0;
  };

  VoterRecord& require_record(const std::string& national_id);
  const VoterRecord& require_record(const std::string& national_id) const;
  std::string derive_code(const std::string& national_id, std::uint64_t counter) const;
  Digest32 code_hash(const std::string& national_id, std::string_view code) const;
  std::string derive_token(const std::string& national_id, std::uint64_t counter) const;
  void record(Json event);
  void apply(const Json& event);

  RegistryConfig cfg_;
  Bytes secret_;
  Outbox* outbox_;
  std::unique_ptr<EventLog> log_;
  std::uint64_t seq_ = 0;

  std::map<std::string, VoterRecord> records_;
  std::map<std::string, Otp> otps_;
  std::map<std::string, std::uint64_t> otp_counter_;
  std::map<std::string, std::uint64_t> session_counter_;
  std::map<Digest32, SessionEntry> sessions_;  // keyed by token hash
  std::map<std::string, KeyBinding> bindings_;
  std::map<PublicKey, std::string> key_owner_;
  std::map<std::string, Grant> grants_;
  std::map<std::string, Digest32> votes_;
};

}  // namespace votechain::registry
