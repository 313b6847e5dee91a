// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "registry/registry.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>

#include "chain/election_setup.hpp"
#include "chain/encoding.hpp"
#include "common/error.hpp"

namespace votechain::registry {

namespace chr = std::chrono;

// ---- dates ----

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto num = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  const auto y = num(0, 4), m = num(5, 2), d = num(8, 2);
  if (!y || !m || !d) return std::nullopt;
  const Date date{chr::year{*y}, chr::month{static_cast<unsigned>(*m)}, chr::day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

Date date_of(std::int64_t unix_seconds) {
  return Date{chr::floor<chr::days>(chr::sys_seconds{chr::seconds{unix_seconds}})};
}

int age_on(const Date& dob, const Date& on) {
  int years = static_cast<int>(on.year()) - static_cast<int>(dob.year());
  const auto md_on = std::pair{static_cast<unsigned>(on.month()), static_cast<unsigned>(on.day())};
  const auto md_dob = std::pair{static_cast<unsigned>(dob.month()), static_cast<unsigned>(dob.day())};
  if (md_on < md_dob) --years;
  return years;
}

// ---- names ----

namespace {

constexpr std::pair<VoterStatus, std::string_view> kStatusNames[] = {
    {VoterStatus::Pending, "Pending"},   {VoterStatus::Verified, "Verified"},
    {VoterStatus::Rejected, "Rejected"}, {VoterStatus::KeyBound, "KeyBound"},
    {VoterStatus::TokenGranted, "TokenGranted"},
};

int status_rank(VoterStatus s) {
  switch (s) {
    case VoterStatus::Pending: return 0;
    case VoterStatus::Verified: return 1;
    case VoterStatus::KeyBound: return 2;
    case VoterStatus::TokenGranted: return 3;
    case VoterStatus::Rejected: return 4;
  }
  return 0;
}

// Forward-only: Pending→Verified→KeyBound→TokenGranted, or Pending→Rejected.
bool transition_allowed(VoterStatus from, VoterStatus to) {
  if (to == VoterStatus::Rejected) return from == VoterStatus::Pending;
  if (from == VoterStatus::Rejected) return false;
  return status_rank(to) == status_rank(from) + 1;
}

bool printable(std::string_view s, std::size_t max_len) {
  if (s.empty() || s.size() > max_len) return false;
  if (s.front() == ' ' || s.back() == ' ') return false;
  return std::none_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x20 || c == 0x7f; });
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool valid_email(std::string_view s) {
  if (s.size() > 254 || std::count(s.begin(), s.end(), '@') != 1) return false;
  if (std::any_of(s.begin(), s.end(), [](char c) { return c <= ' ' || c == 0x7f; })) return false;
  const auto at = s.find('@');
  const auto local = s.substr(0, at);
  const auto domain = s.substr(at + 1);
  const auto dot = domain.find('.');
  return !local.empty() && dot != std::string_view::npos && dot > 0 && domain.back() != '.';
}

// E.164: '+', a non-zero leading digit, at most 15 digits in total.
bool valid_phone(std::string_view s) {
  if (s.size() < 9 || s.size() > 16 || s[0] != '+' || s[1] == '0') return false;
  return all_digits(s.substr(1));
}

bool valid_card(std::string_view s) {
  return !s.empty() && s.size() <= 32 &&
         std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; });
}

Json app_to_json(const VoterApplication& a) {
  Json photos = Json::array();
  for (const auto& h : a.photo_hashes) photos.push_back(h.hex());
  return Json{{"national_id", a.national_id},
              {"first_name", a.first_name},
              {"last_name", a.last_name},
              {"email", a.email},
              {"dob", a.dob},
              {"phone", a.phone},
              {"voter_card_number", a.voter_card_number},
              {"city", a.city},
              {"postal_address", a.postal_address},
              {"photo_hashes", photos},
              {"video_hash", a.video_hash ? Json(a.video_hash->hex()) : Json(nullptr)}};
}

VoterApplication app_from_json(const Json& j) {
  VoterApplication a;
  a.national_id = require_string(j, "national_id");
  a.first_name = require_string(j, "first_name");
  a.last_name = require_string(j, "last_name");
  a.email = require_string(j, "email");
  a.dob = require_string(j, "dob");
  a.phone = require_string(j, "phone");
  a.voter_card_number = require_string(j, "voter_card_number");
  a.city = require_string(j, "city");
  a.postal_address = require_string(j, "postal_address");
  for (const auto& h : require(j, "photo_hashes")) a.photo_hashes.push_back(Digest32::from_hex(h.get<std::string>()));
  if (const auto& v = require(j, "video_hash"); !v.is_null()) a.video_hash = Digest32::from_hex(v.get<std::string>());
  return a;
}

Digest32 tagged_hash(std::string_view tag, ByteView key, std::string_view a, std::string_view b) {
  ByteWriter w;
  w.string(tag);
  w.bytes(key);
  w.string(a);
  w.string(b);
  return hash_bytes(w.data());
}

}  // namespace

std::string_view status_name(VoterStatus s) {
  for (const auto& [v, n] : kStatusNames) {
    if (v == s) return n;
  }
  return "Unknown";
}

std::optional<VoterStatus> parse_status(std::string_view name) {
  for (const auto& [v, n] : kStatusNames) {
    if (n == name) return v;
  }
  return std::nullopt;
}

std::optional<std::string> first_malformed_field(const VoterApplication& a) {
  if (a.national_id.size() != 12 || !all_digits(a.national_id)) return "national_id";
  if (!printable(a.first_name, 100)) return "first_name";
  if (!printable(a.last_name, 100)) return "last_name";
  if (!valid_email(a.email)) return "email";
  if (!parse_date(a.dob)) return "dob";
  if (!valid_phone(a.phone)) return "phone";
  if (!valid_card(a.voter_card_number)) return "voter_card_number";
  if (!printable(a.city, 100)) return "city";
  if (!printable(a.postal_address, 200)) return "postal_address";
  return std::nullopt;
}

// ---- government fixture ----

GovRegistry::GovRegistry(std::vector<GovRegistryEntry> entries) {
  for (auto& e : entries) {
    const std::string id = e.national_id;
    if (!entries_.emplace(id, std::move(e)).second) throw Error(ErrorCode::Config, "duplicate fixture id");
  }
}

GovRegistry GovRegistry::from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::Config, "government registry must be a JSON array");
  std::vector<GovRegistryEntry> entries;
  try {
    for (const auto& e : j) {
      entries.push_back({require_string(e, "national_id"), require_string(e, "full_name"), require_string(e, "dob"),
                         e.value("phone", std::string{})});
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.detail());
  }
  return GovRegistry(std::move(entries));
}

GovRegistry GovRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return from_json(parse_json(text));
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, path.filename().string() + ": " + e.detail());
  }
}

const GovRegistryEntry* GovRegistry::find(const std::string& national_id) const {
  const auto it = entries_.find(national_id);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string_view ineligibility_name(Ineligibility r) {
  switch (r) {
    case Ineligibility::NotFound: return "NotFound";
    case Ineligibility::FieldMismatch: return "FieldMismatch";
    case Ineligibility::Underage: return "Underage";
  }
  return "Unknown";
}

std::string EligibilityResult::describe() const {
  if (verified) return "Verified";
  std::string out(ineligibility_name(*reason));
  if (*reason == Ineligibility::FieldMismatch) out += "(" + field + ")";
  return out;
}

EligibilityResult check_eligibility(const VoterApplication& app, const GovRegistry& gov, const Date& election_date,
                                    int min_age) {
  const GovRegistryEntry* entry = gov.find(app.national_id);
  if (!entry) return {false, Ineligibility::NotFound, {}};
  if (entry->full_name != app.first_name + " " + app.last_name) return {false, Ineligibility::FieldMismatch, "name"};
  if (entry->dob != app.dob) return {false, Ineligibility::FieldMismatch, "dob"};
  const auto dob = parse_date(app.dob);
  if (!dob || age_on(*dob, election_date) < min_age) return {false, Ineligibility::Underage, {}};
  return {true, std::nullopt, {}};
}

// ---- outboxes ----

void MemoryOutbox::send(const std::string& phone, const std::string& message, std::int64_t now) {
  messages_.push_back({phone, message, now});
}

std::optional<std::string> MemoryOutbox::last_code(const std::string& phone) const {
  for (auto it = messages_.rbegin(); it != messages_.rend(); ++it) {
    if (it->phone != phone) continue;
    const auto pos = it->message.find("code is ");
    if (pos != std::string::npos) return it->message.substr(pos + 8, 6);
  }
  return std::nullopt;
}

void FileOutbox::send(const std::string& phone, const std::string& message, std::int64_t now) {
  log_.append(Json{{"t", now}, {"to", phone}, {"message", message}});
}

RegistryConfig RegistryConfig::for_election(const ElectionConfig& cfg) {
  RegistryConfig rc;
  rc.election_date = date_of(cfg.start_time);
  rc.registration_deadline = cfg.end_time;
  return rc;
}

// ---- Registry ----

Registry::Registry(RegistryConfig cfg, Bytes secret, Outbox* outbox, std::unique_ptr<EventLog> log)
    : cfg_(cfg), secret_(std::move(secret)), outbox_(outbox), log_(std::move(log)) {}

void Registry::replay(const std::vector<Json>& events) {
  for (const auto& ev : events) {
    try {
      apply(ev);
    } catch (const Error& e) {
      throw Error(ErrorCode::CorruptStore, "registry event " + std::to_string(seq_ + 1) + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::CorruptStore, "registry event " + std::to_string(seq_ + 1) + ": " + e.what());
    }
  }
}

void Registry::record(Json event) {
  event["seq"] = seq_ + 1;
  if (log_) log_->append(event);
  apply(event);
}

void Registry::apply(const Json& ev) {
  const std::uint64_t seq = ev.at("seq").get<std::uint64_t>();
  if (seq != seq_ + 1) throw Error(ErrorCode::CorruptStore, "sequence gap");
  const std::string type = require_string(ev, "type");
  const std::string nid = require_string(ev, "national_id");

  auto advance = [&](VoterStatus to) {
    VoterRecord& r = require_record(nid);
    if (!transition_allowed(r.status, to)) {
      throw Error(ErrorCode::CorruptStore, "backward status transition for a record");
    }
    r.status = to;
  };

  if (type == "registered") {
    VoterRecord r;
    r.app = app_from_json(require(ev, "application"));
    r.registered_at = require_int(ev, "at");
    if (r.app.national_id != nid || !records_.emplace(nid, std::move(r)).second) {
      throw Error(ErrorCode::CorruptStore, "duplicate registration");
    }
  } else if (type == "eligibility") {
    const bool verified = require(ev, "verified").get<bool>();
    advance(verified ? VoterStatus::Verified : VoterStatus::Rejected);
    if (!verified) require_record(nid).rejection = require_string(ev, "reason");
  } else if (type == "otp_issued") {
    otps_[nid] = Otp{Digest32::from_hex(require_string(ev, "code_hash")), require_int(ev, "issued_at"),
                     require_int(ev, "expires_at"), static_cast<int>(require_int(ev, "attempts"))};
    otp_counter_[nid] = static_cast<std::uint64_t>(require_int(ev, "counter")) + 1;
  } else if (type == "otp_failed") {
    auto it = otps_.find(nid);
    if (it == otps_.end()) throw Error(ErrorCode::CorruptStore, "attempt without challenge");
    it->second.attempts_remaining = static_cast<int>(require_int(ev, "attempts_remaining"));
  } else if (type == "otp_verified") {
    otps_.erase(nid);
    sessions_[Digest32::from_hex(require_string(ev, "token_hash"))] = {nid, require_int(ev, "expires_at")};
    session_counter_[nid] = static_cast<std::uint64_t>(require_int(ev, "counter")) + 1;
  } else if (type == "bound") {
    const PublicKey key = PublicKey::from_hex(require_string(ev, "public_key"));
    if (bindings_.contains(nid) || key_owner_.contains(key)) throw Error(ErrorCode::CorruptStore, "double binding");
    advance(VoterStatus::KeyBound);
    bindings_[nid] = {nid, key, require_int(ev, "at")};
    key_owner_[key] = nid;
  } else if (type == "granted") {
    if (grants_.contains(nid)) throw Error(ErrorCode::CorruptStore, "double grant");
    advance(VoterStatus::TokenGranted);
    grants_[nid] = {nid, Digest32::from_hex(require_string(ev, "tx_hash")),
                    Address::from_hex(require_string(ev, "address")), require_int(ev, "at")};
  } else if (type == "vote_submitted") {
    if (!votes_.emplace(nid, Digest32::from_hex(require_string(ev, "tx_hash"))).second) {
      throw Error(ErrorCode::CorruptStore, "double vote record");
    }
  } else {
    throw Error(ErrorCode::CorruptStore, "unknown event type " + type);
  }
  seq_ = seq;
}

VoterRecord& Registry::require_record(const std::string& national_id) {
  const auto it = records_.find(national_id);
  if (it == records_.end()) throw Error(ErrorCode::UnknownVoter, "no such registration");
  return it->second;
}

const VoterRecord& Registry::require_record(const std::string& national_id) const {
  return const_cast<Registry*>(this)->require_record(national_id);
}

const VoterRecord* Registry::find(const std::string& national_id) const {
  const auto it = records_.find(national_id);
  return it == records_.end() ? nullptr : &it->second;
}

const VoterRecord& Registry::register_voter(const VoterApplication& app, std::int64_t now) {
  if (auto field = first_malformed_field(app)) throw Error(ErrorCode::MalformedField, *field);
  if (records_.contains(app.national_id)) throw Error(ErrorCode::DuplicateNationalId, "national_id already registered");
  record({{"type", "registered"}, {"national_id", app.national_id}, {"at", now}, {"application", app_to_json(app)}});
  return records_.at(app.national_id);
}

EligibilityResult Registry::verify_eligibility(const std::string& national_id, const GovRegistry& gov,
                                               std::int64_t now) {
  const VoterRecord& r = require_record(national_id);
  if (r.status != VoterStatus::Pending) throw Error(ErrorCode::InvalidState, "record is not Pending");
  const EligibilityResult result = check_eligibility(r.app, gov, cfg_.election_date, cfg_.min_age);
  record({{"type", "eligibility"},
          {"national_id", national_id},
          {"at", now},
          {"verified", result.verified},
          {"reason", result.describe()}});
  if (outbox_) {
    outbox_->send(r.app.phone,
                  result.verified ? "Eligibility check passed." : "Eligibility check failed: " + result.describe() + ".",
                  now);
  }
  return result;
}

std::string Registry::derive_code(const std::string& national_id, std::uint64_t counter) const {
  const Digest32 d = tagged_hash("votechain/otp", secret_, national_id, std::to_string(counter));
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | d.bytes[i];
  char buf[8];
  std::snprintf(buf, sizeof buf, "%06u", static_cast<unsigned>(v % 1'000'000));
  return buf;
}

Digest32 Registry::code_hash(const std::string& national_id, std::string_view code) const {
  return tagged_hash("votechain/otp-hash", secret_, national_id, code);
}

std::string Registry::derive_token(const std::string& national_id, std::uint64_t counter) const {
  return tagged_hash("votechain/session", secret_, national_id, std::to_string(counter)).hex();
}

std::int64_t Registry::issue_otp(const std::string& national_id, std::int64_t now) {
  const VoterRecord& r = require_record(national_id);
  if (r.status == VoterStatus::Pending || r.status == VoterStatus::Rejected) {
    throw Error(ErrorCode::NotVerified, std::string(status_name(r.status)));
  }
  const std::uint64_t counter = otp_counter_.contains(national_id) ? otp_counter_.at(national_id) : 0;
  const std::string code = derive_code(national_id, counter);
  const std::int64_t expires = now + cfg_.otp_ttl_seconds;
  record({{"type", "otp_issued"},
          {"national_id", national_id},
          {"code_hash", code_hash(national_id, code).hex()},
          {"issued_at", now},
          {"expires_at", expires},
          {"attempts", cfg_.otp_attempts},
          {"counter", counter}});
  if (outbox_) {
    outbox_->send(r.app.phone,
                  "Your votechain verification code is " + code + ". It expires in " +
                      std::to_string(cfg_.otp_ttl_seconds) + " seconds.",
                  now);
  }
  return expires;
}

Session Registry::verify_otp(const std::string& national_id, std::string_view code, std::int64_t now) {
  require_record(national_id);
  const auto it = otps_.find(national_id);
  if (it == otps_.end()) throw Error(ErrorCode::NoChallenge, "no outstanding code");
  const Otp& otp = it->second;
  if (otp.attempts_remaining <= 0) throw Error(ErrorCode::Exhausted, "attempt limit reached");
  if (now > otp.expires_at) throw Error(ErrorCode::Expired, "code expired");
  const Digest32 presented = code_hash(national_id, code);
  if (!constant_time_equal(presented.view(), otp.code_hash.view())) {
    const int left = otp.attempts_remaining - 1;
    record({{"type", "otp_failed"}, {"national_id", national_id}, {"attempts_remaining", left}});
    throw Error(ErrorCode::WrongCode, std::to_string(left) + " attempts remaining");
  }
  const std::uint64_t counter = session_counter_.contains(national_id) ? session_counter_.at(national_id) : 0;
  Session s{derive_token(national_id, counter), now + cfg_.session_ttl_seconds};
  record({{"type", "otp_verified"},
          {"national_id", national_id},
          {"token_hash", hash_bytes(as_bytes(s.token)).hex()},
          {"expires_at", s.expires_at},
          {"counter", counter}});
  return s;
}

std::string Registry::session_voter(std::string_view token, std::int64_t now) const {
  const auto it = sessions_.find(hash_bytes(as_bytes(token)));
  if (it == sessions_.end() || now > it->second.expires_at) throw Error(ErrorCode::InvalidSession, "session invalid");
  return it->second.national_id;
}

const KeyBinding& Registry::bind_public_key(std::string_view token, const PublicKey& key, std::int64_t now) {
  const std::string nid = session_voter(token, now);
  const VoterRecord& r = require_record(nid);
  if (bindings_.contains(nid)) throw Error(ErrorCode::AlreadyBound, "login already has a key");
  if (r.status != VoterStatus::Verified) throw Error(ErrorCode::NotVerified, std::string(status_name(r.status)));
  if (key_owner_.contains(key)) throw Error(ErrorCode::KeyInUse, "key bound to another login");
  record({{"type", "bound"}, {"national_id", nid}, {"public_key", key.hex()}, {"at", now}});
  return bindings_.at(nid);
}

Transaction Registry::prepare_grant(const std::string& national_id, std::int64_t now, std::uint64_t authority_nonce,
                                    const ElectionConfig& cfg, const KeyPair& authority) const {
  const VoterRecord& r = require_record(national_id);
  if (grants_.contains(national_id)) throw Error(ErrorCode::AlreadyGranted, "token already granted");
  if (r.status != VoterStatus::KeyBound) throw Error(ErrorCode::NotKeyBound, std::string(status_name(r.status)));
  if (now > cfg_.registration_deadline) throw Error(ErrorCode::OutsideRegistrationWindow, "registration closed");
  return make_mint(cfg, authority, derive_address(bindings_.at(national_id).public_key), authority_nonce, now);
}

void Registry::commit_grant(const std::string& national_id, const Transaction& mint, std::int64_t now) {
  const KeyBinding* b = binding_for(national_id);
  if (!b || mint.kind != TxKind::Mint || mint.to_address != derive_address(b->public_key)) {
    throw Error(ErrorCode::InvalidArgument, "mint does not match the binding");
  }
  if (grants_.contains(national_id)) throw Error(ErrorCode::AlreadyGranted, "token already granted");
  record({{"type", "granted"},
          {"national_id", national_id},
          {"tx_hash", tx_hash(mint).hex()},
          {"address", mint.to_address.hex()},
          {"at", now}});
}

Transaction Registry::grant_token(const std::string& national_id, std::int64_t now, std::uint64_t authority_nonce,
                                  const ElectionConfig& cfg, const KeyPair& authority) {
  Transaction mint = prepare_grant(national_id, now, authority_nonce, cfg, authority);
  commit_grant(national_id, mint, now);
  return mint;
}

void Registry::record_vote_submitted(const std::string& national_id, const Digest32& tx, std::int64_t now) {
  require_record(national_id);
  if (votes_.contains(national_id)) throw Error(ErrorCode::AlreadyVoted, "ballot already submitted");
  record({{"type", "vote_submitted"}, {"national_id", national_id}, {"tx_hash", tx.hex()}, {"at", now}});
}

const KeyBinding* Registry::binding_for(const std::string& national_id) const {
  const auto it = bindings_.find(national_id);
  return it == bindings_.end() ? nullptr : &it->second;
}

const KeyBinding* Registry::binding_for_key(const PublicKey& key) const {
  const auto it = key_owner_.find(key);
  return it == key_owner_.end() ? nullptr : binding_for(it->second);
}

const Grant* Registry::grant_for(const std::string& national_id) const {
  const auto it = grants_.find(national_id);
  return it == grants_.end() ? nullptr : &it->second;
}

std::set<PublicKey> Registry::bound_keys() const {
  std::set<PublicKey> out;
  for (const auto& [k, nid] : key_owner_) out.insert(k);
  return out;
}

Json Registry::state_json() const {
  Json j;
  j["seq"] = seq_;
  Json records = Json::array();
  for (const auto& [nid, r] : records_) {
    records.push_back({{"application", app_to_json(r.app)},
                       {"status", status_name(r.status)},
                       {"rejection", r.rejection},
                       {"registered_at", r.registered_at}});
  }
  j["records"] = std::move(records);
  Json otps = Json::object();
  for (const auto& [nid, o] : otps_) {
    otps[nid] = {{"code_hash", o.code_hash.hex()},
                 {"issued_at", o.issued_at},
                 {"expires_at", o.expires_at},
                 {"attempts_remaining", o.attempts_remaining}};
  }
  j["otps"] = std::move(otps);
  j["otp_counters"] = otp_counter_;
  j["session_counters"] = session_counter_;
  Json sessions = Json::object();
  for (const auto& [h, s] : sessions_) sessions[h.hex()] = {{"national_id", s.national_id}, {"expires_at", s.expires_at}};
  j["sessions"] = std::move(sessions);
  Json bindings = Json::object();
  for (const auto& [nid, b] : bindings_) bindings[nid] = {{"public_key", b.public_key.hex()}, {"bound_at", b.bound_at}};
  j["bindings"] = std::move(bindings);
  Json grants = Json::object();
  for (const auto& [nid, g] : grants_) {
    grants[nid] = {{"tx_hash", g.tx_hash.hex()}, {"address", g.address.hex()}, {"granted_at", g.granted_at}};
  }
  j["grants"] = std::move(grants);
  Json votes = Json::object();
  for (const auto& [nid, h] : votes_) votes[nid] = h.hex();
  j["votes"] = std::move(votes);
  return j;
}

std::vector<std::string> Registry::check_invariants() const {
  std::vector<std::string> problems;
  for (const auto& [nid, r] : records_) {
    if (r.app.national_id != nid) problems.push_back("record key mismatch");
    const bool bound = bindings_.contains(nid);
    const bool granted = grants_.contains(nid);
    const bool expect_bound = r.status == VoterStatus::KeyBound || r.status == VoterStatus::TokenGranted;
    if (bound != expect_bound) problems.push_back("binding/status mismatch for a record");
    if (granted != (r.status == VoterStatus::TokenGranted)) problems.push_back("grant/status mismatch for a record");
    if (granted && bound && grants_.at(nid).address != derive_address(bindings_.at(nid).public_key)) {
      problems.push_back("grant address differs from bound key");
    }
    if (votes_.contains(nid) && !granted) problems.push_back("vote recorded for an ungranted voter");
  }
  if (key_owner_.size() != bindings_.size()) problems.push_back("key index size mismatch");
  for (const auto& [key, nid] : key_owner_) {
    const auto it = bindings_.find(nid);
    if (it == bindings_.end() || it->second.public_key != key) problems.push_back("key index inconsistent");
  }
  return problems;
}

}  // namespace votechain::registry
