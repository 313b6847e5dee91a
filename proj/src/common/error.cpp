// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "common/error.hpp"

namespace votechain {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
    case ErrorCode::CorruptStore: return "CorruptStore";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Unauthorized: return "Unauthorized";
    case ErrorCode::BindFailure: return "BindFailure";
    case ErrorCode::IdempotencyKeyRequired: return "IdempotencyKeyRequired";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::Internal: return "Internal";
    case ErrorCode::KeyMismatch: return "KeyMismatch";
    case ErrorCode::BuildRejected: return "BuildRejected";
    case ErrorCode::NonLinking: return "NonLinking";
    case ErrorCode::NotFinalized: return "NotFinalized";
    case ErrorCode::InvalidTx: return "InvalidTx";
    case ErrorCode::InvalidChain: return "InvalidChain";
    case ErrorCode::NoCanonicalChain: return "NoCanonicalChain";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::BadSignature: return "BadSignature";
    case ErrorCode::OutsideWindow: return "OutsideWindow";
    case ErrorCode::InsufficientBalance: return "InsufficientBalance";
    case ErrorCode::BadNonce: return "BadNonce";
    case ErrorCode::UnknownRecipient: return "UnknownRecipient";
    case ErrorCode::DoubleVote: return "DoubleVote";
    case ErrorCode::MalformedTransaction: return "MalformedTransaction";
    case ErrorCode::DuplicateMint: return "DuplicateMint";
    case ErrorCode::DuplicateNationalId: return "DuplicateNationalId";
    case ErrorCode::MalformedField: return "MalformedField";
    case ErrorCode::UnknownVoter: return "UnknownVoter";
    case ErrorCode::NotVerified: return "NotVerified";
    case ErrorCode::NoChallenge: return "NoChallenge";
    case ErrorCode::Expired: return "Expired";
    case ErrorCode::Exhausted: return "Exhausted";
    case ErrorCode::WrongCode: return "WrongCode";
    case ErrorCode::InvalidSession: return "InvalidSession";
    case ErrorCode::AlreadyBound: return "AlreadyBound";
    case ErrorCode::KeyInUse: return "KeyInUse";
    case ErrorCode::NotKeyBound: return "NotKeyBound";
    case ErrorCode::AlreadyGranted: return "AlreadyGranted";
    case ErrorCode::OutsideRegistrationWindow: return "OutsideRegistrationWindow";
    case ErrorCode::NotRegistered: return "NotRegistered";
    case ErrorCode::NotGranted: return "NotGranted";
    case ErrorCode::WindowClosed: return "WindowClosed";
    case ErrorCode::AlreadyVoted: return "AlreadyVoted";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::SessionNotOpen: return "SessionNotOpen";
    case ErrorCode::EmptyFrame: return "EmptyFrame";
    case ErrorCode::InsufficientLiveness: return "InsufficientLiveness";
    case ErrorCode::BallotMismatch: return "BallotMismatch";
    case ErrorCode::WindowStillOpen: return "WindowStillOpen";
    case ErrorCode::AlreadySwept: return "AlreadySwept";
    case ErrorCode::PageOutOfRange: return "PageOutOfRange";
    case ErrorCode::NoElection: return "NoElection";
    case ErrorCode::ElectionExists: return "ElectionExists";
  }
  return "Internal";
}

namespace {
std::string compose(ErrorCode code, const std::string& detail) {
  std::string msg(error_code_name(code));
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  return msg;
}
}  // namespace

Error::Error(ErrorCode code, std::string detail)
    : std::runtime_error(compose(code, detail)), code_(code), detail_(std::move(detail)) {}

}  // namespace votechain
