// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace votechain {

// One enum for every module so the same machine code crosses the C API, the
// CLI exit path and the HTTP error body unchanged. Names are part of the wire
// format: append only.
enum class ErrorCode {
  // generic
  InvalidArgument,
  Io,
  Config,
  CorruptStore,
  NotFound,
  Unauthorized,
  BindFailure,
  IdempotencyKeyRequired,
  InvalidState,
  Internal,

  // chain_core
  KeyMismatch,
  BuildRejected,
  NonLinking,
  NotFinalized,
  InvalidTx,
  InvalidChain,
  NoCanonicalChain,
  DecodeError,

  // transaction reject reasons (mirrors RejectReason)
  BadSignature,
  OutsideWindow,
  InsufficientBalance,
  BadNonce,
  UnknownRecipient,
  DoubleVote,
  MalformedTransaction,
  DuplicateMint,

  // registry
  DuplicateNationalId,
  MalformedField,
  UnknownVoter,
  NotVerified,
  NoChallenge,
  Expired,
  Exhausted,
  WrongCode,
  InvalidSession,
  AlreadyBound,
  KeyInUse,
  NotKeyBound,
  AlreadyGranted,
  OutsideRegistrationWindow,

  // arbitration
  NotRegistered,
  NotGranted,
  WindowClosed,
  AlreadyVoted,
  UnknownSession,
  SessionNotOpen,
  EmptyFrame,
  InsufficientLiveness,
  BallotMismatch,

  // tally / explorer
  WindowStillOpen,
  AlreadySwept,
  PageOutOfRange,

  // election lifecycle
  NoElection,
  ElectionExists,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail = {});

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace votechain
