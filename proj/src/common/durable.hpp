// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>

#include "common/bytes.hpp"

namespace votechain::durable {

// Thrown by write() when an armed crash point is reached. Deliberately not an
// Error so that no handler mistakes it for a domain failure.
struct CrashInjected : std::exception {
  const char* what() const noexcept override { return "injected crash"; }
};

// Appends and flushes `data`. Every call counts as one durable write.
void write(std::FILE* file, ByteView data, const std::filesystem::path& path);

// Crash at the write with zero-based ordinal `at_write` counted from now,
// after persisting only `keep_bytes` of it (clamped to its size).
void arm_crash(std::uint64_t at_write, std::size_t keep_bytes);
void disarm();
std::uint64_t writes_since_arm();

}  // namespace votechain::durable
