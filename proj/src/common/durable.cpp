// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "common/durable.hpp"

#include <algorithm>
#include <mutex>
#include <optional>

#include "common/error.hpp"

namespace votechain::durable {

namespace {

struct CrashPlan {
  std::uint64_t at_write = 0;
  std::size_t keep_bytes = 0;
};

std::mutex g_mu;
std::optional<CrashPlan> g_plan;
std::uint64_t g_writes = 0;

void raw_write(std::FILE* file, ByteView data, const std::filesystem::path& path) {
  if ((!data.empty() && std::fwrite(data.data(), 1, data.size(), file) != data.size()) || std::fflush(file) != 0) {
    throw Error(ErrorCode::Io, "write failed " + path.string());
  }
}

}  // namespace

void write(std::FILE* file, ByteView data, const std::filesystem::path& path) {
  std::unique_lock lock(g_mu);
  const std::uint64_t ordinal = g_writes++;
  if (g_plan && ordinal == g_plan->at_write) {
    const std::size_t keep = std::min(g_plan->keep_bytes, data.size());
    g_plan.reset();
    raw_write(file, data.first(keep), path);
    throw CrashInjected{};
  }
  lock.unlock();
  raw_write(file, data, path);
}

void arm_crash(std::uint64_t at_write, std::size_t keep_bytes) {
  std::lock_guard lock(g_mu);
  g_writes = 0;
  g_plan = CrashPlan{at_write, keep_bytes};
}

void disarm() {
  std::lock_guard lock(g_mu);
  g_plan.reset();
}

std::uint64_t writes_since_arm() {
  std::lock_guard lock(g_mu);
  return g_writes;
}

}  // namespace votechain::durable
