// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdio>
#include <filesystem>
#include <vector>

#include "common/json.hpp"

namespace votechain {

// Append-only log of JSON records, one per line.
class EventLog {
 public:
  struct Loaded {
    std::vector<Json> records;
    std::size_t discarded_tail_bytes = 0;
  };

  // Reads every record. A final line without its newline, or one that does
  // not parse, is a torn write: it is dropped and the file truncated to the
  // last complete record. A bad line anywhere else throws
  // Error(CorruptStore, "<file>:<line>"). A missing file loads as empty.
  static Loaded load(const std::filesystem::path& path);

  explicit EventLog(std::filesystem::path path);
  ~EventLog();
  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  void append(const Json& record);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
};

}  // namespace votechain
