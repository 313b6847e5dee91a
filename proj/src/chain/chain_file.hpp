// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdio>
#include <filesystem>
#include <span>
#include <vector>

#include "chain/block.hpp"
#include "chain/ledger.hpp"

namespace votechain {

// Append-only sequence of records, each a 4-byte big-endian length followed by
// encode(block).
Bytes encode_chain(std::span<const Block> blocks);

struct DecodedChain {
  std::vector<Block> blocks;
  std::size_t discarded_tail_bytes = 0;
};

// Strict mode rejects any framing problem. Tolerant mode drops an incomplete
// final record (a torn write) and reports its size; a complete record that
// fails to decode is always an error. Throws Error(DecodeError) carrying the
// index of the offending record.
DecodedChain decode_chain(ByteView data, bool tolerate_torn_tail);

// Strict decode followed by validate_chain; a framing failure is reported as
// ChainFault::Malformed at the record where it occurred.
ChainVerdict validate_chain_bytes(ByteView data, const ElectionConfig& cfg);

Bytes read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, ByteView data);

class ChainFile {
 public:
  explicit ChainFile(std::filesystem::path path);
  ~ChainFile();
  ChainFile(const ChainFile&) = delete;
  ChainFile& operator=(const ChainFile&) = delete;

  void append(const Block& block);
  // Rewrites the file to exactly these blocks, e.g. after dropping a torn tail.
  void rewrite(std::span<const Block> blocks);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
};

}  // namespace votechain
