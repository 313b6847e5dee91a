// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "chain/chain_file.hpp"

#include <fstream>
#include <iterator>
#include <memory>

#include "chain/encoding.hpp"
#include "common/durable.hpp"
#include "common/error.hpp"

namespace votechain {

Bytes encode_chain(std::span<const Block> blocks) {
  ByteWriter w;
  for (const auto& b : blocks) w.bytes(encode(b));
  return std::move(w).take();
}

DecodedChain decode_chain(ByteView data, bool tolerate_torn_tail) {
  DecodedChain out;
  std::size_t pos = 0;
  while (pos < data.size()) {
    const std::size_t record = out.blocks.size();
    const std::size_t left = data.size() - pos;
    std::size_t len = 0;
    if (left >= 4) {
      len = (std::size_t{data[pos]} << 24) | (std::size_t{data[pos + 1]} << 16) | (std::size_t{data[pos + 2]} << 8) |
            std::size_t{data[pos + 3]};
    }
    if (left < 4 || len > left - 4) {
      if (tolerate_torn_tail) {
        out.discarded_tail_bytes = left;
        break;
      }
      throw Error(ErrorCode::DecodeError, std::to_string(record) + " truncated record");
    }
    try {
      out.blocks.push_back(decode_block(data.subspan(pos + 4, len)));
    } catch (const Error& e) {
      throw Error(ErrorCode::DecodeError, std::to_string(record) + " " + e.detail());
    }
    pos += 4 + len;
  }
  return out;
}

ChainVerdict validate_chain_bytes(ByteView data, const ElectionConfig& cfg) {
  try {
    const DecodedChain decoded = decode_chain(data, false);
    return validate_chain(decoded.blocks, cfg);
  } catch (const Error& e) {
    return ChainVerdict::bad(std::stoull(e.detail()), ChainFault::Malformed, {}, e.detail());
  }
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_atomic(const std::filesystem::path& path, ByteView data) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> out(std::fopen(tmp.c_str(), "wb"), &std::fclose);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    durable::write(out.get(), data, tmp);
  }
  std::filesystem::rename(tmp, path);
}

ChainFile::ChainFile(std::filesystem::path path) : path_(std::move(path)) {
  file_ = std::fopen(path_.c_str(), "ab");
  if (!file_) throw Error(ErrorCode::Io, "cannot open " + path_.string());
}

ChainFile::~ChainFile() {
  if (file_) std::fclose(file_);
}

void ChainFile::append(const Block& block) {
  ByteWriter w;
  w.bytes(encode(block));
  const Bytes& rec = w.data();
  durable::write(file_, rec, path_);
}

void ChainFile::rewrite(std::span<const Block> blocks) {
  std::fclose(file_);
  file_ = nullptr;
  write_file_atomic(path_, encode_chain(blocks));
  file_ = std::fopen(path_.c_str(), "ab");
  if (!file_) throw Error(ErrorCode::Io, "cannot reopen " + path_.string());
}

}  // namespace votechain
