// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "common/event_log.hpp"

#include <fstream>
#include <iterator>

#include "common/durable.hpp"
#include "common/error.hpp"

namespace votechain {

EventLog::Loaded EventLog::load(const std::filesystem::path& path) {
  Loaded out;
  if (!std::filesystem::exists(path)) return out;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::size_t good_end = 0;
  while (pos < text.size()) {
    ++line_no;
    const std::size_t nl = text.find('\n', pos);
    const bool last = nl == std::string::npos || nl + 1 == text.size();
    if (nl == std::string::npos) {
      out.discarded_tail_bytes = text.size() - pos;
      break;
    }
    try {
      out.records.push_back(parse_json(std::string_view(text).substr(pos, nl - pos)));
    } catch (const Error&) {
      if (!last) throw Error(ErrorCode::CorruptStore, path.filename().string() + ":" + std::to_string(line_no));
      out.discarded_tail_bytes = text.size() - pos;
      break;
    }
    pos = nl + 1;
    good_end = pos;
  }
  if (out.discarded_tail_bytes > 0) std::filesystem::resize_file(path, good_end);
  return out;
}

EventLog::EventLog(std::filesystem::path path) : path_(std::move(path)) {
  file_ = std::fopen(path_.c_str(), "ab");
  if (!file_) throw Error(ErrorCode::Io, "cannot open " + path_.string());
}

EventLog::~EventLog() {
  if (file_) std::fclose(file_);
}

void EventLog::append(const Json& record) {
  std::string line = record.dump();
  line += '\n';
  durable::write(file_, as_bytes(line), path_);
}

}  // namespace votechain
