// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "common/json.hpp"

#include "common/error.hpp"

namespace votechain {

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, e.what());
  }
}

const Json& require(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw Error(ErrorCode::InvalidArgument, std::string("missing ") + key);
  return obj.at(key);
}

std::string require_string(const Json& obj, const char* key) {
  const Json& v = require(obj, key);
  if (!v.is_string()) throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be a string");
  return v.get<std::string>();
}

std::int64_t require_int(const Json& obj, const char* key) {
  const Json& v = require(obj, key);
  if (!v.is_number_integer()) throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace votechain
