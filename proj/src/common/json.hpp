// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <json.hpp>
#include <string>
#include <string_view>

namespace votechain {

// Insertion-ordered so every report and log line has a stable field order.
using Json = nlohmann::ordered_json;

// Parses text, throwing Error(InvalidArgument) with the parser message.
Json parse_json(std::string_view text);
// Throws Error(InvalidArgument, "<key>") when the field is absent or has the
// wrong type.
const Json& require(const Json& obj, const char* key);
std::string require_string(const Json& obj, const char* key);
std::int64_t require_int(const Json& obj, const char* key);

}  // namespace votechain
