// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace votechain::service {

// Diagnostics go to stderr; stdout belongs to reports. SPDLOG_LEVEL
// (for example "warn") adjusts verbosity.
inline spdlog::logger& log() {
  static const auto logger = [] {
    auto l = spdlog::get("votechain");
    if (l) return l;
    l = spdlog::stderr_color_mt("votechain");
    spdlog::cfg::load_env_levels();
    return l;
  }();
  return *logger;
}

}  // namespace votechain::service
