// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "common/json.hpp"

namespace votechain::economics {

// All money is in whole currency units.
inline constexpr std::uint64_t kReferenceVoters = 100'000'000;

struct CostParams {
  std::uint64_t voters = kReferenceVoters;
  std::uint64_t dev_cost = 4'000'000;  // 25 staff, 12 months, 80 per hour
  std::uint64_t first_cycle_equipment = 100'000'010;  // per kReferenceVoters
  std::uint64_t subsequent_cycle_cost = 50'000'010;   // per kReferenceVoters
  std::uint64_t paper_ballot_per_voter = 2;
};

struct CostReport {
  std::uint64_t first_cycle_total = 0;
  std::uint64_t subsequent_cycle_total = 0;
  std::uint64_t paper_ballot_total = 0;
  // Per-voter figures in millionths of a unit, rounded half up.
  std::uint64_t per_voter_first_micros = 0;
  std::uint64_t per_voter_subsequent_micros = 0;
  // Smallest n with cumulative proposed cost below n paper-ballot cycles.
  std::optional<std::uint64_t> breakeven_cycle;
};

// Scales the per-reference figures linearly in `voters`, rounding half up.
// Throws InvalidArgument when voters is zero.
CostReport cost_estimate(const CostParams& params);
Json cost_report_to_json(const CostParams& params, const CostReport& report);
// "0.500000" style rendering of a micros value.
std::string format_micros(std::uint64_t micros);

inline constexpr double kFeasibilityThresholdPct = 90.0;

enum class Feasibility { Feasible, Infeasible };
std::string_view feasibility_name(Feasibility f);
// Throws InvalidArgument outside [0, 100] or for NaN.
Feasibility feasibility(double internet_penetration_pct);

}  // namespace votechain::economics
