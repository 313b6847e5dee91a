// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "economics/economics.hpp"

#include <cmath>
#include <limits>

#include "common/error.hpp"

namespace votechain::economics {

namespace {

using u128 = unsigned __int128;

std::uint64_t narrow(u128 v) {
  if (v > std::numeric_limits<std::uint64_t>::max()) throw Error(ErrorCode::InvalidArgument, "cost overflows 64 bits");
  return static_cast<std::uint64_t>(v);
}

std::uint64_t div_round(u128 num, u128 den) { return narrow((num + den / 2) / den); }

std::uint64_t scale(std::uint64_t per_reference, std::uint64_t voters) {
  return div_round(static_cast<u128>(per_reference) * voters, kReferenceVoters);
}

std::optional<std::uint64_t> breakeven(std::uint64_t first, std::uint64_t subsequent, std::uint64_t ballot) {
  // first + (n - 1) * subsequent < n * ballot  <=>  first - subsequent < n * (ballot - subsequent)
  if (first < ballot) return 1;
  if (ballot <= subsequent) return std::nullopt;
  return narrow((static_cast<u128>(first) - subsequent) / (ballot - subsequent) + 1);
}

}  // namespace

CostReport cost_estimate(const CostParams& p) {
  if (p.voters == 0) throw Error(ErrorCode::InvalidArgument, "voters must be positive");
  CostReport r;
  r.first_cycle_total = narrow(static_cast<u128>(p.dev_cost) + scale(p.first_cycle_equipment, p.voters));
  r.subsequent_cycle_total = scale(p.subsequent_cycle_cost, p.voters);
  r.paper_ballot_total = narrow(static_cast<u128>(p.voters) * p.paper_ballot_per_voter);
  r.per_voter_first_micros = div_round(static_cast<u128>(r.first_cycle_total) * 1'000'000, p.voters);
  r.per_voter_subsequent_micros = div_round(static_cast<u128>(r.subsequent_cycle_total) * 1'000'000, p.voters);
  r.breakeven_cycle = breakeven(r.first_cycle_total, r.subsequent_cycle_total, r.paper_ballot_total);
  return r;
}

std::string format_micros(std::uint64_t micros) {
  std::string frac = std::to_string(micros % 1'000'000);
  return std::to_string(micros / 1'000'000) + "." + std::string(6 - frac.size(), '0') + frac;
}

Json cost_report_to_json(const CostParams& p, const CostReport& r) {
  Json j;
  j["voters"] = p.voters;
  j["dev_cost"] = p.dev_cost;
  j["first_cycle_equipment"] = p.first_cycle_equipment;
  j["subsequent_cycle_cost"] = p.subsequent_cycle_cost;
  j["paper_ballot_per_voter"] = p.paper_ballot_per_voter;
  j["first_cycle_total"] = r.first_cycle_total;
  j["subsequent_cycle_total"] = r.subsequent_cycle_total;
  j["paper_ballot_total"] = r.paper_ballot_total;
  j["per_voter_first"] = format_micros(r.per_voter_first_micros);
  j["per_voter_subsequent"] = format_micros(r.per_voter_subsequent_micros);
  j["breakeven_cycle"] = r.breakeven_cycle ? Json(*r.breakeven_cycle) : Json(nullptr);
  return j;
}

std::string_view feasibility_name(Feasibility f) { return f == Feasibility::Feasible ? "Feasible" : "Infeasible"; }

Feasibility feasibility(double pct) {
  if (!(pct >= 0.0 && pct <= 100.0)) throw Error(ErrorCode::InvalidArgument, "penetration must be within [0, 100]");
  return pct >= kFeasibilityThresholdPct ? Feasibility::Feasible : Feasibility::Infeasible;
}

}  // namespace votechain::economics
