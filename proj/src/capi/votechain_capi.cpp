// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "votechain/votechain.h"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <memory>
#include <string>

#include "common/durable.hpp"
#include "consensus/simulator.hpp"
#include "economics/economics.hpp"
#include "service/http_server.hpp"
#include "service/service.hpp"

using votechain::Error;
using votechain::ErrorCode;
using votechain::Json;

struct vc_service {
  std::unique_ptr<votechain::service::Service> service;
  std::unique_ptr<votechain::service::HttpServer> server;
};

namespace {

thread_local std::string g_code;
thread_local std::string g_message;

vc_status status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::MalformedField:
      return VC_E_INVALID_ARGUMENT;
    case ErrorCode::Config:
      return VC_E_CONFIG;
    case ErrorCode::Io:
    case ErrorCode::BindFailure:
      return VC_E_IO;
    case ErrorCode::CorruptStore:
    case ErrorCode::InvalidChain:
    case ErrorCode::DecodeError:
    case ErrorCode::NoCanonicalChain:
      return VC_E_CORRUPT;
    case ErrorCode::Internal:
      return VC_E_INTERNAL;
    default:
      return VC_E_STATE;
  }
}

vc_status fail(vc_status s, std::string code, std::string message) {
  g_code = std::move(code);
  g_message = std::move(message);
  return s;
}

template <typename F>
vc_status guarded(F&& body) {
  g_code.clear();
  g_message.clear();
  try {
    body();
    return VC_OK;
  } catch (const Error& e) {
    return fail(status_for(e.code()), std::string(votechain::error_code_name(e.code())), e.detail());
  } catch (const Json::exception& e) {
    return fail(VC_E_INVALID_ARGUMENT, "InvalidArgument", e.what());
  } catch (const std::bad_alloc&) {
    return fail(VC_E_INTERNAL, "Internal", "out of memory");
  } catch (const std::exception& e) {
    return fail(VC_E_INTERNAL, "Internal", e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

Json parse_arg(const char* text, const char* what) {
  try {
    return votechain::parse_json(text);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " is not valid JSON");
  }
}

std::map<std::string, std::string> string_map(const char* text, const char* what, bool lowercase_keys) {
  std::map<std::string, std::string> out;
  if (!text) return out;
  const Json j = parse_arg(text, what);
  require(j.is_object(), what);
  for (const auto& [k, v] : j.items()) {
    require(v.is_string(), what);
    std::string key = k;
    if (lowercase_keys) std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    out[key] = v.get<std::string>();
  }
  return out;
}

}  // namespace

extern "C" {

const char* vc_version(void) { return "0.1.0"; }
const char* vc_last_error_code(void) { return g_code.c_str(); }
const char* vc_last_error_message(void) { return g_message.c_str(); }
void vc_string_free(char* s) { std::free(s); }

vc_status vc_init_election(const char* data_dir, const char* spec_json, int64_t now, const uint64_t* key_seed) {
  return guarded([&] {
    require(data_dir && spec_json, "data_dir and spec_json are required");
    const auto spec = votechain::service::election_spec_from_json(parse_arg(spec_json, "spec_json"));
    std::optional<std::uint64_t> seed;
    if (key_seed) seed = *key_seed;
    votechain::service::init_election(data_dir, spec, seed, now);
  });
}

vc_status vc_service_open(const char* config_json, vc_service** out) {
  return guarded([&] {
    require(config_json && out, "config_json and out are required");
    *out = nullptr;
    auto cfg = votechain::service::ServiceConfig::from_json(parse_arg(config_json, "config_json"));
    auto handle = std::make_unique<vc_service>();
    handle->service = std::make_unique<votechain::service::Service>(std::move(cfg));
    *out = handle.release();
  });
}

void vc_service_close(vc_service* svc) {
  if (!svc) return;
  if (svc->server) svc->server->stop();
  delete svc;
}

vc_status vc_service_handle(vc_service* svc, const char* method, const char* path, const char* query_json,
                            const char* headers_json, const char* body, int* http_status, char** response_json) {
  return guarded([&] {
    require(svc && method && path && http_status && response_json, "missing argument");
    votechain::service::Request req{method, path, string_map(query_json, "query_json", false),
                                    string_map(headers_json, "headers_json", true), body ? body : ""};
    const auto resp = svc->service->handle(req);
    *response_json = dup(resp.text());
    *http_status = resp.status;
  });
}

vc_status vc_service_tally(vc_service* svc, char** out_json) {
  return guarded([&] {
    require(svc && out_json, "missing argument");
    *out_json = dup(svc->service->tally_json().dump());
  });
}

vc_status vc_service_audit(vc_service* svc, char** out_json) {
  return guarded([&] {
    require(svc && out_json, "missing argument");
    *out_json = dup(svc->service->audit_json().dump());
  });
}

vc_status vc_service_restore_report(vc_service* svc, char** out_json) {
  return guarded([&] {
    require(svc && out_json, "missing argument");
    *out_json = dup(svc->service->restore_report().to_json().dump());
  });
}

vc_status vc_service_check(vc_service* svc, char** out_json) {
  return guarded([&] {
    require(svc && out_json, "missing argument");
    *out_json = dup(Json(svc->service->check_invariants()).dump());
  });
}

vc_status vc_service_serve(vc_service* svc, int* bound_port) {
  return guarded([&] {
    require(svc && bound_port, "missing argument");
    if (svc->server) throw Error(ErrorCode::InvalidState, "already serving");
    const auto& cfg = svc->service->config();
    cfg.validate();
    auto server = std::make_unique<votechain::service::HttpServer>(*svc->service, cfg);
    *bound_port = server->start();
    svc->server = std::move(server);
  });
}

vc_status vc_service_stop(vc_service* svc) {
  return guarded([&] {
    require(svc, "missing argument");
    if (svc->server) svc->server->stop();
    svc->server.reset();
  });
}

vc_status vc_simulate(const char* scenario_json, char** out_jsonl) {
  return guarded([&] {
    require(scenario_json && out_jsonl, "missing argument");
    const auto scenario = votechain::consensus::scenario_from_json(parse_arg(scenario_json, "scenario_json"));
    *out_jsonl = dup(votechain::consensus::run_simulation(scenario).to_jsonl());
  });
}

vc_status vc_cost_estimate(const char* params_json, char** out_json) {
  return guarded([&] {
    require(out_json, "missing argument");
    namespace econ = votechain::economics;
    econ::CostParams p;
    if (params_json) {
      const Json j = parse_arg(params_json, "params_json");
      require(j.is_object(), "params_json must be an object");
      for (const auto& [k, v] : j.items()) {
        require(v.is_number_unsigned(), "cost parameters are non-negative integers");
        const auto n = v.get<std::uint64_t>();
        if (k == "voters") p.voters = n;
        else if (k == "dev_cost") p.dev_cost = n;
        else if (k == "first_cycle_equipment") p.first_cycle_equipment = n;
        else if (k == "subsequent_cycle_cost") p.subsequent_cycle_cost = n;
        else if (k == "paper_ballot_per_voter") p.paper_ballot_per_voter = n;
        else throw Error(ErrorCode::InvalidArgument, "unknown cost parameter " + k);
      }
    }
    *out_json = dup(econ::cost_report_to_json(p, econ::cost_estimate(p)).dump());
  });
}

vc_status vc_feasibility(double internet_penetration_pct, int* feasible) {
  return guarded([&] {
    require(feasible, "missing argument");
    namespace econ = votechain::economics;
    *feasible = econ::feasibility(internet_penetration_pct) == econ::Feasibility::Feasible;
  });
}

}  // extern "C"
