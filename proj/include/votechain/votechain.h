/* Copyright 2026 The Votechain Authors. Licensed under the Apache License,
 * Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 */

#ifndef VOTECHAIN_VOTECHAIN_H
#define VOTECHAIN_VOTECHAIN_H

#include <stdint.h>

#if defined(_WIN32)
#define VC_API __declspec(dllexport)
#else
#define VC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Error classes. The precise machine code of the last failure (for example
 * "WindowStillOpen") is available from vc_last_error_code(). */
typedef enum vc_status {
  VC_OK = 0,
  VC_E_INVALID_ARGUMENT = 1,
  VC_E_CONFIG = 2,
  VC_E_IO = 3,
  VC_E_CORRUPT = 4, /* damaged store or chain that fails validation */
  VC_E_STATE = 5,   /* domain refusal: no election, window still open, ... */
  VC_E_INTERNAL = 6
} vc_status;

typedef struct vc_service vc_service;

VC_API const char* vc_version(void);

/* Per-thread details of the last failed call; empty strings after success.
 * Valid until the next call on the same thread. */
VC_API const char* vc_last_error_code(void);
VC_API const char* vc_last_error_message(void);

/* Every char** output is allocated by the library and released here. */
VC_API void vc_string_free(char* s);

/* Creates the election files (keys, genesis chain, election.json) in
 * data_dir. key_seed may be NULL for random keys. */
VC_API vc_status vc_init_election(const char* data_dir, const char* spec_json, int64_t now, const uint64_t* key_seed);

/* config_json: {"data_dir": ..., "tls_mode": "required"|"test_plaintext",
 * "tls_cert", "tls_key", "port", "bind_host", "nodes", "admin_token",
 * "provisional_results", "election_config", "gov_registry", "key_seed"}. */
VC_API vc_status vc_service_open(const char* config_json, vc_service** out);
VC_API void vc_service_close(vc_service* svc);

/* One request through the same routing as the HTTP front end. query_json and
 * headers_json are flat string objects or NULL; header names are matched
 * case-insensitively. */
VC_API vc_status vc_service_handle(vc_service* svc, const char* method, const char* path, const char* query_json,
                                   const char* headers_json, const char* body, int* http_status, char** response_json);

VC_API vc_status vc_service_tally(vc_service* svc, char** out_json);
/* Byte-identical to the body of GET /admin/audit. */
VC_API vc_status vc_service_audit(vc_service* svc, char** out_json);
VC_API vc_status vc_service_restore_report(vc_service* svc, char** out_json);
/* JSON array of violated invariants; empty when healthy. */
VC_API vc_status vc_service_check(vc_service* svc, char** out_json);

/* Serves HTTP(S) on a background thread until vc_service_stop or close. */
VC_API vc_status vc_service_serve(vc_service* svc, int* bound_port);
VC_API vc_status vc_service_stop(vc_service* svc);

/* Runs a cluster scenario; output is one JSON object per line. */
VC_API vc_status vc_simulate(const char* scenario_json, char** out_jsonl);

/* params_json: {"voters", "dev_cost", "first_cycle_equipment",
 * "subsequent_cycle_cost", "paper_ballot_per_voter"}; all optional. */
VC_API vc_status vc_cost_estimate(const char* params_json, char** out_json);
VC_API vc_status vc_feasibility(double internet_penetration_pct, int* feasible);

#ifdef __cplusplus
}
#endif

#endif /* VOTECHAIN_VOTECHAIN_H */
