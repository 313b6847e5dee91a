// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

// Operator tool. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "votechain/votechain.h"

namespace {

using Json = nlohmann::ordered_json;

// Exit codes. 2 is shared with CLI11 usage errors.
enum Exit : int {
  kOk = 0,
  kUsage = 2,
  kConfig = 3,
  kIo = 4,
  kCorrupt = 5,
  kRefused = 6,
  kInternal = 70,
};

struct Failure {
  int exit_code;
  std::string message;
};

int exit_for(vc_status s) {
  switch (s) {
    case VC_OK: return kOk;
    case VC_E_INVALID_ARGUMENT: return kUsage;
    case VC_E_CONFIG: return kConfig;
    case VC_E_IO: return kIo;
    case VC_E_CORRUPT: return kCorrupt;
    case VC_E_STATE: return kRefused;
    default: return kInternal;
  }
}

void check(vc_status s) {
  if (s != VC_OK) throw Failure{exit_for(s), std::string(vc_last_error_code()) + ": " + vc_last_error_message()};
}

// Owns a library-allocated string.
class Owned {
 public:
  ~Owned() { vc_string_free(p_); }
  char** out() { return &p_; }
  std::string str() const { return p_ ? p_ : ""; }

 private:
  char* p_ = nullptr;
};

class ServiceHandle {
 public:
  explicit ServiceHandle(const Json& cfg) { check(vc_service_open(cfg.dump().c_str(), &h_)); }
  ~ServiceHandle() { vc_service_close(h_); }
  ServiceHandle(const ServiceHandle&) = delete;
  ServiceHandle& operator=(const ServiceHandle&) = delete;
  vc_service* get() const { return h_; }

 private:
  vc_service* h_ = nullptr;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kIo, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::exception& e) {
    throw Failure{kConfig, path + ": " + e.what()};
  }
}

// "key: value" lines in document order; nested keys joined with dots.
void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object() && !j.empty()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

struct Output {
  std::string path;
  std::string format = "json";

  // JSON output is the exact library text, so reports can be compared
  // byte-for-byte with the HTTP bodies.
  void emit(const std::string& json_text) const {
    std::string text;
    if (format == "text") {
      std::ostringstream ss;
      flatten(Json::parse(json_text), "", ss);
      text = ss.str();
    } else {
      text = json_text;
    }
    write(text);
  }

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      if (format == "json") std::cout << '\n';
      return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out.flush()) throw Failure{kIo, "cannot write " + path};
  }
};

void add_output(CLI::App* cmd, Output& o) {
  cmd->add_option("--out", o.path, "Write the report to this file instead of stdout");
  cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "text"}));
}

Json service_config(const std::string& data_dir) {
  return {{"data_dir", data_dir}, {"tls_mode", "test_plaintext"}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blockchain election operator tool"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vc_version()));

  std::string data_dir, config_path, scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> now;
  Output out;

  auto* init = app.add_subcommand("init-election", "Create election keys, genesis block and election.json");
  init->add_option("--data-dir", data_dir)->required();
  init->add_option("--config", config_path, "Election spec JSON")->required();
  init->add_option("--seed", seed, "Derive keys from a seed (tests only)");
  init->add_option("--now", now, "Creation time, unix seconds");
  add_output(init, out);

  std::size_t nodes = 5, voters = 10, candidates = 3;
  std::int64_t rounds = 20;
  auto* run_nodes = app.add_subcommand("run-nodes", "Run an n-node in-process cluster over seeded votes");
  run_nodes->add_option("--nodes", nodes)->check(CLI::Range(1, 64));
  run_nodes->add_option("--voters", voters);
  run_nodes->add_option("--candidates", candidates)->check(CLI::Range(1, 64));
  run_nodes->add_option("--rounds", rounds)->check(CLI::PositiveNumber);
  run_nodes->add_option("--seed", seed);
  add_output(run_nodes, out);

  auto* simulate = app.add_subcommand("simulate", "Execute a cluster scenario file; writes a JSON-lines trace");
  simulate->add_option("--scenario", scenario_path)->required();
  simulate->add_option("--out", out.path);

  auto* tally = app.add_subcommand("tally", "Tally the election in a data directory");
  tally->add_option("--data-dir", data_dir)->required();
  add_output(tally, out);

  auto* audit = app.add_subcommand("audit", "Independent recount and per-key audit");
  audit->add_option("--data-dir", data_dir)->required();
  add_output(audit, out);

  Json cost_params = Json::object();
  std::uint64_t cost_voters = 100'000'000;
  std::optional<std::uint64_t> dev_cost, equipment, subsequent, ballot;
  std::optional<double> penetration;
  auto* cost = app.add_subcommand("cost-estimate", "Deployment cost against paper ballots");
  cost->add_option("--voters", cost_voters);
  cost->add_option("--dev-cost", dev_cost);
  cost->add_option("--first-cycle-equipment", equipment, "Per 100,000,000 voters");
  cost->add_option("--subsequent-cycle-cost", subsequent, "Per 100,000,000 voters");
  cost->add_option("--paper-ballot-per-voter", ballot);
  cost->add_option("--penetration", penetration, "Internet penetration percent; adds a feasibility verdict");
  add_output(cost, out);

  double feas_pct = 0;
  auto* feas = app.add_subcommand("feasibility", "Feasible iff internet penetration is at least 90 percent");
  feas->add_option("--penetration", feas_pct)->required();
  add_output(feas, out);

  auto* serve = app.add_subcommand("serve", "Run the HTTP service until SIGINT or SIGTERM");
  serve->add_option("--config", config_path, "Service config JSON")->required();
  serve->add_option("--data-dir", data_dir, "Overrides data_dir from the config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*init) {
      const Json spec = read_json(config_path);
      const std::int64_t t = now.value_or(static_cast<std::int64_t>(std::time(nullptr)));
      const std::uint64_t s = seed.value_or(0);
      check(vc_init_election(data_dir.c_str(), spec.dump().c_str(), t, seed ? &s : nullptr));
      ServiceHandle svc(service_config(data_dir));
      Owned tally_json;
      check(vc_service_tally(svc.get(), tally_json.out()));
      out.emit(tally_json.str());
    } else if (*run_nodes) {
      Json scenario{{"seed", seed.value_or(1)}, {"nodes", nodes},   {"candidates", candidates},
                    {"voters", voters},         {"rounds", rounds}, {"settle", true}};
      Json txs = Json::array();
      for (std::size_t v = 0; v < voters; ++v) {
        txs.push_back({{"time", static_cast<std::int64_t>(v) % rounds},
                       {"origin", "node-" + std::to_string(v % nodes)},
                       {"voter", v},
                       {"candidate", static_cast<int>(v % (candidates + 1)) - 1}});
      }
      scenario["tx_schedule"] = std::move(txs);
      Owned trace;
      check(vc_simulate(scenario.dump().c_str(), trace.out()));
      // Only the final replica summary line.
      std::string t = trace.str();
      if (!t.empty() && t.back() == '\n') t.pop_back();
      const auto last = t.rfind('\n');
      out.emit(last == std::string::npos ? t : t.substr(last + 1));
    } else if (*simulate) {
      const Json scenario = read_json(scenario_path);
      Owned trace;
      check(vc_simulate(scenario.dump().c_str(), trace.out()));
      Output raw{out.path, "jsonl"};
      raw.write(trace.str());
    } else if (*tally) {
      ServiceHandle svc(service_config(data_dir));
      Owned j;
      check(vc_service_tally(svc.get(), j.out()));
      out.emit(j.str());
    } else if (*audit) {
      ServiceHandle svc(service_config(data_dir));
      Owned j;
      check(vc_service_audit(svc.get(), j.out()));
      out.emit(j.str());
    } else if (*cost) {
      cost_params["voters"] = cost_voters;
      if (dev_cost) cost_params["dev_cost"] = *dev_cost;
      if (equipment) cost_params["first_cycle_equipment"] = *equipment;
      if (subsequent) cost_params["subsequent_cycle_cost"] = *subsequent;
      if (ballot) cost_params["paper_ballot_per_voter"] = *ballot;
      Owned j;
      check(vc_cost_estimate(cost_params.dump().c_str(), j.out()));
      std::string text = j.str();
      if (penetration) {
        int ok = 0;
        check(vc_feasibility(*penetration, &ok));
        Json report = Json::parse(text);
        report["penetration"] = *penetration;
        report["feasibility"] = ok ? "Feasible" : "Infeasible";
        text = report.dump();
      }
      out.emit(text);
    } else if (*feas) {
      int ok = 0;
      check(vc_feasibility(feas_pct, &ok));
      out.emit(Json{{"penetration", feas_pct}, {"feasibility", ok ? "Feasible" : "Infeasible"}}.dump());
    } else if (*serve) {
      Json cfg = read_json(config_path);
      if (!data_dir.empty()) cfg["data_dir"] = data_dir;
      // Block the stop signals before any server thread exists.
      sigset_t stop;
      sigemptyset(&stop);
      sigaddset(&stop, SIGINT);
      sigaddset(&stop, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &stop, nullptr);
      ServiceHandle svc(cfg);
      int port = 0;
      check(vc_service_serve(svc.get(), &port));
      std::cout << "listening on port " << port << std::endl;
      int sig = 0;
      sigwait(&stop, &sig);
      check(vc_service_stop(svc.get()));
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
