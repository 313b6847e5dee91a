// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "service/http_server.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>

#include "service/log.hpp"

namespace votechain::service {

struct HttpServer::Impl {
  std::unique_ptr<httplib::Server> server;
};

namespace {

Request adapt(const httplib::Request& in) {
  Request out;
  out.method = in.method;
  out.path = in.path;
  for (const auto& [k, v] : in.params) out.query.emplace(k, v);
  for (const auto& [k, v] : in.headers) {
    std::string name = k;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    out.headers.emplace(std::move(name), v);
  }
  out.body = in.body;
  return out;
}

}  // namespace

HttpServer::HttpServer(Service& service, const ServiceConfig& cfg) : impl_(std::make_unique<Impl>()), cfg_(cfg) {
  cfg_.validate();
  if (cfg_.tls_mode == TlsMode::Required) {
    auto ssl = std::make_unique<httplib::SSLServer>(cfg_.tls_cert->c_str(), cfg_.tls_key->c_str());
    if (!ssl->is_valid()) throw Error(ErrorCode::Config, "cannot load the TLS certificate or key");
    SSL_CTX_set_min_proto_version(ssl->ssl_context(), TLS1_2_VERSION);
    impl_->server = std::move(ssl);
  } else {
    impl_->server = std::make_unique<httplib::Server>();
  }
  auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    const Response r = service.handle(adapt(req));
    res.status = r.status;
    res.set_content(r.text(), "application/json");
  };
  impl_->server->Get(".*", handler);
  impl_->server->Post(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& s = *impl_->server;
  const bool ok = cfg_.port == 0 ? (port_ = s.bind_to_any_port(cfg_.bind_host)) > 0
                                 : s.bind_to_port(cfg_.bind_host, port_ = cfg_.port);
  if (!ok) throw Error(ErrorCode::BindFailure, cfg_.bind_host + ":" + std::to_string(cfg_.port));
  log().info("listening on {}:{} ({})", cfg_.bind_host, port_, tls_mode_name(cfg_.tls_mode));
  return port_;
}

int HttpServer::start() {
  bind();
  thread_ = std::thread([this] { impl_->server->listen_after_bind(); });
  impl_->server->wait_until_ready();
  return port_;
}

void HttpServer::run() {
  bind();
  impl_->server->listen_after_bind();
}

void HttpServer::stop() {
  if (impl_ && impl_->server) impl_->server->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace votechain::service
