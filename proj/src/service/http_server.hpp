// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <thread>

#include "service/service.hpp"

namespace votechain::service {

// HTTP(S) front end. Every GET and POST is handed to Service::handle; TLS
// connections below version 1.2 are refused.
class HttpServer {
 public:
  HttpServer(Service& service, const ServiceConfig& cfg);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and serves on a background thread; returns the bound port.
  // Throws BindFailure.
  int start();
  // Binds and serves on the calling thread until stop().
  void run();
  void stop();
  int port() const { return port_; }

  struct Impl;

 private:
  int bind();

  std::unique_ptr<Impl> impl_;
  ServiceConfig cfg_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace votechain::service
