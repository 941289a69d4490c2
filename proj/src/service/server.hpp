// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <mutex>
#include <string>

#include "service/config.hpp"

namespace httplib {
class Server;
}

namespace dbrouter {

/// HTTP front end:
///   POST /v1/route      {"question", "top_k"?, "strategy"?}
///   GET  /v1/databases
///   GET  /healthz
///   POST /admin/reload  {"index"?}
/// Requests take a snapshot of the current engine, so an index swap is
/// seen entirely or not at all.
class RoutingService {
 public:
  explicit RoutingService(std::shared_ptr<Engine> engine);
  ~RoutingService();

  RoutingService(const RoutingService&) = delete;
  RoutingService& operator=(const RoutingService&) = delete;

  /// Binds host:port (port 0 picks a free one) and returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void run();
  void stop();

  std::shared_ptr<Engine> engine() const;
  void swap_engine(std::shared_ptr<Engine> next);

  /// Handler bodies, exposed for direct testing. Return (status, JSON body).
  std::pair<int, std::string> handle_route(const std::string& body) const;
  std::pair<int, std::string> handle_databases() const;
  std::pair<int, std::string> handle_health() const;
  std::pair<int, std::string> handle_reload(const std::string& body);

 private:
  mutable std::mutex mu_;
  std::mutex reload_mu_;
  std::shared_ptr<Engine> engine_;
  std::unique_ptr<httplib::Server> server_;
};

/// Loads the engine, binds, and serves until SIGINT/SIGTERM.
void serve(const ServiceConfig& cfg);

}  // namespace dbrouter
