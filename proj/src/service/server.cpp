// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "service/server.hpp"

#include <atomic>
#include <csignal>
#include <thread>

#include <spdlog/spdlog.h>

#include "common/error.hpp"
#include "httplib.h"

namespace dbrouter {

namespace {

std::string error_body(const std::string& code, const std::string& message) {
  return nlohmann::json{{"error", {{"code", code}, {"message", message}}}}.dump();
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kTransport:
      return 502;
    default:
      return 500;
  }
}

template <typename F>
std::pair<int, std::string> guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    return {status_for(e.code()), error_body(error_code_name(e.code()), e.what())};
  } catch (const nlohmann::json::exception& e) {
    return {400, error_body("parse", e.what())};
  } catch (const std::exception& e) {
    return {500, error_body("internal", e.what())};
  }
}

}  // namespace

RoutingService::RoutingService(std::shared_ptr<Engine> engine)
    : engine_(std::move(engine)), server_(std::make_unique<httplib::Server>()) {
  if (!engine_) throw Error(ErrorCode::kInvalidArgument, "service needs an engine");
  const auto& cfg = engine_->cfg;
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg.request_timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(cfg.request_timeout - secs);
  server_->set_read_timeout(secs.count(), usecs.count());
  server_->set_write_timeout(secs.count(), usecs.count());
  const std::size_t threads = cfg.max_concurrent;
  server_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };

  auto reply = [](httplib::Response& res, const std::pair<int, std::string>& r) {
    res.status = r.first;
    res.set_content(r.second, "application/json");
  };
  server_->Post("/v1/route", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_route(req.body));
  });
  server_->Get("/v1/databases", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, handle_databases());
  });
  server_->Get("/healthz", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, handle_health());
  });
  server_->Post("/admin/reload", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_reload(req.body));
  });
}

RoutingService::~RoutingService() { stop(); }

std::shared_ptr<Engine> RoutingService::engine() const {
  std::lock_guard lock(mu_);
  return engine_;
}

void RoutingService::swap_engine(std::shared_ptr<Engine> next) {
  std::lock_guard lock(mu_);
  engine_ = std::move(next);
}

std::pair<int, std::string> RoutingService::handle_route(const std::string& body) const {
  return guarded([&]() -> std::pair<int, std::string> {
    const auto engine = this->engine();
    const auto req = nlohmann::json::parse(body);
    if (!req.contains("question") || !req["question"].is_string()) {
      throw Error(ErrorCode::kInvalidArgument, "request needs a string 'question'");
    }
    const std::string question = req["question"].get<std::string>();
    if (question.empty()) throw Error(ErrorCode::kInvalidArgument, "question is empty");
    RankOptions opts = engine->rank_options();
    if (req.contains("top_k")) opts.top_k = req["top_k"].get<std::size_t>();
    if (opts.top_k < 1) throw Error(ErrorCode::kInvalidArgument, "top_k must be >= 1");
    if (req.contains("strategy")) opts.strategy = parse_strategy(req["strategy"].get<std::string>());
    const auto ranked = route_question(*engine->router, engine->reranker.get(), "request", question, opts,
                                       engine->cfg.rerank_base);
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : ranked.entries) {
      nlohmann::json item{{"db_id", e.db_id}, {"score", e.score}};
      if (!e.top_tables.empty()) item["top_tables"] = e.top_tables;
      entries.push_back(std::move(item));
    }
    return {200, nlohmann::json{{"ranked", entries}, {"strategy", to_string(ranked.strategy)}}.dump()};
  });
}

std::pair<int, std::string> RoutingService::handle_databases() const {
  return guarded([&]() -> std::pair<int, std::string> {
    const auto engine = this->engine();
    nlohmann::json dbs = nlohmann::json::array();
    for (const auto& id : engine->index->database_ids()) {
      const auto& db = engine->corpus->database(id);
      nlohmann::json item{{"db_id", id}, {"tables", db.tables.size()}};
      std::optional<std::string> cluster = db.cluster_id;
      if (engine->clusters) {
        if (auto c = engine->clusters->cluster_of(id)) cluster = c;
      }
      item["cluster"] = cluster ? nlohmann::json(*cluster) : nlohmann::json();
      dbs.push_back(std::move(item));
    }
    return {200, nlohmann::json{{"databases", dbs}}.dump()};
  });
}

std::pair<int, std::string> RoutingService::handle_health() const {
  return guarded([&]() -> std::pair<int, std::string> {
    const auto engine = this->engine();
    const auto& h = engine->index->header();
    return {200, nlohmann::json{{"status", "ok"},
                                {"databases", engine->index->databases().size()},
                                {"provider", h.provider},
                                {"adapter_digest", h.adapter_digest},
                                {"strategy", to_string(engine->cfg.strategy)}}
                     .dump()};
  });
}

std::pair<int, std::string> RoutingService::handle_reload(const std::string& body) {
  return guarded([&]() -> std::pair<int, std::string> {
    std::lock_guard serial(reload_mu_);
    const auto current = engine();
    std::string path = current->cfg.index;
    if (!body.empty()) {
      const auto req = nlohmann::json::parse(body);
      if (req.contains("index")) path = req["index"].get<std::string>();
    }
    if (path.empty()) throw Error(ErrorCode::kInvalidArgument, "no index path to reload from");
    auto next = reload_index(*current, path);
    const auto n = next->index->databases().size();
    swap_engine(std::move(next));
    spdlog::info("index reloaded from {} ({} databases)", path, n);
    return {200, nlohmann::json{{"status", "reloaded"}, {"index", path}, {"databases", n}}.dump()};
  });
}

int RoutingService::bind(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void RoutingService::run() { server_->listen_after_bind(); }

void RoutingService::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

void serve(const ServiceConfig& cfg) {
  // Block the signals before any thread starts so only the waiter sees them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  RoutingService service(load_engine(cfg));
  const int port = service.bind(cfg.host, cfg.port);
  spdlog::info("dbrouter listening on {}:{}", cfg.host, port);

  std::atomic<bool> signalled{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    signalled = true;
    spdlog::info("signal {} received, shutting down", sig);
    service.stop();
  });
  service.run();
  // run() can also return on its own; wake the waiter so it can be joined.
  if (!signalled) pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
}

}  // namespace dbrouter
