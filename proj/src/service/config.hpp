// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "embedding/embedder.hpp"
#include "rerank/reranker.hpp"
#include "retrieval/router.hpp"
#include "schema/clusters.hpp"
#include "json.hpp"

namespace dbrouter {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string corpus;    // manifest directory
  std::string index;     // empty: build in memory
  std::string adapter;   // optional
  std::string clusters;  // optional
  Strategy strategy = Strategy::kPooledTables;
  Strategy rerank_base = Strategy::kPooledTables;
  std::size_t top_k = 3;
  std::size_t pool_k = 3;
  std::size_t statement_k = 3;
  std::chrono::milliseconds request_timeout{30000};
  std::size_t max_concurrent = 8;
  ProviderConfig embedding;
  LlmConfig llm;
  /// "auto" (http when an endpoint is set), "http", "mock", "replay", "record".
  std::string llm_client = "auto";
  std::string llm_replay;  // replay/record file

  void validate() const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_env();

/// Layers, later wins: built-in defaults, config file (JSON, optional),
/// DBROUTER_* environment, `overrides` (flag values as a JSON object).
ServiceConfig load_config(const std::string& file, const EnvLookup& env, const nlohmann::json& overrides);

/// Same layering from an in-memory JSON document instead of a file.
ServiceConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ServiceConfig& cfg);

/// Everything needed to route questions, built from a config.
struct Engine {
  ServiceConfig cfg;
  std::shared_ptr<const Corpus> corpus;
  std::shared_ptr<Embedder> embedder;
  std::optional<LinearAdapter> adapter;
  std::shared_ptr<const RepositoryIndex> index;
  std::shared_ptr<const Router> router;
  std::shared_ptr<const Reranker> reranker;  // null without an LLM client
  std::optional<VerticalClusters> clusters;

  RankOptions rank_options() const;
};

std::shared_ptr<Engine> load_engine(const ServiceConfig& cfg);

/// Loads a fresh index from `path` and re-creates the router over the
/// engine's corpus, embedder and adapter. The original engine is untouched.
std::shared_ptr<Engine> reload_index(const Engine& engine, const std::string& path);

}  // namespace dbrouter
