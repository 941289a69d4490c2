// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rerank/chat.hpp"
#include "rerank/prompt.hpp"
#include "retrieval/router.hpp"
#include "schema/corpus.hpp"

namespace dbrouter {

struct LlmConfig {
  std::string endpoint;  // DBROUTER_LLM_URL
  std::string model;     // DBROUTER_LLM_MODEL
  std::size_t max_prompt_tokens = 8000;
  double temperature = 0.0;
  std::chrono::milliseconds timeout{120000};
  int retries = 3;
  std::size_t shortlist = 10;
  std::size_t tables = 3;

  void validate() const;
};

std::shared_ptr<ChatClient> make_http_chat_client(const LlmConfig& cfg);

struct Incident {
  std::string question_id;
  std::string kind;  // "transport", "parse", "budget", ...
  std::string detail;
};

/// Append-only, thread-safe.
class IncidentLog {
 public:
  void record(Incident incident);
  std::vector<Incident> snapshot() const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::vector<Incident> items_;
};

class Reranker {
 public:
  Reranker(std::shared_ptr<ChatClient> client, LlmConfig cfg);

  /// Shortlists the head of `ranked`, asks the model for its top 3 and
  /// returns: parsed ids, then the rest of the shortlist, then the rest of
  /// `ranked`, all in embedding order. Shortlist scores are positional
  /// (1 + (S - i) / S) so they sit above every cosine. Any failure falls
  /// back to the embedding order and is logged as an incident.
  RankedList rerank(const std::string& question, const RankedList& ranked, const Corpus& corpus) const;

  std::vector<RerankCandidate> candidates(const RankedList& ranked, const Corpus& corpus) const;

  IncidentLog& incidents() const { return *incidents_; }
  const LlmConfig& config() const { return cfg_; }

 private:
  std::shared_ptr<ChatClient> client_;
  LlmConfig cfg_;
  std::shared_ptr<IncidentLog> incidents_;
};

/// Embedding ranking, reranked when opts.strategy is llm-rerank (the
/// embedding stage then uses `base`). opts.top_k truncates the final list.
RankedList route_question(const Router& router, const Reranker* reranker, const std::string& question_id,
                          const std::string& question, const RankOptions& opts,
                          Strategy base = Strategy::kPooledTables);

}  // namespace dbrouter
