// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "rerank/reranker.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "common/error.hpp"
#include "rerank/parse.hpp"

namespace dbrouter {

void LlmConfig::validate() const {
  if (max_prompt_tokens < 1) throw Error(ErrorCode::kInvalidArgument, "max prompt tokens must be >= 1");
  if (shortlist < 1 || tables < 1) throw Error(ErrorCode::kInvalidArgument, "shortlist and tables must be >= 1");
}

std::shared_ptr<ChatClient> make_http_chat_client(const LlmConfig& cfg) {
  if (cfg.endpoint.empty()) throw Error(ErrorCode::kInvalidArgument, "LLM endpoint not set (DBROUTER_LLM_URL)");
  std::shared_ptr<HttpTransport> transport = make_http_transport(cfg.endpoint, cfg.timeout);
  return std::make_shared<HttpChatClient>(cfg.model, cfg.temperature, std::move(transport),
                                          RetryPolicy{cfg.retries, std::chrono::milliseconds(500)});
}

void IncidentLog::record(Incident incident) {
  spdlog::warn("rerank fallback for {} ({}): {}", incident.question_id, incident.kind, incident.detail);
  std::lock_guard lock(mu_);
  items_.push_back(std::move(incident));
}

std::vector<Incident> IncidentLog::snapshot() const {
  std::lock_guard lock(mu_);
  return items_;
}

std::size_t IncidentLog::size() const {
  std::lock_guard lock(mu_);
  return items_.size();
}

Reranker::Reranker(std::shared_ptr<ChatClient> client, LlmConfig cfg)
    : client_(std::move(client)), cfg_(std::move(cfg)), incidents_(std::make_shared<IncidentLog>()) {
  if (!client_) throw Error(ErrorCode::kInvalidArgument, "reranker needs a chat client");
  cfg_.validate();
}

std::vector<RerankCandidate> Reranker::candidates(const RankedList& ranked, const Corpus& corpus) const {
  std::vector<RerankCandidate> out;
  const std::size_t n = std::min(cfg_.shortlist, ranked.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = ranked.entries[i];
    const auto& db = corpus.database(e.db_id);
    RerankCandidate c{e.db_id, {}};
    // Whole-schema rankings carry no table scores; schema order stands in.
    if (e.top_tables.empty()) {
      for (std::size_t t = 0; t < std::min(cfg_.tables, db.tables.size()); ++t) c.tables.push_back(db.tables[t]);
    } else {
      for (std::size_t t = 0; t < std::min(cfg_.tables, e.top_tables.size()); ++t) {
        c.tables.push_back(*db.find_table(e.top_tables[t]));
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

RankedList Reranker::rerank(const std::string& question, const RankedList& ranked, const Corpus& corpus) const {
  if (ranked.entries.empty()) throw Error(ErrorCode::kInvalidArgument, "nothing to rerank");
  const std::size_t s = std::min(cfg_.shortlist, ranked.entries.size());
  std::vector<std::string> shortlist;
  for (std::size_t i = 0; i < s; ++i) shortlist.push_back(ranked.entries[i].db_id);

  std::vector<std::string> head;
  try {
    auto cands = fit_to_budget(question, candidates(ranked, corpus), cfg_.max_prompt_tokens);
    const std::string reply = client_->complete(build_prompt(question, cands));
    head = parse_ranking(reply, shortlist);
  } catch (const Error& e) {
    std::string kind = "error";
    switch (e.code()) {
      case ErrorCode::kTransport:
        kind = "transport";
        break;
      case ErrorCode::kParse:
        kind = "parse";
        break;
      case ErrorCode::kInfeasible:
        kind = "budget";
        break;
      case ErrorCode::kNotFound:
        kind = "replay-miss";
        break;
      default:
        break;
    }
    incidents_->record({ranked.question_id, kind, e.what()});
    head.clear();
  }

  std::vector<std::string> order = head;
  for (const auto& id : shortlist) {
    if (std::find(order.begin(), order.end(), id) == order.end()) order.push_back(id);
  }

  RankedList out;
  out.question_id = ranked.question_id;
  out.strategy = Strategy::kLlmRerank;
  const double sd = static_cast<double>(s);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto it = std::find_if(ranked.entries.begin(), ranked.entries.end(),
                                 [&](const RankedEntry& e) { return e.db_id == order[i]; });
    RankedEntry e = *it;
    e.score = 1.0 + (sd - static_cast<double>(i)) / sd;
    out.entries.push_back(std::move(e));
  }
  for (std::size_t i = s; i < ranked.entries.size(); ++i) out.entries.push_back(ranked.entries[i]);
  return out;
}

RankedList route_question(const Router& router, const Reranker* reranker, const std::string& question_id,
                          const std::string& question, const RankOptions& opts, Strategy base) {
  if (opts.strategy != Strategy::kLlmRerank) return router.rank_databases(question_id, question, opts);
  if (reranker == nullptr) throw Error(ErrorCode::kInvalidArgument, "llm-rerank strategy needs an LLM client");
  if (base == Strategy::kLlmRerank) throw Error(ErrorCode::kInvalidArgument, "rerank base must be an embedding strategy");
  RankOptions first = opts;
  first.strategy = base;
  first.top_k = 0;
  auto out = reranker->rerank(question, router.rank_databases(question_id, question, first), router.corpus());
  if (opts.top_k > 0 && out.entries.size() > opts.top_k) out.entries.resize(opts.top_k);
  return out;
}

}  // namespace dbrouter
