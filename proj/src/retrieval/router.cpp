// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "retrieval/router.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "schema/ddl.hpp"

namespace dbrouter {

Router::Router(std::shared_ptr<const Corpus> corpus, std::shared_ptr<const RepositoryIndex> index,
               std::shared_ptr<Embedder> embedder, std::optional<LinearAdapter> adapter)
    : corpus_(std::move(corpus)), index_(std::move(index)), embedder_(std::move(embedder)), adapter_(std::move(adapter)) {
  if (!corpus_ || !index_ || !embedder_) throw Error(ErrorCode::kInvalidArgument, "router needs corpus, index and embedder");
  const auto& h = index_->header();
  if (h.provider != embedder_->identity()) {
    throw Error(ErrorCode::kIntegrity, "index was built with provider '" + h.provider + "', router uses '" +
                                           embedder_->identity() + "'");
  }
  const std::string digest = adapter_ ? adapter_->digest() : "";
  if (h.adapter_digest != digest) {
    throw Error(ErrorCode::kIntegrity, "index adapter digest '" + h.adapter_digest + "' does not match '" + digest + "'");
  }
  for (const auto& db : index_->databases()) {
    if (corpus_->find_database(db.db_id) == nullptr) {
      throw Error(ErrorCode::kIntegrity, "indexed database missing from corpus: " + db.db_id);
    }
  }
}

EmbeddingVector Router::embed_query(const std::string& question) const {
  auto v = embedder_->embed(question);
  if (adapter_) v = apply_adapter(*adapter_, v);
  if (v.dim() != index_->header().dim) {
    throw Error(ErrorCode::kIntegrity, "question vector dim " + std::to_string(v.dim()) + " != index dim " +
                                           std::to_string(index_->header().dim));
  }
  return v;
}

std::vector<ScoredStatement> Router::retrieve_statements(const EmbeddingVector& q, std::string_view db_id,
                                                         std::size_t k) const {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "statement k must be >= 1");
  const auto& db = index_->at(db_id);
  std::vector<double> sims;
  sims.reserve(db.statements.size());
  for (const auto& v : db.statements) sims.push_back(cosine(q.values, v));
  std::vector<ScoredStatement> out;
  for (auto i : top_k_indices(sims, k)) out.push_back({db.statement_ids[i], sims[i]});
  return out;
}

double Router::score_db_whole(const EmbeddingVector& q, std::string_view db_id) const {
  const auto& db = index_->at(db_id);
  if (!db.whole) throw Error(ErrorCode::kNotFound, "no whole-schema vector for " + std::string(db_id));
  return cosine(q.values, *db.whole);
}

std::vector<std::vector<float>> Router::metadata_table_vectors(const EmbeddingVector& q, const IndexedDatabase& db,
                                                               std::size_t statement_k) const {
  const auto hits = retrieve_statements(q, db.db_id, statement_k);
  const auto& schema = corpus_->database(db.db_id);
  std::vector<std::string> stmt_texts;
  for (const auto& h : hits) stmt_texts.push_back(schema.find_statement(h.statement_id)->text);
  std::vector<std::string> texts;
  for (const auto& name : db.table_names) texts.push_back(table_text(*schema.find_table(name), stmt_texts));
  auto vecs = embedder_->embed_batch(texts);
  std::vector<std::vector<float>> out;
  out.reserve(vecs.size());
  for (auto& v : vecs) out.push_back(adapter_ ? apply_adapter(*adapter_, v).values : std::move(v.values));
  return out;
}

PooledScore Router::score_db_pooled(const EmbeddingVector& q, std::string_view db_id, std::size_t k,
                                    bool use_metadata, std::size_t statement_k) const {
  const auto& db = index_->at(db_id);
  if (db.tables.empty()) throw Error(ErrorCode::kNotFound, "no table vectors for " + std::string(db_id));
  std::vector<double> sims;
  sims.reserve(db.tables.size());
  if (use_metadata && !db.statements.empty()) {
    for (const auto& v : metadata_table_vectors(q, db, statement_k)) sims.push_back(cosine(q.values, v));
  } else {
    for (const auto& v : db.tables) sims.push_back(cosine(q.values, v));
  }
  return mean_top_k(sims, k);
}

RankedList Router::rank_databases(const std::string& question_id, const std::string& question,
                                  const RankOptions& opts) const {
  if (opts.strategy == Strategy::kLlmRerank) {
    throw Error(ErrorCode::kInvalidArgument, "llm-rerank needs a reranker on top of an embedding strategy");
  }
  const std::vector<std::string> scope = opts.scope.empty() ? index_->database_ids() : opts.scope;
  if (scope.empty()) throw Error(ErrorCode::kInvalidArgument, "empty repository");

  const auto q = embed_query(question);
  RankedList out;
  out.question_id = question_id;
  out.strategy = opts.strategy;
  out.entries.reserve(scope.size());
  for (const auto& id : scope) {
    RankedEntry e;
    e.db_id = id;
    if (opts.strategy == Strategy::kWholeSchema) {
      e.score = score_db_whole(q, id);
    } else {
      const bool meta = opts.strategy == Strategy::kPooledTablesMetadata;
      const auto pooled = score_db_pooled(q, id, opts.pool_k, meta, opts.statement_k);
      e.score = pooled.score;
      const auto& db = index_->at(id);
      for (auto i : pooled.contributors) e.top_tables.push_back(db.table_names[i]);
    }
    out.entries.push_back(std::move(e));
  }
  sort_entries(out.entries);
  for (std::size_t i = 1; i < out.entries.size(); ++i) {
    if (out.entries[i].db_id == out.entries[i - 1].db_id) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate db in scope: " + out.entries[i].db_id);
    }
  }
  if (opts.top_k > 0 && out.entries.size() > opts.top_k) out.entries.resize(opts.top_k);
  return out;
}

}  // namespace dbrouter
