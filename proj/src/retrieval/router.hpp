// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adapter/adapter.hpp"
#include "embedding/embedder.hpp"
#include "retrieval/index.hpp"
#include "retrieval/scoring.hpp"
#include "schema/corpus.hpp"

namespace dbrouter {

struct ScoredStatement {
  std::string statement_id;
  double score = 0.0;
};

struct RankOptions {
  Strategy strategy = Strategy::kPooledTables;
  std::size_t top_k = 0;           // 0 keeps the full list
  std::size_t pool_k = 3;          // tables averaged per DB
  std::size_t statement_k = 3;     // statements retrieved per DB
  std::vector<std::string> scope;  // empty: every indexed DB
};

/// Scores databases for questions against a shared immutable index.
/// Thread-safe; on-demand vectors go through the embedder's cache.
class Router {
 public:
  Router(std::shared_ptr<const Corpus> corpus, std::shared_ptr<const RepositoryIndex> index,
         std::shared_ptr<Embedder> embedder, std::optional<LinearAdapter> adapter = std::nullopt);

  /// Question vector, projected through the adapter when present.
  EmbeddingVector embed_query(const std::string& question) const;

  std::vector<ScoredStatement> retrieve_statements(const EmbeddingVector& q, std::string_view db_id,
                                                   std::size_t k) const;
  double score_db_whole(const EmbeddingVector& q, std::string_view db_id) const;
  PooledScore score_db_pooled(const EmbeddingVector& q, std::string_view db_id, std::size_t k, bool use_metadata,
                              std::size_t statement_k = 3) const;

  /// Embedding strategies only; llm-rerank is layered on top by Reranker.
  RankedList rank_databases(const std::string& question_id, const std::string& question,
                            const RankOptions& opts) const;

  const Corpus& corpus() const { return *corpus_; }
  const RepositoryIndex& index() const { return *index_; }
  const std::shared_ptr<const RepositoryIndex>& index_ptr() const { return index_; }

 private:
  std::vector<std::vector<float>> metadata_table_vectors(const EmbeddingVector& q, const IndexedDatabase& db,
                                                         std::size_t statement_k) const;

  std::shared_ptr<const Corpus> corpus_;
  std::shared_ptr<const RepositoryIndex> index_;
  std::shared_ptr<Embedder> embedder_;
  std::optional<LinearAdapter> adapter_;
};

}  // namespace dbrouter
