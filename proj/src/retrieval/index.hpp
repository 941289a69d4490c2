// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adapter/adapter.hpp"
#include "embedding/embedder.hpp"
#include "schema/corpus.hpp"
#include "schema/ddl.hpp"

namespace dbrouter {

struct Granularity {
  bool whole_schema = true;
  bool tables = true;
  bool statements = true;

  bool operator==(const Granularity&) const = default;
};

struct IndexedDatabase {
  std::string db_id;
  std::optional<std::vector<float>> whole;
  std::vector<std::string> table_names;
  std::vector<std::vector<float>> tables;
  std::vector<std::string> statement_ids;
  std::vector<std::vector<float>> statements;
};

struct IndexHeader {
  std::string provider;        // embedder identity
  std::string adapter_digest;  // empty without an adapter
  Granularity granularity;
  std::size_t dim = 0;
  DbNameStyle name_style = DbNameStyle::kRaw;
};

/// Immutable after build; safe to share across threads.
class RepositoryIndex {
 public:
  RepositoryIndex() = default;
  RepositoryIndex(IndexHeader header, std::vector<IndexedDatabase> dbs);

  const IndexHeader& header() const { return header_; }
  const std::vector<IndexedDatabase>& databases() const { return dbs_; }
  const IndexedDatabase* find(std::string_view db_id) const;
  const IndexedDatabase& at(std::string_view db_id) const;  // throws kNotFound
  std::vector<std::string> database_ids() const;

 private:
  IndexHeader header_;
  std::vector<IndexedDatabase> dbs_;  // sorted by db_id
};

/// Embeds db_text / bare table blocks / statements through the optional
/// adapter. Provider errors are rethrown naming the offending text.
RepositoryIndex build_index(const Corpus& corpus, Embedder& embedder, const LinearAdapter* adapter,
                            Granularity granularity, DbNameStyle name_style = DbNameStyle::kRaw);

/// "DBRIDX1\n", u32 header length, JSON header, little-endian float32
/// vectors in header order.
void save_index(const RepositoryIndex& index, const std::filesystem::path& path);
RepositoryIndex load_index(const std::filesystem::path& path);

/// Header-level summary as JSON text.
std::string inspect_index(const RepositoryIndex& index);

}  // namespace dbrouter
