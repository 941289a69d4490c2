// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "schema/schema.hpp"

namespace dbrouter {

/// Which source partition a question came from. Held-out questions (and
/// their databases) become the cross-domain test set unchanged.
enum class Partition { kTrain, kHeldOut };

struct RoutingSample {
  std::string question_id;
  std::string text;
  std::string gold_db_id;
  std::optional<std::vector<std::string>> evidence_ids;
  Partition partition = Partition::kTrain;
};

/// Database repository plus routing questions, cross-validated on
/// construction and immutable afterwards.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<DatabaseSchema> databases, std::vector<RoutingSample> samples,
         std::map<std::string, std::string> sql_map = {});

  const std::vector<DatabaseSchema>& databases() const { return databases_; }
  const std::vector<RoutingSample>& samples() const { return samples_; }
  /// question_id -> statement ids, for samples that carry evidence.
  const std::map<std::string, std::vector<std::string>>& evidence_map() const {
    return evidence_map_;
  }
  /// question_id -> gold SQL.
  const std::map<std::string, std::string>& sql_map() const { return sql_map_; }

  const DatabaseSchema* find_database(std::string_view db_id) const;
  const DatabaseSchema& database(std::string_view db_id) const;  // throws kNotFound
  const RoutingSample* find_sample(std::string_view question_id) const;
  const RoutingSample& sample(std::string_view question_id) const;  // throws kNotFound

  /// Sorted ids of every database in the repository.
  std::vector<std::string> database_ids() const;

  /// Evidence statements of a sample, resolved against its gold database.
  std::vector<const DomainStatement*> evidence_of(const RoutingSample& s) const;

 private:
  std::vector<DatabaseSchema> databases_;
  std::vector<RoutingSample> samples_;
  std::map<std::string, std::vector<std::string>> evidence_map_;
  std::map<std::string, std::string> sql_map_;
  std::unordered_map<std::string, std::size_t> db_index_;
  std::unordered_map<std::string, std::size_t> sample_index_;
};

/// Loads `databases.json` + `samples.json` from a manifest directory.
Corpus ingest_corpus(const std::filesystem::path& manifest_dir);

/// Writes the manifest pair; ingest_corpus(dir) reproduces the corpus.
void write_manifest(const Corpus& corpus, const std::filesystem::path& manifest_dir);

/// Spider release layout: tables.json, train_spider.json (train partition),
/// dev.json (held-out partition).
Corpus convert_spider(const std::filesystem::path& release_dir);

/// BIRD release layout: {train,dev}/{train,dev}_tables.json and
/// {train,dev}/{train,dev}.json (the flat layout is accepted too). Each
/// distinct non-empty evidence string becomes one domain statement of the
/// question's database.
Corpus convert_bird(const std::filesystem::path& release_dir);

}  // namespace dbrouter
