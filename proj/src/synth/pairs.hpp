// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "schema/corpus.hpp"
#include "schema/ddl.hpp"
#include "synth/splits.hpp"

namespace dbrouter {

enum class PairKind { kSchema, kTable, kStatement };
enum class NegativeClass { kHard, kSoft };

std::string_view to_string(PairKind kind);
std::string_view to_string(NegativeClass cls);
PairKind parse_pair_kind(std::string_view s);
NegativeClass parse_negative_class(std::string_view s);

/// Labeled sentence pair for contrastive training. label 1 pulls the two
/// sides together, label 0 pushes them apart.
struct PairExample {
  std::string id;
  std::string side_a;
  std::string side_b;
  int label = 0;
  PairKind kind = PairKind::kSchema;
  std::optional<NegativeClass> negative_class;
  /// Source question; used for ordering, not serialized.
  std::string question_id;

  bool operator==(const PairExample&) const = default;
};

/// How many negatives to draw.
struct NegativePolicy {
  enum class Kind {
    kAll,          // every candidate
    kPerQuestion,  // `count` candidates per question
    kPerDbPair,    // `count` questions per ordered (gold db, other db) pair; schema pairs only
  };
  Kind kind = Kind::kAll;
  std::size_t count = 1;

  /// "all", "per-question:<k>", "per-db-pair" or "per-db-pair:<k>".
  static NegativePolicy parse(std::string_view spec);
  std::string to_string() const;
};

struct PairSet {
  std::vector<PairExample> pairs;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  /// Train questions skipped (no evidence, no SQL, or unresolvable tables).
  std::size_t skipped_questions = 0;
  /// SQL tables that did not match any table of the gold database.
  std::size_t unresolved_tables = 0;
};

/// <question, db_text> pairs over the train databases: one positive per
/// train question, negatives drawn from the other train databases.
PairSet gen_schema_pairs(const RoutingDataset& dataset, const Corpus& corpus,
                         const NegativePolicy& policy, std::uint64_t seed,
                         DbNameStyle name_style = DbNameStyle::kRaw);

/// <question, domain statement> pairs. Positives come from the evidence
/// mapping; hard negatives are other statements of the gold database, soft
/// negatives are statements of other train databases.
PairSet gen_statement_pairs(const RoutingDataset& dataset, const Corpus& corpus,
                            std::size_t hard_per_question, std::size_t soft_per_question,
                            std::uint64_t seed);

/// Negative candidates of gen_table_pairs for one question, in enumeration
/// order: every irrelevant table of the gold database combined with each
/// evidence variant (no statements, the question's own evidence when it has
/// any, and each single non-evidence statement of the database).
struct TableNegativeCandidate {
  const TableSchema* table;
  std::vector<std::string> statements;
};
std::vector<TableNegativeCandidate> table_negative_candidates(
    const DatabaseSchema& db, const std::vector<const TableSchema*>& relevant,
    const std::vector<std::string>& evidence_ids);

/// <question (+ its evidence), table_text> pairs. Relevant tables come from
/// the FROM/JOIN clauses of the gold SQL; each forms its own positive.
/// Negatives are sampled from table_negative_candidates per `policy`
/// (kAll or kPerQuestion).
PairSet gen_table_pairs(const RoutingDataset& dataset, const Corpus& corpus,
                        const NegativePolicy& policy, std::uint64_t seed);

/// Line-delimited JSON, one {id, side_a, side_b, label, kind, negative_class?}
/// object per line.
void write_pairs(const std::vector<PairExample>& pairs, const std::filesystem::path& path);
std::vector<PairExample> read_pairs(const std::filesystem::path& path);

}  // namespace dbrouter
