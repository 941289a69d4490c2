// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dbrouter {

enum class Strategy { kWholeSchema, kPooledTables, kPooledTablesMetadata, kLlmRerank };

std::string_view to_string(Strategy s);
/// Accepts the canonical names plus "whole", "pooled", "pooled+metadata".
Strategy parse_strategy(std::string_view s);

/// Indices of the k largest values, largest first; equal values keep
/// ascending index order. k is clamped to the input size.
std::vector<std::size_t> top_k_indices(std::span<const double> values, std::size_t k);

struct PooledScore {
  double score = 0.0;
  std::vector<std::size_t> contributors;  // indices into the input, best first
};

/// Mean of the k highest similarities (all of them when fewer than k).
PooledScore mean_top_k(std::span<const double> sims, std::size_t k);

struct RankedEntry {
  std::string db_id;
  double score = 0.0;
  std::vector<std::string> top_tables;  // pooled strategies only

  bool operator==(const RankedEntry&) const = default;
};

struct RankedList {
  std::string question_id;
  Strategy strategy = Strategy::kWholeSchema;
  std::vector<RankedEntry> entries;

  /// 1-based rank of `db_id`, 0 when absent.
  std::size_t rank_of(std::string_view db_id) const;
  bool operator==(const RankedList&) const = default;
};

/// Score descending, ties by ascending db_id.
void sort_entries(std::vector<RankedEntry>& entries);

}  // namespace dbrouter
