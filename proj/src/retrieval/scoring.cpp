// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "retrieval/scoring.hpp"

#include <algorithm>
#include <numeric>

#include "common/error.hpp"
#include "common/numeric.hpp"

namespace dbrouter {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kWholeSchema:
      return "whole-schema";
    case Strategy::kPooledTables:
      return "pooled-tables";
    case Strategy::kPooledTablesMetadata:
      return "pooled-tables+metadata";
    case Strategy::kLlmRerank:
      return "llm-rerank";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view s) {
  if (s == "whole-schema" || s == "whole") return Strategy::kWholeSchema;
  if (s == "pooled-tables" || s == "pooled") return Strategy::kPooledTables;
  if (s == "pooled-tables+metadata" || s == "pooled+metadata") return Strategy::kPooledTablesMetadata;
  if (s == "llm-rerank") return Strategy::kLlmRerank;
  throw Error(ErrorCode::kInvalidArgument, "unknown strategy '" + std::string(s) + "'");
}

std::vector<std::size_t> top_k_indices(std::span<const double> values, std::size_t k) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) { return values[a] > values[b] || (values[a] == values[b] && a < b); });
  idx.resize(k);
  return idx;
}

PooledScore mean_top_k(std::span<const double> sims, std::size_t k) {
  if (sims.empty()) throw Error(ErrorCode::kInvalidArgument, "pooling over zero tables");
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "pooling k must be >= 1");
  PooledScore out;
  out.contributors = top_k_indices(sims, k);
  std::vector<double> top;
  top.reserve(out.contributors.size());
  for (auto i : out.contributors) top.push_back(sims[i]);
  out.score = exact_mean(top);
  return out;
}

std::size_t RankedList::rank_of(std::string_view db_id) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].db_id == db_id) return i + 1;
  }
  return 0;
}

void sort_entries(std::vector<RankedEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.db_id < b.db_id;
  });
}

}  // namespace dbrouter
