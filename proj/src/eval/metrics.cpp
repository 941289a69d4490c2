// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "eval/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "common/numeric.hpp"

namespace dbrouter {

namespace {

void require_nonempty(const RankedList& ranked) {
  if (ranked.entries.empty()) throw Error(ErrorCode::kInvalidArgument, "empty ranked list");
}

}  // namespace

int recall_at_k(const RankedList& ranked, const std::string& gold, std::size_t k) {
  require_nonempty(ranked);
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "recall k must be >= 1");
  const std::size_t r = ranked.rank_of(gold);
  return r != 0 && r <= k ? 1 : 0;
}

double average_precision(const RankedList& ranked, const std::string& gold) {
  require_nonempty(ranked);
  const std::size_t r = ranked.rank_of(gold);
  return r == 0 ? 0.0 : 1.0 / static_cast<double>(r);
}

std::pair<int, int> vertical_r1(const RankedList& ranked, const std::string& gold, const VerticalClusters& clusters) {
  require_nonempty(ranked);
  const std::string& pred = ranked.entries.front().db_id;
  const std::string& gc = clusters.at(gold);
  const std::string& pc = clusters.at(pred);
  if (pred == gold) return {1, 1};
  if (pc == gc) return {0, 1};
  return {1, 0};
}

std::pair<int, double> across_vertical_rk_map(const RankedList& ranked, const std::string& gold,
                                              const VerticalClusters& clusters, std::size_t k) {
  require_nonempty(ranked);
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "recall k must be >= 1");
  const std::string& gc = clusters.at(gold);
  for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
    if (clusters.at(ranked.entries[i].db_id) == gc) {
      return {i < k ? 1 : 0, 1.0 / static_cast<double>(i + 1)};
    }
  }
  return {0, 0.0};
}

QuestionRow score_question(const RankedList& ranked, const std::string& gold, const VerticalClusters* clusters) {
  QuestionRow row;
  row.question_id = ranked.question_id;
  row.gold = gold;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, ranked.entries.size()); ++i) {
    row.top.push_back(ranked.entries[i].db_id);
  }
  row.gold_rank = ranked.rank_of(gold);
  row.r1 = recall_at_k(ranked, gold, 1);
  row.r3 = recall_at_k(ranked, gold, 3);
  row.ap = average_precision(ranked, gold);
  if (clusters != nullptr) {
    const auto [w, a] = vertical_r1(ranked, gold, *clusters);
    const auto [a3, aap] = across_vertical_rk_map(ranked, gold, *clusters, 3);
    row.within_r1 = w;
    row.across_r1 = a;
    row.across_r3 = a3;
    row.across_ap = aap;
  }
  return row;
}

MetricsReport aggregate(std::vector<QuestionRow> rows, bool suppress_vertical) {
  if (rows.empty()) throw Error(ErrorCode::kInvalidArgument, "aggregate needs at least one row");
  MetricsReport rep;
  rep.n = rows.size();
  double r1 = 0, r3 = 0;
  double w1 = 0, a1 = 0, a3 = 0;
  std::vector<double> aps;
  std::vector<double> aaps;
  bool vertical = !suppress_vertical;
  for (const auto& row : rows) {
    r1 += row.r1;
    r3 += row.r3;
    aps.push_back(row.ap);
    if (row.gold_rank == 0) rep.warnings.push_back("gold database " + row.gold + " absent from ranking of " + row.question_id);
    if (!row.within_r1 || !row.across_r1 || !row.across_r3 || !row.across_ap) {
      vertical = false;
      continue;
    }
    w1 += *row.within_r1;
    a1 += *row.across_r1;
    a3 += *row.across_r3;
    aaps.push_back(*row.across_ap);
  }
  const double ap = exact_sum(aps);
  const double aap = exact_sum(aaps);
  const double n = static_cast<double>(rows.size());
  rep.overall = {100.0 * r1 / n, 100.0 * r3 / n, 100.0 * ap / n};
  if (vertical) {
    rep.within_r1 = 100.0 * w1 / n;
    rep.across = OverallMetrics{100.0 * a1 / n, 100.0 * a3 / n, 100.0 * aap / n};
  }
  rep.rows = std::move(rows);
  return rep;
}

double display2(double pct) { return std::round(pct * 100.0) / 100.0; }

}  // namespace dbrouter
