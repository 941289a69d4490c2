// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "eval/report.hpp"

#include <cstdio>

#include "common/error.hpp"
#include "json.hpp"

namespace dbrouter {

MetricsReport evaluate(const Router& router, const Reranker* reranker,
                       const std::vector<const RoutingSample*>& questions, const EvalOptions& opts) {
  if (questions.empty()) throw Error(ErrorCode::kInvalidArgument, "no questions to evaluate");
  const auto scope = opts.rank.scope.empty() ? router.index().database_ids() : opts.rank.scope;
  bool suppress = opts.clusters == nullptr;
  if (opts.clusters != nullptr) {
    for (const auto& id : scope) {
      if (!opts.clusters->contains(id)) throw Error(ErrorCode::kNotFound, "database without a cluster: " + id);
    }
    suppress = opts.clusters->all_singletons(scope);
  }
  RankOptions rank = opts.rank;
  rank.scope = scope;
  rank.top_k = 0;

  std::vector<QuestionRow> rows;
  rows.reserve(questions.size());
  for (const auto* q : questions) {
    const auto ranked = route_question(router, reranker, q->question_id, q->text, rank, opts.rerank_base);
    rows.push_back(score_question(ranked, q->gold_db_id, suppress ? nullptr : opts.clusters));
  }
  return aggregate(std::move(rows), suppress);
}

namespace {

nlohmann::json metrics_json(const OverallMetrics& m) {
  return {{"r1", display2(m.r1)}, {"r3", display2(m.r3)}, {"map", display2(m.map)}};
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", display2(v));
  return buf;
}

}  // namespace

std::string report_json(const std::string& title, const std::string& strategy,
                        const std::vector<LabeledReport>& reports, std::size_t incidents) {
  nlohmann::ordered_json out;
  out["title"] = title;
  out["strategy"] = strategy;
  out["rerank_incidents"] = incidents;
  auto cells = nlohmann::ordered_json::array();
  for (const auto& [label, rep] : reports) {
    nlohmann::ordered_json c;
    c["label"] = label;
    c["n"] = rep.n;
    c["warnings"] = rep.warnings;
    c["overall"] = metrics_json(rep.overall);
    c["within_vertical"] = rep.within_r1 ? nlohmann::json{{"r1", display2(*rep.within_r1)}} : nlohmann::json();
    c["across_vertical"] = rep.across ? metrics_json(*rep.across) : nlohmann::json();
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : rep.rows) {
      nlohmann::ordered_json row;
      row["question_id"] = r.question_id;
      row["gold"] = r.gold;
      row["gold_rank"] = r.gold_rank;
      row["top"] = r.top;
      row["r1"] = r.r1;
      row["r3"] = r.r3;
      row["ap"] = r.ap;
      if (r.within_r1) {
        row["within_r1"] = *r.within_r1;
        row["across_r1"] = *r.across_r1;
        row["across_r3"] = *r.across_r3;
        row["across_ap"] = *r.across_ap;
      }
      rows.push_back(std::move(row));
    }
    c["rows"] = std::move(rows);
    cells.push_back(std::move(c));
  }
  out["reports"] = std::move(cells);
  return out.dump(2) + "\n";
}

std::string report_csv(const std::vector<LabeledReport>& reports) {
  std::string out = "label,n,r1,r3,map,wv_r1,av_r1,av_r3,av_map\n";
  for (const auto& [label, rep] : reports) {
    std::string l = label;
    if (l.find_first_of(",\"") != std::string::npos) {
      std::string q = "\"";
      for (char c : l) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      l = q + "\"";
    }
    out += l + "," + std::to_string(rep.n) + "," + fmt2(rep.overall.r1) + "," + fmt2(rep.overall.r3) + "," +
           fmt2(rep.overall.map) + ",";
    out += rep.within_r1 ? fmt2(*rep.within_r1) : "";
    out += ",";
    if (rep.across) out += fmt2(rep.across->r1) + "," + fmt2(rep.across->r3) + "," + fmt2(rep.across->map);
    else out += ",,";
    out += "\n";
  }
  return out;
}

}  // namespace dbrouter
