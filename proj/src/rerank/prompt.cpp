// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "rerank/prompt.hpp"

#include "common/error.hpp"
#include "schema/ddl.hpp"

namespace dbrouter {

namespace {

constexpr const char* kPreamble =
    "You are a database administrator\n"
    "and have designed the following databases\n"
    "whose names and corresponding schema is given as:\n";

// Double spaces reproduce the published template byte for byte.
constexpr const char* kInstructions =
    "Your task is to find the names of the 3 most relevant databases\n"
    "to answer the given question correctly.\n"
    "Your response must contain 3 relevant database names\n"
    "in descending order of relevance in the given format:\n"
    "<database 1,database 2,database 3>.\n"
    "The first database  must be most relevant to the question.\n"
    "Only provide the 3 database names and not  any explanation.\n";

}  // namespace

std::size_t prompt_token_proxy(const std::string& text) { return (text.size() + 3) / 4; }

std::string build_prompt(const std::string& question, const std::vector<RerankCandidate>& candidates) {
  if (candidates.empty()) throw Error(ErrorCode::kInvalidArgument, "prompt needs at least one candidate");
  std::string out = kPreamble;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    if (c.tables.empty()) throw Error(ErrorCode::kInvalidArgument, "candidate without tables: " + c.db_id);
    std::vector<const TableSchema*> ptrs;
    for (const auto& t : c.tables) ptrs.push_back(&t);
    out += "Database " + std::to_string(i + 1) + ": " + c.db_id + "\n";
    out += "Database schema: " + render_tables(ptrs) + "\n";
  }
  out += "\n";
  out += kInstructions;
  out += "Question: " + question + "\n";
  out += "Top-3 Ranked Databases:";
  return out;
}

std::vector<RerankCandidate> fit_to_budget(const std::string& question, std::vector<RerankCandidate> candidates,
                                           std::size_t max_tokens) {
  if (candidates.empty()) throw Error(ErrorCode::kInvalidArgument, "no candidates to fit");
  if (max_tokens < 1) throw Error(ErrorCode::kInvalidArgument, "max prompt tokens must be >= 1");
  {
    std::vector<RerankCandidate> minimal{{candidates.front().db_id, {candidates.front().tables.front()}}};
    const auto need = prompt_token_proxy(build_prompt(question, minimal));
    if (need > max_tokens) {
      throw Error(ErrorCode::kInfeasible, "prompt budget " + std::to_string(max_tokens) +
                                              " is below the minimum viable prompt (" + std::to_string(need) + ")");
    }
  }
  auto fits = [&] { return prompt_token_proxy(build_prompt(question, candidates)) <= max_tokens; };

  for (std::size_t ci = candidates.size(); ci-- > 0 && !fits();) {
    auto& tables = candidates[ci].tables;
    while (tables.size() > 1 && !fits()) tables.pop_back();
  }
  while (candidates.size() > 1 && !fits()) candidates.pop_back();
  return candidates;
}

}  // namespace dbrouter
