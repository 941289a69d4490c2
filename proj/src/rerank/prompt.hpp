// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "schema/schema.hpp"

namespace dbrouter {

struct RerankCandidate {
  std::string db_id;
  std::vector<TableSchema> tables;  // best table first; never empty
};

/// ceil(characters / 4).
std::size_t prompt_token_proxy(const std::string& text);

/// The ranking prompt: preamble, "Database i: <db_id>" / "Database schema:
/// <DDL>" per candidate in order, instruction block, question. No trailing
/// newline.
std::string build_prompt(const std::string& question, const std::vector<RerankCandidate>& candidates);

/// Shrinks `candidates` until the prompt's proxy count is <= max_tokens:
/// first trailing tables, tail candidate first and moving up, down to one
/// table each; then whole candidates from the tail. The top candidate's
/// top table always stays. kInfeasible when even that does not fit.
std::vector<RerankCandidate> fit_to_budget(const std::string& question, std::vector<RerankCandidate> candidates,
                                           std::size_t max_tokens);

}  // namespace dbrouter
