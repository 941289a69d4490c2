// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "embedding/truncate.hpp"

#include <cctype>
#include <vector>

#include "common/error.hpp"

namespace dbrouter {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

struct Span {
  std::size_t begin;
  std::size_t end;
  bool inside_quote_after;  // a quoted identifier is still open after this token
};

std::vector<Span> tokens(std::string_view text) {
  std::vector<Span> out;
  bool in_quote = false;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i >= text.size()) break;
    const std::size_t b = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    // Only a leading quote opens an identifier and only a trailing one
    // closes it, so apostrophes inside words ("don't") are ignored.
    const std::string_view tok = text.substr(b, i - b);
    if (!in_quote) {
      in_quote = tok.front() == '\'' && (tok.size() == 1 || tok.find('\'', 1) == std::string_view::npos);
    } else if (tok.find('\'') != std::string_view::npos) {
      in_quote = false;
    }
    out.push_back({b, i, in_quote});
  }
  return out;
}

}  // namespace

std::size_t proxy_token_count(std::string_view text) {
  const std::size_t words = tokens(text).size();
  return (13 * words + 9) / 10;
}

std::size_t max_words_for_budget(std::size_t token_budget) {
  // ceil(1.3 w) <= B  <=>  13 w + 9 <= 10 B
  return (10 * token_budget) >= 9 ? (10 * token_budget - 9) / 13 : 0;
}

std::string truncate(std::string_view text, std::size_t token_budget) {
  if (token_budget == 0) throw Error(ErrorCode::kInvalidArgument, "token budget must be >= 1");
  const auto toks = tokens(text);
  const std::size_t limit = max_words_for_budget(token_budget);
  if (toks.size() <= limit) return std::string(text);

  std::size_t keep = limit;
  while (keep > 0 && toks[keep - 1].inside_quote_after) --keep;
  if (keep == 0) {
    // Floor: the first token, extended to close a quoted identifier it opens.
    keep = 1;
    while (keep < toks.size() && toks[keep - 1].inside_quote_after) ++keep;
  }
  return std::string(text.substr(0, toks[keep - 1].end));
}

}  // namespace dbrouter
