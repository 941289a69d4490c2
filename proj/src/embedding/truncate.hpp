// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace dbrouter {

/// Whitespace-token count inflated by 1.3 and rounded up; a stand-in for a
/// subword tokenizer.
std::size_t proxy_token_count(std::string_view text);

/// Largest whitespace-token count whose proxy count fits `token_budget`.
std::size_t max_words_for_budget(std::size_t token_budget);

/// Cuts `text` after the last whitespace token that keeps the proxy count
/// within budget. The cut never lands inside a single-quoted identifier and
/// always keeps at least the first token (or first quoted identifier).
/// Original spacing up to the cut is preserved; text already within budget
/// is returned unchanged. token_budget must be >= 1.
std::string truncate(std::string_view text, std::size_t token_budget);

}  // namespace dbrouter
