// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dbrouter {

/// Extracts the ranked database names from a model reply.
///
/// The first <a,b,c> expression with at least one resolvable name is used;
/// without one, the whole reply is split on commas and newlines. Each name
/// is trimmed, stripped of quotes, and resolved against `shortlist` by exact,
/// then case-insensitive, then unique-substring match. Duplicates keep
/// their first occurrence. The result is padded from shortlist order up to
/// min(3, |shortlist|) entries and cut to that length.
///
/// Throws kParse (message carries the raw reply) when nothing resolves.
std::vector<std::string> parse_ranking(std::string_view response, const std::vector<std::string>& shortlist);

}  // namespace dbrouter
