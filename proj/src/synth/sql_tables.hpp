// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <string>
#include <string_view>

namespace dbrouter {

/// Table identifiers referenced by FROM and JOIN clauses of a SQLite query,
/// lower-cased and alias-stripped. Subqueries (in FROM, WHERE, select list)
/// and both sides of UNION / INTERSECT / EXCEPT are included; names bound by
/// a WITH clause are not tables and are excluded.
///
/// Throws Error(kParse) prefixed with `context` (typically the question id)
/// on input that cannot be tokenized or whose FROM clause is malformed.
std::set<std::string> extract_tables_from_sql(std::string_view sql, std::string_view context = {});

}  // namespace dbrouter
