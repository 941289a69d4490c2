// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>

#include "schema/schema.hpp"

namespace dbrouter {

// Textual schema representation.
//
// The dialect is a reduced CREATE TABLE script, one column per line:
//
//   CREATE TABLE people (
//   'people id' INTEGER PRIMARY KEY,
//   name TEXT,
//   );
//
// Identifiers containing whitespace or DDL punctuation are single-quoted,
// plain identifiers are emitted bare. Every column line ends with a comma,
// including the last one. Blocks are separated by a single newline and the
// script carries no trailing newline.

/// Identifier as it appears in DDL (quoted when required).
std::string render_identifier(std::string_view name);

std::string render_table(const TableSchema& table);

/// CREATE TABLE blocks for every table of db, in order.
std::string render_ddl(const DatabaseSchema& db);

/// CREATE TABLE blocks for a subset of tables, in the given order.
std::string render_tables(std::span<const TableSchema* const> tables);

/// Inverse of render_ddl. Unknown type tokens become DataType kOther.
/// Throws ParseError with the offending line on malformed input and
/// Error(kIntegrity) when the result violates schema invariants (including
/// an empty script).
DatabaseSchema parse_ddl(std::string_view text, std::string db_id = "parsed");

enum class DbNameStyle {
  kRaw,       // db_id verbatim, e.g. cre_Docs_and_Epenses
  kPrettified // underscores replaced by spaces
};

/// Database name line followed by the full DDL script.
std::string db_text(const DatabaseSchema& db, DbNameStyle style = DbNameStyle::kRaw);

/// Domain statements (one per line, in the given order) followed by the
/// table's CREATE TABLE block.
std::string table_text(const TableSchema& table, std::span<const DomainStatement> statements);
std::string table_text(const TableSchema& table, std::span<const std::string> statement_texts);

}  // namespace dbrouter
