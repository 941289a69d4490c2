// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dbrouter {

enum class DataTypeKind { kText, kInteger, kReal, kDate, kOther };

/// Column type after normalization onto the small enumeration the DDL
/// format uses. Unrecognized spellings are kept verbatim as kOther.
struct DataType {
  DataTypeKind kind = DataTypeKind::kText;
  std::string other;  // raw spelling, only meaningful for kOther

  static DataType text() { return {DataTypeKind::kText, {}}; }
  static DataType integer() { return {DataTypeKind::kInteger, {}}; }
  static DataType real() { return {DataTypeKind::kReal, {}}; }
  static DataType date() { return {DataTypeKind::kDate, {}}; }
  static DataType other_type(std::string raw) { return {DataTypeKind::kOther, std::move(raw)}; }

  /// Case-insensitive mapping of a source type spelling (SQLite, Spider,
  /// BIRD) onto the enumeration. A parenthesized size suffix is ignored
  /// when matching, so VARCHAR(255) is TEXT.
  static DataType normalize(std::string_view raw);

  /// Rendered token: TEXT / INTEGER / REAL / DATE or the raw spelling.
  std::string spelling() const;

  bool operator==(const DataType&) const = default;
};

struct ColumnDef {
  std::string name;
  DataType type;
  bool is_primary_key = false;
  bool is_foreign_key = false;

  bool operator==(const ColumnDef&) const = default;
};

struct TableSchema {
  std::string name;
  std::vector<ColumnDef> columns;
  /// Identifier used by the source SQL when it differs from the display
  /// name (Spider/BIRD keep both). Empty means "same as name". Not rendered.
  std::string source_name;

  const std::string& sql_name() const { return source_name.empty() ? name : source_name; }

  bool operator==(const TableSchema&) const = default;
};

struct DomainStatement {
  std::string id;
  std::string text;

  bool operator==(const DomainStatement&) const = default;
};

struct DatabaseSchema {
  std::string db_id;
  std::vector<TableSchema> tables;
  std::vector<DomainStatement> metadata;
  std::optional<std::string> cluster_id;

  /// Case-insensitive lookup by display name or source name.
  const TableSchema* find_table(std::string_view name) const;
  const DomainStatement* find_statement(std::string_view id) const;

  bool operator==(const DatabaseSchema&) const = default;
};

/// True when an identifier can appear in DDL at all (non-empty, no single
/// quote, no line break).
bool is_renderable_identifier(std::string_view name);

void validate(const ColumnDef& column);
void validate(const TableSchema& table);
void validate(const DatabaseSchema& db);

}  // namespace dbrouter
