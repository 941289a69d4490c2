// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "schema/schema.hpp"

#include <array>
#include <set>

#include "common/error.hpp"
#include "common/text.hpp"

namespace dbrouter {

namespace {

struct Synonym {
  std::string_view spelling;
  DataTypeKind kind;
};

constexpr std::array kSynonyms{
    Synonym{"text", DataTypeKind::kText},         Synonym{"varchar", DataTypeKind::kText},
    Synonym{"char", DataTypeKind::kText},         Synonym{"nvarchar", DataTypeKind::kText},
    Synonym{"nchar", DataTypeKind::kText},        Synonym{"character", DataTypeKind::kText},
    Synonym{"string", DataTypeKind::kText},       Synonym{"clob", DataTypeKind::kText},
    Synonym{"integer", DataTypeKind::kInteger},   Synonym{"int", DataTypeKind::kInteger},
    Synonym{"bigint", DataTypeKind::kInteger},    Synonym{"smallint", DataTypeKind::kInteger},
    Synonym{"tinyint", DataTypeKind::kInteger},   Synonym{"mediumint", DataTypeKind::kInteger},
    Synonym{"number", DataTypeKind::kInteger},    Synonym{"real", DataTypeKind::kReal},
    Synonym{"float", DataTypeKind::kReal},        Synonym{"double", DataTypeKind::kReal},
    Synonym{"numeric", DataTypeKind::kReal},      Synonym{"decimal", DataTypeKind::kReal},
    Synonym{"date", DataTypeKind::kDate},         Synonym{"datetime", DataTypeKind::kDate},
    Synonym{"time", DataTypeKind::kDate},         Synonym{"timestamp", DataTypeKind::kDate},
};

}  // namespace

DataType DataType::normalize(std::string_view raw) {
  std::string base = trim(raw);
  if (auto paren = base.find('('); paren != std::string::npos) base = trim(base.substr(0, paren));
  const std::string lowered = to_lower(base);
  for (const auto& s : kSynonyms) {
    if (lowered == s.spelling) return {s.kind, {}};
  }
  return other_type(trim(raw));
}

std::string DataType::spelling() const {
  switch (kind) {
    case DataTypeKind::kText: return "TEXT";
    case DataTypeKind::kInteger: return "INTEGER";
    case DataTypeKind::kReal: return "REAL";
    case DataTypeKind::kDate: return "DATE";
    case DataTypeKind::kOther: return other;
  }
  return other;
}

const TableSchema* DatabaseSchema::find_table(std::string_view name) const {
  for (const auto& t : tables) {
    if (iequals(t.name, name) || iequals(t.sql_name(), name)) return &t;
  }
  return nullptr;
}

const DomainStatement* DatabaseSchema::find_statement(std::string_view id) const {
  for (const auto& s : metadata) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

bool is_renderable_identifier(std::string_view name) {
  return !name.empty() && name.find_first_of("'\n\r") == std::string_view::npos;
}

void validate(const ColumnDef& column) {
  if (!is_renderable_identifier(column.name)) {
    throw Error(ErrorCode::kIntegrity, "invalid column name '" + column.name + "'");
  }
  if (column.type.kind == DataTypeKind::kOther) {
    const auto& raw = column.type.other;
    if (raw.empty() || contains_whitespace(raw) || raw.find('\'') != std::string::npos) {
      throw Error(ErrorCode::kIntegrity,
                  "column '" + column.name + "' has an unrenderable type '" + raw + "'");
    }
    if (DataType::normalize(raw).kind != DataTypeKind::kOther) {
      throw Error(ErrorCode::kIntegrity, "column '" + column.name + "' stores known type '" + raw +
                                             "' as OTHER; normalize it first");
    }
  }
}

void validate(const TableSchema& table) {
  if (!is_renderable_identifier(table.name)) {
    throw Error(ErrorCode::kIntegrity, "invalid table name '" + table.name + "'");
  }
  if (table.columns.empty()) {
    throw Error(ErrorCode::kIntegrity, "table '" + table.name + "' has no columns");
  }
  std::set<std::string> seen;
  for (const auto& c : table.columns) {
    validate(c);
    if (!seen.insert(c.name).second) {
      throw Error(ErrorCode::kIntegrity,
                  "duplicate column '" + c.name + "' in table '" + table.name + "'");
    }
  }
}

void validate(const DatabaseSchema& db) {
  if (db.db_id.empty() || db.db_id.find_first_of("\n\r") != std::string::npos) {
    throw Error(ErrorCode::kIntegrity, "invalid db_id '" + db.db_id + "'");
  }
  if (db.tables.empty()) {
    throw Error(ErrorCode::kIntegrity, "database '" + db.db_id + "' has no tables");
  }
  std::set<std::string> tables;
  for (const auto& t : db.tables) {
    validate(t);
    if (!tables.insert(to_lower(t.name)).second) {
      throw Error(ErrorCode::kIntegrity,
                  "duplicate table '" + t.name + "' in database '" + db.db_id + "'");
    }
  }
  std::set<std::string> statements;
  for (const auto& s : db.metadata) {
    if (s.id.empty() || trim(s.text).empty()) {
      throw Error(ErrorCode::kIntegrity, "empty domain statement in database '" + db.db_id + "'");
    }
    if (!statements.insert(s.id).second) {
      throw Error(ErrorCode::kIntegrity,
                  "duplicate statement id '" + s.id + "' in database '" + db.db_id + "'");
    }
  }
}

}  // namespace dbrouter
