// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "schema/ddl.hpp"

#include <algorithm>
#include <optional>
#include <vector>

#include "common/error.hpp"
#include "common/text.hpp"

namespace dbrouter {

namespace {

bool needs_quotes(std::string_view name) {
  return contains_whitespace(name) || name.find_first_of("(),;") != std::string_view::npos ||
         iequals(name, "create");
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && iequals(s.substr(0, prefix.size()), prefix);
}

/// Cursor over one source line; positions are reported 1-based.
class LineCursor {
 public:
  LineCursor(std::string_view line, int line_no) : line_(line), line_no_(line_no) {}

  void skip_spaces() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
  }
  bool done() const { return pos_ >= line_.size(); }
  char peek() const { return line_[pos_]; }
  int column() const { return static_cast<int>(pos_) + 1; }
  std::string_view rest() const { return line_.substr(pos_); }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_no_, column());
  }

  bool consume_keyword(std::string_view kw) {
    skip_spaces();
    if (!starts_with_ci(rest(), kw)) return false;
    const std::size_t end = pos_ + kw.size();
    if (end < line_.size() && line_[end] != ' ' && line_[end] != '\t') return false;
    pos_ = end;
    return true;
  }

  /// Quoted ('a b') or bare identifier. Bare identifiers stop at whitespace
  /// or at any character in `stop`.
  std::string identifier(std::string_view stop) {
    skip_spaces();
    if (done()) fail("expected identifier");
    if (peek() == '\'') {
      const std::size_t close = line_.find('\'', pos_ + 1);
      if (close == std::string_view::npos) fail("unterminated quoted identifier");
      std::string name(line_.substr(pos_ + 1, close - pos_ - 1));
      if (name.empty()) fail("empty quoted identifier");
      pos_ = close + 1;
      return name;
    }
    const std::size_t start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t' &&
           stop.find(line_[pos_]) == std::string_view::npos) {
      ++pos_;
    }
    if (pos_ == start) fail("expected identifier");
    return std::string(line_.substr(start, pos_ - start));
  }

  std::string token() {
    skip_spaces();
    const std::size_t start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t') ++pos_;
    return std::string(line_.substr(start, pos_ - start));
  }

  void set_pos(std::size_t p) { pos_ = p; }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view line_;
  int line_no_;
  std::size_t pos_ = 0;
};

ColumnDef parse_column(std::string_view raw_line, int line_no) {
  // Drop the trailing comma (optional on input, always emitted on output).
  std::string_view line = raw_line;
  while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
  if (!line.empty() && line.back() == ',') line.remove_suffix(1);

  LineCursor cur(line, line_no);
  ColumnDef col;
  col.name = cur.identifier("");
  cur.skip_spaces();
  if (cur.done()) cur.fail("missing type for column '" + col.name + "'");
  const int type_column = cur.column();
  std::string type = cur.token();
  if (type.find('\'') != std::string::npos) {
    throw ParseError("invalid type token '" + type + "'", line_no, type_column);
  }
  col.type = DataType::normalize(type);
  while (true) {
    cur.skip_spaces();
    if (cur.done()) break;
    if (cur.consume_keyword("PRIMARY")) {
      if (!cur.consume_keyword("KEY")) cur.fail("expected KEY after PRIMARY");
      col.is_primary_key = true;
    } else if (cur.consume_keyword("FOREIGN")) {
      if (!cur.consume_keyword("KEY")) cur.fail("expected KEY after FOREIGN");
      col.is_foreign_key = true;
    } else {
      cur.fail("unexpected token '" + std::string(cur.rest()) + "' in column definition");
    }
  }
  return col;
}

}  // namespace

std::string render_identifier(std::string_view name) {
  if (needs_quotes(name)) return "'" + std::string(name) + "'";
  return std::string(name);
}

std::string render_table(const TableSchema& table) {
  std::string out = "CREATE TABLE " + render_identifier(table.name) + " (\n";
  for (const auto& c : table.columns) {
    out += render_identifier(c.name);
    out += ' ';
    out += c.type.spelling();
    if (c.is_primary_key) out += " PRIMARY KEY";
    if (c.is_foreign_key) out += " FOREIGN KEY";
    out += ",\n";
  }
  out += ");";
  return out;
}

std::string render_ddl(const DatabaseSchema& db) {
  std::vector<const TableSchema*> all;
  all.reserve(db.tables.size());
  for (const auto& t : db.tables) all.push_back(&t);
  return render_tables(all);
}

std::string render_tables(std::span<const TableSchema* const> tables) {
  std::string out;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i) out += '\n';
    out += render_table(*tables[i]);
  }
  return out;
}

DatabaseSchema parse_ddl(std::string_view text, std::string db_id) {
  DatabaseSchema db;
  db.db_id = std::move(db_id);

  std::optional<TableSchema> open;
  int open_line = 0;
  int line_no = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;

    if (!open) {
      LineCursor cur(line, line_no);
      if (!cur.consume_keyword("CREATE") || !cur.consume_keyword("TABLE")) {
        cur.skip_spaces();
        cur.fail("expected 'CREATE TABLE'");
      }
      TableSchema table;
      table.name = cur.identifier("(");
      cur.skip_spaces();
      if (cur.done() || cur.peek() != '(') cur.fail("expected '(' after table name");
      cur.set_pos(cur.pos() + 1);
      cur.skip_spaces();
      if (!cur.done()) cur.fail("unexpected text after '('");
      if (db.find_table(table.name) != nullptr) {
        throw ParseError("duplicate table '" + table.name + "'", line_no, 1);
      }
      open = std::move(table);
      open_line = line_no;
      continue;
    }

    if (trimmed == ");") {
      if (open->columns.empty()) {
        throw ParseError("table '" + open->name + "' has no columns", line_no, 1);
      }
      db.tables.push_back(std::move(*open));
      open.reset();
      continue;
    }
    if (starts_with_ci(trimmed, "CREATE TABLE")) {
      throw ParseError("unmatched '(' in CREATE TABLE block for '" + open->name + "'", open_line, 1);
    }
    ColumnDef col = parse_column(line, line_no);
    if (std::any_of(open->columns.begin(), open->columns.end(),
                    [&](const ColumnDef& c) { return c.name == col.name; })) {
      throw ParseError("duplicate column '" + col.name + "'", line_no, 1);
    }
    open->columns.push_back(std::move(col));
  }
  if (open) {
    throw ParseError("unmatched '(' in CREATE TABLE block for '" + open->name + "'", open_line, 1);
  }
  validate(db);
  return db;
}

std::string db_text(const DatabaseSchema& db, DbNameStyle style) {
  std::string name = db.db_id;
  if (style == DbNameStyle::kPrettified) std::replace(name.begin(), name.end(), '_', ' ');
  return name + "\n" + render_ddl(db);
}

std::string table_text(const TableSchema& table, std::span<const DomainStatement> statements) {
  std::vector<std::string> texts;
  texts.reserve(statements.size());
  for (const auto& s : statements) texts.push_back(s.text);
  return table_text(table, texts);
}

std::string table_text(const TableSchema& table, std::span<const std::string> statement_texts) {
  std::string out;
  for (const auto& s : statement_texts) {
    out += s;
    out += '\n';
  }
  out += render_table(table);
  return out;
}

}  // namespace dbrouter
