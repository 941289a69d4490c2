// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "synth/sql_tables.hpp"

#include <array>
#include <cctype>
#include <vector>

#include "common/error.hpp"
#include "common/text.hpp"

namespace dbrouter {

namespace {

enum class Tok { kWord, kQuoted, kString, kNumber, kPunct };

struct Token {
  Tok kind;
  std::string text;  // identifier/keyword text without quotes; punctuation char
  std::size_t offset;
};

constexpr std::array kReserved{
    "select", "from",   "where",   "group",   "order",  "limit",  "having", "union",
    "intersect", "except", "join", "inner",   "left",   "right",  "full",   "outer",
    "cross",  "natural", "on",     "using",   "as",     "values", "offset", "window",
    "with",   "and",    "or",      "not",     "by",     "recursive",
};

bool is_reserved(std::string_view w) {
  for (auto r : kReserved) {
    if (iequals(w, r)) return true;
  }
  return false;
}

class Lexer {
 public:
  Lexer(std::string_view sql, std::string_view context) : sql_(sql), context_(context) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < sql_.size()) {
      const char c = sql_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '-' && peek(1) == '-') {
        while (pos_ < sql_.size() && sql_[pos_] != '\n') ++pos_;
      } else if (c == '/' && peek(1) == '*') {
        const auto end = sql_.find("*/", pos_ + 2);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos_ = end + 2;
      } else if (c == '\'') {
        out.push_back({Tok::kString, quoted('\'', '\''), pos_});
      } else if (c == '"') {
        out.push_back({Tok::kQuoted, quoted('"', '"'), pos_});
      } else if (c == '`') {
        out.push_back({Tok::kQuoted, quoted('`', '`'), pos_});
      } else if (c == '[') {
        out.push_back({Tok::kQuoted, quoted('[', ']'), pos_});
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        const std::size_t start = pos_;
        while (pos_ < sql_.size() &&
               (std::isalnum(static_cast<unsigned char>(sql_[pos_])) || sql_[pos_] == '.')) {
          ++pos_;
        }
        out.push_back({Tok::kNumber, std::string(sql_.substr(start, pos_ - start)), start});
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
                 static_cast<unsigned char>(c) >= 0x80) {
        const std::size_t start = pos_;
        while (pos_ < sql_.size() &&
               (std::isalnum(static_cast<unsigned char>(sql_[pos_])) || sql_[pos_] == '_' ||
                sql_[pos_] == '$' || static_cast<unsigned char>(sql_[pos_]) >= 0x80)) {
          ++pos_;
        }
        out.push_back({Tok::kWord, std::string(sql_.substr(start, pos_ - start)), start});
      } else {
        out.push_back({Tok::kPunct, std::string(1, c), pos_});
        ++pos_;
      }
    }
    return out;
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < sql_.size() ? sql_[pos_ + ahead] : '\0';
  }

  /// Reads a delimited token; a doubled closing delimiter is an escape.
  std::string quoted(char open, char close) {
    const std::size_t start = pos_;
    std::string text;
    ++pos_;
    while (true) {
      if (pos_ >= sql_.size()) {
        pos_ = start;
        fail(std::string("unterminated ") + open + "-quoted token");
      }
      const char c = sql_[pos_++];
      if (c == close) {
        if (open == close && pos_ < sql_.size() && sql_[pos_] == close) {
          text.push_back(close);
          ++pos_;
          continue;
        }
        return text;
      }
      text.push_back(c);
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    std::string where = context_.empty() ? std::string("sql") : std::string(context_);
    throw Error(ErrorCode::kParse, where + ": " + message + " at offset " + std::to_string(pos_));
  }

  std::string_view sql_;
  std::string_view context_;
  std::size_t pos_ = 0;
};

class Extractor {
 public:
  Extractor(std::vector<Token> tokens, std::string_view context)
      : toks_(std::move(tokens)), context_(context) {}

  std::set<std::string> run() {
    check_balance();
    for (std::size_t i = 0; i < toks_.size(); ++i) {
      if (is_word(i, "with")) collect_ctes(i + 1);
    }
    for (std::size_t i = 0; i < toks_.size(); ++i) {
      if (is_word(i, "from")) from_list(i + 1);
    }
    for (const auto& cte : ctes_) tables_.erase(cte);
    return tables_;
  }

 private:
  bool at_end(std::size_t i) const { return i >= toks_.size(); }
  bool is_word(std::size_t i, std::string_view w) const {
    return !at_end(i) && toks_[i].kind == Tok::kWord && iequals(toks_[i].text, w);
  }
  bool is_punct(std::size_t i, char c) const {
    return !at_end(i) && toks_[i].kind == Tok::kPunct && toks_[i].text[0] == c;
  }
  bool is_name(std::size_t i) const {
    if (at_end(i)) return false;
    if (toks_[i].kind == Tok::kQuoted) return true;
    return toks_[i].kind == Tok::kWord && !is_reserved(toks_[i].text);
  }

  [[noreturn]] void fail(std::size_t i, const std::string& message) const {
    std::string where = context_.empty() ? std::string("sql") : std::string(context_);
    std::string at = at_end(i) ? std::string("end of query") : "'" + toks_[i].text + "'";
    throw Error(ErrorCode::kParse, where + ": " + message + " near " + at);
  }

  void check_balance() const {
    int depth = 0;
    for (std::size_t i = 0; i < toks_.size(); ++i) {
      if (is_punct(i, '(')) ++depth;
      if (is_punct(i, ')') && --depth < 0) fail(i, "unbalanced ')'");
    }
    if (depth != 0) fail(toks_.size(), "unbalanced '('");
  }

  std::size_t matching_paren(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < toks_.size(); ++i) {
      if (is_punct(i, '(')) ++depth;
      if (is_punct(i, ')') && --depth == 0) return i;
    }
    fail(open, "unbalanced '('");
  }

  void collect_ctes(std::size_t i) {
    if (is_word(i, "recursive")) ++i;
    while (is_name(i)) {
      const std::string name = to_lower(toks_[i].text);
      ++i;
      if (is_punct(i, '(')) i = matching_paren(i) + 1;
      if (!is_word(i, "as")) return;
      ++i;
      if (is_word(i, "not")) ++i;
      if (is_word(i, "materialized")) ++i;
      if (!is_punct(i, '(')) return;
      ctes_.insert(name);
      i = matching_paren(i) + 1;
      if (!is_punct(i, ',')) return;
      ++i;
    }
  }

  std::size_t skip_alias(std::size_t i) const {
    if (is_word(i, "as")) {
      if (!is_name(i + 1)) fail(i + 1, "expected alias after AS");
      return i + 2;
    }
    if (is_name(i)) return i + 1;
    return i;
  }

  /// Consumes a join operator; returns the index after JOIN or npos.
  std::size_t join_operator(std::size_t i) const {
    if (is_word(i, "natural")) ++i;
    if (is_word(i, "left") || is_word(i, "right") || is_word(i, "full")) {
      ++i;
      if (is_word(i, "outer")) ++i;
    } else if (is_word(i, "inner") || is_word(i, "cross")) {
      ++i;
    }
    return is_word(i, "join") ? i + 1 : std::string::npos;
  }

  bool ends_clause(std::size_t i) const {
    if (at_end(i) || is_punct(i, ';') || is_punct(i, ')') || is_punct(i, ',')) return true;
    for (auto kw : {"where", "group", "order", "limit", "having", "union", "intersect", "except",
                    "window", "offset"}) {
      if (is_word(i, kw)) return true;
    }
    return join_operator(i) != std::string::npos;
  }

  /// Parses `table [AS alias]`, a subquery, or a parenthesized join, and
  /// returns the index just past it.
  std::size_t table_factor(std::size_t i, int& open_parens) {
    while (is_punct(i, '(')) {
      if (is_word(i + 1, "select") || is_word(i + 1, "with") || is_word(i + 1, "values")) {
        // Subquery: its own FROM clauses are picked up by the outer scan.
        return skip_alias(matching_paren(i) + 1);
      }
      ++open_parens;
      ++i;
    }
    if (!is_name(i)) fail(i, "expected table name in FROM clause");
    std::string name = toks_[i].text;
    ++i;
    while (is_punct(i, '.') && is_name(i + 1)) {
      name = toks_[i + 1].text;  // schema.table -> table
      i += 2;
    }
    if (is_punct(i, '(')) {
      // Table-valued function, e.g. json_each(x); not a schema table.
      return skip_alias(matching_paren(i) + 1);
    }
    tables_.insert(to_lower(name));
    return skip_alias(i);
  }

  void from_list(std::size_t i) {
    int open_parens = 0;
    while (true) {
      i = table_factor(i, open_parens);
      while (true) {
        while (open_parens > 0 && is_punct(i, ')')) {
          --open_parens;
          i = skip_alias(i + 1);
        }
        if (is_word(i, "on")) {
          ++i;
          int depth = 0;
          while (!at_end(i)) {
            if (is_punct(i, '(')) ++depth;
            if (is_punct(i, ')')) {
              if (depth == 0) break;
              --depth;
            }
            if (depth == 0 && ends_clause(i)) break;
            ++i;
          }
          continue;
        }
        if (is_word(i, "using")) {
          if (!is_punct(i + 1, '(')) fail(i + 1, "expected '(' after USING");
          i = matching_paren(i + 1) + 1;
          continue;
        }
        break;
      }
      if (is_punct(i, ',')) {
        ++i;
        continue;
      }
      if (const std::size_t next = join_operator(i); next != std::string::npos) {
        i = next;
        continue;
      }
      return;
    }
  }

  std::vector<Token> toks_;
  std::string_view context_;
  std::set<std::string> tables_;
  std::set<std::string> ctes_;
};

}  // namespace

std::set<std::string> extract_tables_from_sql(std::string_view sql, std::string_view context) {
  if (trim(sql).empty()) {
    throw Error(ErrorCode::kParse,
                (context.empty() ? std::string("sql") : std::string(context)) + ": empty query");
  }
  Extractor ex(Lexer(sql, context).run(), context);
  return ex.run();
}

}  // namespace dbrouter
