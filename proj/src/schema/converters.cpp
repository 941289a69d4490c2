// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

// Converters from the Spider and BIRD release layouts into the neutral
// corpus model. Both releases describe schemas with the same tables.json
// shape; they differ in where the files live and in BIRD's evidence field.

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "common/error.hpp"
#include "common/text.hpp"
#include "json.hpp"
#include "schema/corpus.hpp"

namespace dbrouter {

using nlohmann::json;

namespace {

json load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kIo, "missing release file '" + path.string() + "'");
  }
  try {
    return json::parse(read_file(path.string()));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

std::filesystem::path first_existing(const std::filesystem::path& root,
                                     std::initializer_list<const char*> candidates) {
  for (const char* c : candidates) {
    if (std::filesystem::exists(root / c)) return root / c;
  }
  return root / *candidates.begin();
}

std::string clean_identifier(std::string name) {
  name.erase(std::remove_if(name.begin(), name.end(),
                            [](char c) { return c == '\'' || c == '\n' || c == '\r'; }),
             name.end());
  return trim(name);
}

/// Picks the display name, falling back to the original spelling (and then
/// a numeric suffix) when the display form is empty or already taken.
std::string unique_name(std::string preferred, const std::string& original,
                        std::set<std::string>& taken) {
  preferred = clean_identifier(std::move(preferred));
  if (preferred.empty() || taken.contains(to_lower(preferred))) {
    preferred = clean_identifier(original);
  }
  std::string name = preferred;
  for (int n = 2; taken.contains(to_lower(name)); ++n) name = preferred + "_" + std::to_string(n);
  taken.insert(to_lower(name));
  return name;
}

DataType release_type(const std::string& raw) {
  DataType t = DataType::normalize(raw);
  if (t.kind == DataTypeKind::kOther) t.other = to_upper(t.other);
  return t;
}

std::map<std::string, DatabaseSchema> schemas_from_tables_json(const json& tables) {
  std::map<std::string, DatabaseSchema> out;
  for (const auto& j : tables) {
    DatabaseSchema db;
    db.db_id = j.at("db_id").get<std::string>();
    const auto& tnames = j.at("table_names");
    const auto& tnames_orig = j.at("table_names_original");
    const auto& cnames = j.at("column_names");
    const auto& cnames_orig = j.at("column_names_original");
    const auto& ctypes = j.at("column_types");

    std::set<std::size_t> pk;
    for (const auto& p : j.value("primary_keys", json::array())) {
      if (p.is_array()) {
        for (const auto& q : p) pk.insert(q.get<std::size_t>());
      } else {
        pk.insert(p.get<std::size_t>());
      }
    }
    std::set<std::size_t> fk;
    for (const auto& pair : j.value("foreign_keys", json::array())) fk.insert(pair.at(0).get<std::size_t>());

    std::set<std::string> taken_tables;
    for (std::size_t t = 0; t < tnames.size(); ++t) {
      TableSchema table;
      const std::string orig = tnames_orig.at(t).get<std::string>();
      table.name = unique_name(tnames.at(t).get<std::string>(), orig, taken_tables);
      if (!iequals(table.name, orig)) table.source_name = orig;
      db.tables.push_back(std::move(table));
    }
    std::vector<std::set<std::string>> taken_cols(db.tables.size());
    for (std::size_t c = 0; c < cnames.size(); ++c) {
      const int t = cnames.at(c).at(0).get<int>();
      if (t < 0) continue;  // the synthetic '*' column
      const auto ti = static_cast<std::size_t>(t);
      ColumnDef col;
      col.name = unique_name(cnames.at(c).at(1).get<std::string>(),
                             cnames_orig.at(c).at(1).get<std::string>(), taken_cols.at(ti));
      col.type = release_type(ctypes.at(c).get<std::string>());
      col.is_primary_key = pk.contains(c);
      col.is_foreign_key = fk.contains(c);
      db.tables.at(ti).columns.push_back(std::move(col));
    }
    // Tables without any column cannot be rendered; drop them.
    std::erase_if(db.tables, [](const TableSchema& tb) { return tb.columns.empty(); });
    out.emplace(db.db_id, std::move(db));
  }
  return out;
}

std::string padded(const std::string& prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%05zu", i);
  return prefix + buf;
}

struct RawQuestion {
  std::string db_id;
  std::string text;
  std::string sql;
  std::string evidence;
};

std::vector<RawQuestion> questions_from(const json& arr, const char* sql_key) {
  std::vector<RawQuestion> out;
  for (const auto& j : arr) {
    RawQuestion q;
    q.db_id = j.at("db_id").get<std::string>();
    q.text = j.at("question").get<std::string>();
    if (j.contains(sql_key)) q.sql = j.at(sql_key).get<std::string>();
    if (j.contains("evidence") && j.at("evidence").is_string()) q.evidence = trim(j.at("evidence").get<std::string>());
    out.push_back(std::move(q));
  }
  return out;
}

Corpus assemble(std::map<std::string, DatabaseSchema> schemas,
                const std::vector<std::pair<std::vector<RawQuestion>, Partition>>& parts,
                const std::string& prefix, bool with_evidence) {
  std::vector<RoutingSample> samples;
  std::map<std::string, std::string> sql_map;
  std::set<std::string> used;
  // db_id -> evidence text -> statement id
  std::map<std::string, std::map<std::string, std::string>> statement_ids;

  for (const auto& [questions, partition] : parts) {
    const std::string tag = prefix + (partition == Partition::kTrain ? "-train-" : "-dev-");
    for (std::size_t i = 0; i < questions.size(); ++i) {
      const auto& q = questions[i];
      auto it = schemas.find(q.db_id);
      if (it == schemas.end()) {
        throw Error(ErrorCode::kIntegrity, "question references unknown db '" + q.db_id + "'");
      }
      RoutingSample s;
      s.question_id = padded(tag, i);
      s.text = q.text;
      s.gold_db_id = q.db_id;
      s.partition = partition;
      if (with_evidence && !q.evidence.empty()) {
        auto& ids = statement_ids[q.db_id];
        auto [pos, inserted] = ids.emplace(q.evidence, "");
        if (inserted) {
          pos->second = padded("s", it->second.metadata.size());
          it->second.metadata.push_back({pos->second, q.evidence});
        }
        s.evidence_ids = std::vector<std::string>{pos->second};
      }
      if (!q.sql.empty()) sql_map.emplace(s.question_id, q.sql);
      used.insert(q.db_id);
      samples.push_back(std::move(s));
    }
  }
  std::vector<DatabaseSchema> databases;
  for (auto& [id, db] : schemas) {
    if (used.contains(id)) databases.push_back(std::move(db));
  }
  return Corpus(std::move(databases), std::move(samples), std::move(sql_map));
}

}  // namespace

Corpus convert_spider(const std::filesystem::path& release_dir) {
  auto schemas = schemas_from_tables_json(load(release_dir / "tables.json"));
  auto train = questions_from(load(release_dir / "train_spider.json"), "query");
  auto dev = questions_from(load(release_dir / "dev.json"), "query");
  return assemble(std::move(schemas),
                  {{std::move(train), Partition::kTrain}, {std::move(dev), Partition::kHeldOut}},
                  "spider", false);
}

Corpus convert_bird(const std::filesystem::path& release_dir) {
  auto train_tables = load(first_existing(release_dir, {"train/train_tables.json", "train_tables.json"}));
  auto dev_tables = load(first_existing(release_dir, {"dev/dev_tables.json", "dev_tables.json"}));
  auto schemas = schemas_from_tables_json(train_tables);
  for (auto& [id, db] : schemas_from_tables_json(dev_tables)) schemas.emplace(id, std::move(db));
  auto train = questions_from(load(first_existing(release_dir, {"train/train.json", "train.json"})), "SQL");
  auto dev = questions_from(load(first_existing(release_dir, {"dev/dev.json", "dev.json"})), "SQL");
  return assemble(std::move(schemas),
                  {{std::move(train), Partition::kTrain}, {std::move(dev), Partition::kHeldOut}},
                  "bird", true);
}

}  // namespace dbrouter
