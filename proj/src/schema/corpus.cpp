// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "schema/corpus.hpp"

#include <algorithm>
#include <set>

#include "common/error.hpp"
#include "common/text.hpp"
#include "json.hpp"

namespace dbrouter {

using nlohmann::json;

Corpus::Corpus(std::vector<DatabaseSchema> databases, std::vector<RoutingSample> samples,
               std::map<std::string, std::string> sql_map)
    : databases_(std::move(databases)), samples_(std::move(samples)), sql_map_(std::move(sql_map)) {
  for (std::size_t i = 0; i < databases_.size(); ++i) {
    validate(databases_[i]);
    if (!db_index_.emplace(databases_[i].db_id, i).second) {
      throw Error(ErrorCode::kIntegrity, "duplicate db_id '" + databases_[i].db_id + "'");
    }
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (s.question_id.empty()) throw Error(ErrorCode::kIntegrity, "sample without question_id");
    if (trim(s.text).empty()) {
      throw Error(ErrorCode::kIntegrity, "sample '" + s.question_id + "' has empty text");
    }
    if (!sample_index_.emplace(s.question_id, i).second) {
      throw Error(ErrorCode::kIntegrity, "duplicate question_id '" + s.question_id + "'");
    }
    const DatabaseSchema* gold = find_database(s.gold_db_id);
    if (gold == nullptr) {
      throw Error(ErrorCode::kIntegrity, "sample '" + s.question_id + "' references unknown db '" +
                                             s.gold_db_id + "'");
    }
    if (s.evidence_ids) {
      for (const auto& id : *s.evidence_ids) {
        if (gold->find_statement(id) == nullptr) {
          throw Error(ErrorCode::kIntegrity, "sample '" + s.question_id +
                                                 "' references unknown statement '" + id +
                                                 "' of db '" + s.gold_db_id + "'");
        }
      }
      evidence_map_.emplace(s.question_id, *s.evidence_ids);
    }
  }
  for (const auto& [qid, sql] : sql_map_) {
    if (!sample_index_.contains(qid)) {
      throw Error(ErrorCode::kIntegrity, "sql entry for unknown question '" + qid + "'");
    }
  }
}

const DatabaseSchema* Corpus::find_database(std::string_view db_id) const {
  auto it = db_index_.find(std::string(db_id));
  return it == db_index_.end() ? nullptr : &databases_[it->second];
}

const DatabaseSchema& Corpus::database(std::string_view db_id) const {
  const auto* db = find_database(db_id);
  if (db == nullptr) throw Error(ErrorCode::kNotFound, "unknown database '" + std::string(db_id) + "'");
  return *db;
}

const RoutingSample* Corpus::find_sample(std::string_view question_id) const {
  auto it = sample_index_.find(std::string(question_id));
  return it == sample_index_.end() ? nullptr : &samples_[it->second];
}

const RoutingSample& Corpus::sample(std::string_view question_id) const {
  const auto* s = find_sample(question_id);
  if (s == nullptr) {
    throw Error(ErrorCode::kNotFound, "unknown question '" + std::string(question_id) + "'");
  }
  return *s;
}

std::vector<std::string> Corpus::database_ids() const {
  std::vector<std::string> ids;
  ids.reserve(databases_.size());
  for (const auto& db : databases_) ids.push_back(db.db_id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<const DomainStatement*> Corpus::evidence_of(const RoutingSample& s) const {
  std::vector<const DomainStatement*> out;
  if (!s.evidence_ids) return out;
  const auto& gold = database(s.gold_db_id);
  for (const auto& id : *s.evidence_ids) out.push_back(gold.find_statement(id));
  return out;
}

namespace {

json load_json(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kIo, "missing file '" + path.string() + "'");
  }
  try {
    return json::parse(read_file(path.string()));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

template <typename T>
T required(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorCode::kParse, where + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kParse, where + ": field '" + key + "' has the wrong type");
  }
}

DatabaseSchema database_from_json(const json& j) {
  DatabaseSchema db;
  db.db_id = required<std::string>(j, "db_id", "databases.json");
  const std::string where = "databases.json[" + db.db_id + "]";
  if (j.contains("cluster_id") && !j.at("cluster_id").is_null()) {
    db.cluster_id = required<std::string>(j, "cluster_id", where);
  }
  for (const auto& jt : required<json>(j, "tables", where)) {
    TableSchema t;
    t.name = required<std::string>(jt, "name", where);
    if (jt.contains("source_name")) t.source_name = required<std::string>(jt, "source_name", where);
    for (const auto& jc : required<json>(jt, "columns", where + "." + t.name)) {
      ColumnDef c;
      c.name = required<std::string>(jc, "name", where + "." + t.name);
      c.type = DataType::normalize(required<std::string>(jc, "type", where + "." + t.name));
      c.is_primary_key = jc.value("pk", false);
      c.is_foreign_key = jc.value("fk", false);
      t.columns.push_back(std::move(c));
    }
    db.tables.push_back(std::move(t));
  }
  if (j.contains("metadata")) {
    for (const auto& js : j.at("metadata")) {
      db.metadata.push_back(
          {required<std::string>(js, "id", where), required<std::string>(js, "text", where)});
    }
  }
  return db;
}

json database_to_json(const DatabaseSchema& db) {
  json j;
  j["db_id"] = db.db_id;
  if (db.cluster_id) j["cluster_id"] = *db.cluster_id;
  json tables = json::array();
  for (const auto& t : db.tables) {
    json jt;
    jt["name"] = t.name;
    if (!t.source_name.empty()) jt["source_name"] = t.source_name;
    json cols = json::array();
    for (const auto& c : t.columns) {
      cols.push_back({{"name", c.name},
                      {"type", c.type.spelling()},
                      {"pk", c.is_primary_key},
                      {"fk", c.is_foreign_key}});
    }
    jt["columns"] = std::move(cols);
    tables.push_back(std::move(jt));
  }
  j["tables"] = std::move(tables);
  json meta = json::array();
  for (const auto& s : db.metadata) meta.push_back({{"id", s.id}, {"text", s.text}});
  j["metadata"] = std::move(meta);
  return j;
}

}  // namespace

Corpus ingest_corpus(const std::filesystem::path& manifest_dir) {
  const json dbs = load_json(manifest_dir / "databases.json");
  const json samples = load_json(manifest_dir / "samples.json");
  if (!dbs.is_array() || !samples.is_array()) {
    throw Error(ErrorCode::kParse, "manifest files must contain JSON arrays");
  }
  std::vector<DatabaseSchema> databases;
  for (const auto& j : dbs) databases.push_back(database_from_json(j));

  std::vector<RoutingSample> out;
  std::map<std::string, std::string> sql_map;
  for (const auto& j : samples) {
    RoutingSample s;
    s.question_id = required<std::string>(j, "question_id", "samples.json");
    const std::string where = "samples.json[" + s.question_id + "]";
    s.text = required<std::string>(j, "text", where);
    s.gold_db_id = required<std::string>(j, "gold_db_id", where);
    if (j.contains("evidence_ids") && !j.at("evidence_ids").is_null()) {
      s.evidence_ids = required<std::vector<std::string>>(j, "evidence_ids", where);
    }
    if (j.contains("sql") && !j.at("sql").is_null()) {
      sql_map.emplace(s.question_id, required<std::string>(j, "sql", where));
    }
    const std::string partition = j.value("partition", std::string("train"));
    if (partition == "train") {
      s.partition = Partition::kTrain;
    } else if (partition == "heldout") {
      s.partition = Partition::kHeldOut;
    } else {
      throw Error(ErrorCode::kParse, where + ": unknown partition '" + partition + "'");
    }
    out.push_back(std::move(s));
  }
  return Corpus(std::move(databases), std::move(out), std::move(sql_map));
}

void write_manifest(const Corpus& corpus, const std::filesystem::path& manifest_dir) {
  std::filesystem::create_directories(manifest_dir);
  json dbs = json::array();
  for (const auto& db : corpus.databases()) dbs.push_back(database_to_json(db));
  json samples = json::array();
  for (const auto& s : corpus.samples()) {
    json j{{"question_id", s.question_id}, {"text", s.text}, {"gold_db_id", s.gold_db_id}};
    if (s.evidence_ids) j["evidence_ids"] = *s.evidence_ids;
    if (auto it = corpus.sql_map().find(s.question_id); it != corpus.sql_map().end()) {
      j["sql"] = it->second;
    }
    j["partition"] = s.partition == Partition::kTrain ? "train" : "heldout";
    samples.push_back(std::move(j));
  }
  write_file((manifest_dir / "databases.json").string(), dbs.dump(1) + "\n");
  write_file((manifest_dir / "samples.json").string(), samples.dump(1) + "\n");
}

}  // namespace dbrouter
