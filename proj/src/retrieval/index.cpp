// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "retrieval/index.hpp"

#include <algorithm>
#include <cstring>

#include "common/error.hpp"
#include "common/text.hpp"
#include "json.hpp"

namespace dbrouter {

namespace {

constexpr std::string_view kMagic = "DBRIDX1\n";

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& s, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + i])) << (8 * i);
  return v;
}

void put_vector(std::string& out, const std::vector<float>& v) {
  for (float f : v) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(out, bits);
  }
}

std::string style_name(DbNameStyle s) { return s == DbNameStyle::kRaw ? "raw" : "prettified"; }

DbNameStyle parse_style(const std::string& s) {
  if (s == "raw") return DbNameStyle::kRaw;
  if (s == "prettified") return DbNameStyle::kPrettified;
  throw Error(ErrorCode::kParse, "unknown db name style '" + s + "'");
}

nlohmann::json header_json(const RepositoryIndex& index, bool with_layout) {
  const auto& h = index.header();
  nlohmann::json j{{"provider", h.provider},
                   {"adapter_digest", h.adapter_digest},
                   {"granularities",
                    {{"whole_schema", h.granularity.whole_schema},
                     {"tables", h.granularity.tables},
                     {"statements", h.granularity.statements}}},
                   {"dim", h.dim},
                   {"name_style", style_name(h.name_style)},
                   {"databases", index.databases().size()}};
  if (with_layout) {
    nlohmann::json layout = nlohmann::json::array();
    for (const auto& db : index.databases()) {
      layout.push_back({{"db_id", db.db_id},
                        {"whole", db.whole.has_value()},
                        {"tables", db.table_names},
                        {"statements", db.statement_ids}});
    }
    j["layout"] = std::move(layout);
  }
  return j;
}

}  // namespace

RepositoryIndex::RepositoryIndex(IndexHeader header, std::vector<IndexedDatabase> dbs)
    : header_(std::move(header)), dbs_(std::move(dbs)) {
  std::sort(dbs_.begin(), dbs_.end(), [](const auto& a, const auto& b) { return a.db_id < b.db_id; });
  for (std::size_t i = 1; i < dbs_.size(); ++i) {
    if (dbs_[i].db_id == dbs_[i - 1].db_id) throw Error(ErrorCode::kIntegrity, "duplicate db in index: " + dbs_[i].db_id);
  }
  auto check = [&](const std::vector<float>& v, const std::string& what) {
    if (v.size() != header_.dim) {
      throw Error(ErrorCode::kIntegrity, "index vector " + what + " has dim " + std::to_string(v.size()) +
                                             ", header says " + std::to_string(header_.dim));
    }
  };
  for (const auto& db : dbs_) {
    if (!db.whole && db.tables.empty()) {
      throw Error(ErrorCode::kIntegrity, "index has neither schema nor table vectors for " + db.db_id);
    }
    if (db.tables.size() != db.table_names.size() || db.statements.size() != db.statement_ids.size()) {
      throw Error(ErrorCode::kIntegrity, "index layout mismatch for " + db.db_id);
    }
    if (db.whole) check(*db.whole, db.db_id);
    for (std::size_t i = 0; i < db.tables.size(); ++i) check(db.tables[i], db.db_id + "." + db.table_names[i]);
    for (std::size_t i = 0; i < db.statements.size(); ++i) check(db.statements[i], db.db_id + "#" + db.statement_ids[i]);
  }
}

const IndexedDatabase* RepositoryIndex::find(std::string_view db_id) const {
  auto it = std::lower_bound(dbs_.begin(), dbs_.end(), db_id,
                             [](const IndexedDatabase& d, std::string_view id) { return d.db_id < id; });
  return it != dbs_.end() && it->db_id == db_id ? &*it : nullptr;
}

const IndexedDatabase& RepositoryIndex::at(std::string_view db_id) const {
  const auto* d = find(db_id);
  if (d == nullptr) throw Error(ErrorCode::kNotFound, "database not in index: " + std::string(db_id));
  return *d;
}

std::vector<std::string> RepositoryIndex::database_ids() const {
  std::vector<std::string> out;
  out.reserve(dbs_.size());
  for (const auto& d : dbs_) out.push_back(d.db_id);
  return out;
}

RepositoryIndex build_index(const Corpus& corpus, Embedder& embedder, const LinearAdapter* adapter,
                            Granularity granularity, DbNameStyle name_style) {
  if (!granularity.whole_schema && !granularity.tables) {
    throw Error(ErrorCode::kInvalidArgument, "index needs whole-schema or table granularity");
  }
  if (corpus.databases().empty()) throw Error(ErrorCode::kInvalidArgument, "empty repository");

  // Gather every text first so the embedder can batch and dedupe.
  std::vector<std::string> texts;
  std::vector<std::string> labels;
  for (const auto& db : corpus.databases()) {
    if (granularity.whole_schema) {
      texts.push_back(db_text(db, name_style));
      labels.push_back(db.db_id);
    }
    if (granularity.tables) {
      for (const auto& t : db.tables) {
        texts.push_back(render_table(t));
        labels.push_back(db.db_id + "." + t.name);
      }
    }
    if (granularity.statements) {
      for (const auto& s : db.metadata) {
        texts.push_back(s.text);
        labels.push_back(db.db_id + "#" + s.id);
      }
    }
  }

  std::vector<EmbeddingVector> vecs;
  try {
    vecs = embedder.embed_batch(texts);
  } catch (const Error& e) {
    // Narrow down the culprit one text at a time.
    for (std::size_t i = 0; i < texts.size(); ++i) {
      try {
        embedder.embed(texts[i]);
      } catch (const Error& inner) {
        throw Error(inner.code(), "embedding " + labels[i] + ": " + inner.what());
      }
    }
    throw;
  }
  if (adapter != nullptr) {
    for (auto& v : vecs) v = apply_adapter(*adapter, v);
  }

  IndexHeader header;
  header.provider = embedder.identity();
  header.adapter_digest = adapter != nullptr ? adapter->digest() : "";
  header.granularity = granularity;
  header.dim = vecs.front().dim();
  header.name_style = name_style;

  std::vector<IndexedDatabase> dbs;
  std::size_t k = 0;
  for (const auto& db : corpus.databases()) {
    IndexedDatabase entry;
    entry.db_id = db.db_id;
    if (granularity.whole_schema) entry.whole = std::move(vecs[k++].values);
    if (granularity.tables) {
      for (const auto& t : db.tables) {
        entry.table_names.push_back(t.name);
        entry.tables.push_back(std::move(vecs[k++].values));
      }
    }
    if (granularity.statements) {
      for (const auto& s : db.metadata) {
        entry.statement_ids.push_back(s.id);
        entry.statements.push_back(std::move(vecs[k++].values));
      }
    }
    dbs.push_back(std::move(entry));
  }
  return RepositoryIndex(std::move(header), std::move(dbs));
}

void save_index(const RepositoryIndex& index, const std::filesystem::path& path) {
  const std::string h = header_json(index, true).dump();
  std::string out(kMagic);
  put_u32(out, static_cast<std::uint32_t>(h.size()));
  out += h;
  for (const auto& db : index.databases()) {
    if (db.whole) put_vector(out, *db.whole);
    for (const auto& v : db.tables) put_vector(out, v);
    for (const auto& v : db.statements) put_vector(out, v);
  }
  write_file(path.string(), out);
}

RepositoryIndex load_index(const std::filesystem::path& path) {
  const std::string data = read_file(path.string());
  const std::string where = path.string() + ": ";
  if (data.compare(0, kMagic.size(), kMagic) != 0) throw Error(ErrorCode::kParse, where + "not an index file");
  std::size_t off = kMagic.size();
  if (data.size() < off + 4) throw Error(ErrorCode::kParse, where + "truncated header");
  const std::uint32_t hlen = get_u32(data, off);
  off += 4;
  if (data.size() < off + hlen) throw Error(ErrorCode::kParse, where + "truncated header");

  IndexHeader header;
  std::vector<IndexedDatabase> dbs;
  try {
    const auto j = nlohmann::json::parse(data.substr(off, hlen));
    header.provider = j.at("provider").get<std::string>();
    header.adapter_digest = j.at("adapter_digest").get<std::string>();
    const auto& g = j.at("granularities");
    header.granularity = {g.at("whole_schema").get<bool>(), g.at("tables").get<bool>(), g.at("statements").get<bool>()};
    header.dim = j.at("dim").get<std::size_t>();
    header.name_style = parse_style(j.at("name_style").get<std::string>());
    off += hlen;

    auto read_vec = [&]() {
      if (data.size() < off + header.dim * 4) throw Error(ErrorCode::kIntegrity, where + "truncated payload");
      std::vector<float> v(header.dim);
      for (auto& f : v) {
        const std::uint32_t bits = get_u32(data, off);
        std::memcpy(&f, &bits, 4);
        off += 4;
      }
      return v;
    };
    for (const auto& l : j.at("layout")) {
      IndexedDatabase db;
      db.db_id = l.at("db_id").get<std::string>();
      if (l.at("whole").get<bool>()) db.whole = read_vec();
      db.table_names = l.at("tables").get<std::vector<std::string>>();
      for (std::size_t i = 0; i < db.table_names.size(); ++i) db.tables.push_back(read_vec());
      db.statement_ids = l.at("statements").get<std::vector<std::string>>();
      for (std::size_t i = 0; i < db.statement_ids.size(); ++i) db.statements.push_back(read_vec());
      dbs.push_back(std::move(db));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, where + "bad index header: " + e.what());
  }
  if (off != data.size()) throw Error(ErrorCode::kIntegrity, where + "trailing bytes after payload");
  return RepositoryIndex(std::move(header), std::move(dbs));
}

std::string inspect_index(const RepositoryIndex& index) {
  auto j = header_json(index, false);
  std::size_t tables = 0;
  std::size_t statements = 0;
  for (const auto& db : index.databases()) {
    tables += db.tables.size();
    statements += db.statements.size();
  }
  j["table_vectors"] = tables;
  j["statement_vectors"] = statements;
  return j.dump(2);
}

}  // namespace dbrouter
