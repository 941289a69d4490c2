// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "common/text.hpp"
#include "json.hpp"
#include "schema/clusters.hpp"
#include "schema/corpus.hpp"
#include "schema/ddl.hpp"
#include "test_support.hpp"

namespace dbrouter {
namespace {

using testing::col;
using testing::people_table;
using testing::perpetrator_table;

DatabaseSchema perpetrator_db() {
  DatabaseSchema db;
  db.db_id = "perpetrator_db";
  db.tables = {perpetrator_table(), people_table()};
  return db;
}

TEST(Ddl, PerpetratorGolden) {
  EXPECT_EQ(render_ddl(perpetrator_db()), read_file(testing::fixture_path("ddl_perpetrator.sql").string()));
}

TEST(Ddl, MinimalTable) {
  TableSchema t{"t", {col("x", DataType::integer())}, {}};
  EXPECT_EQ(render_table(t), "CREATE TABLE t (\nx INTEGER,\n);");
}

TEST(Ddl, QuotesMultiWordIdentifiers) {
  EXPECT_EQ(render_identifier("home town"), "'home town'");
  EXPECT_EQ(render_identifier("name"), "name");
}

TEST(Ddl, ParsesPublishedBlocks) {
  const auto db = parse_ddl(read_file(testing::fixture_path("ddl_perpetrator.sql").string()), "p");
  ASSERT_EQ(db.tables.size(), 2u);
  EXPECT_EQ(db.tables[0].columns.size(), 8u);
  EXPECT_EQ(db.tables[1].columns.size(), 5u);
  EXPECT_EQ(db.tables[0], perpetrator_table());
  EXPECT_EQ(db.tables[1], people_table());
}

TEST(Ddl, ParseRejectsEmptyText) { EXPECT_THROW(parse_ddl("", "x"), Error); }

TEST(Ddl, ParseNamesUnmatchedParenLine) {
  try {
    parse_ddl("CREATE TABLE a (\nx INTEGER,\n);\nCREATE TABLE b (\ny TEXT,\n", "x");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(Ddl, RoundTripRandomSchemas) {
  Rng rng(11);
  const std::vector<DataType> types{DataType::text(), DataType::integer(), DataType::real(), DataType::date(),
                                    DataType::other_type("BLOB")};
  auto word = [&] {
    static const std::string alpha = "abcdefghijklmnopqrstuvwxyz_0123456789";
    std::string w(1, alpha[rng.uniform(26)]);
    const auto n = rng.uniform(8);
    for (std::size_t i = 0; i < n; ++i) w += alpha[rng.uniform(alpha.size())];
    return w;
  };
  for (int round = 0; round < 200; ++round) {
    DatabaseSchema db;
    db.db_id = "rand";
    const auto n_tables = 1 + rng.uniform(4);
    for (std::size_t t = 0; t < n_tables; ++t) {
      TableSchema table;
      table.name = word() + (rng.uniform(3) == 0 ? " " + word() : "") + std::to_string(t);
      const auto n_cols = 1 + rng.uniform(6);
      for (std::size_t c = 0; c < n_cols; ++c) {
        table.columns.push_back(col(word() + (rng.uniform(2) == 0 ? " " + word() : "") + "_" + std::to_string(c),
                                    types[rng.uniform(types.size())], rng.uniform(4) == 0, rng.uniform(4) == 0));
      }
      db.tables.push_back(std::move(table));
    }
    const auto text = render_ddl(db);
    const auto back = parse_ddl(text, "rand");
    ASSERT_EQ(back.tables, db.tables) << text;
    EXPECT_EQ(render_ddl(back), text);
  }
}

TEST(Ddl, DbTextPrefixesName) {
  EXPECT_EQ(db_text(perpetrator_db()).rfind("perpetrator_db\nCREATE TABLE perpetrator (", 0), 0u);
  EXPECT_EQ(db_text(perpetrator_db(), DbNameStyle::kPrettified).rfind("perpetrator db\n", 0), 0u);
  EXPECT_EQ(db_text(perpetrator_db()), db_text(perpetrator_db()));
}

TEST(Ddl, TableTextWithStatements) {
  const auto people = people_table();
  EXPECT_EQ(table_text(people, std::vector<std::string>{}), render_table(people));
  EXPECT_EQ(table_text(people, std::vector<std::string>{"height is in centimeters"}),
            "height is in centimeters\n" + render_table(people));
}

TEST(Corpus, ToyManifestLoads) {
  const auto corpus = ingest_corpus(testing::source_path("data/toy"));
  EXPECT_EQ(corpus.databases().size(), 3u);
  EXPECT_EQ(corpus.samples().size(), 12u);
  EXPECT_EQ(corpus.database_ids(), (std::vector<std::string>{"concert_singer", "musical", "pets_1"}));
  const auto& s = corpus.sample("toy-01");
  ASSERT_EQ(corpus.evidence_of(s).size(), 1u);
  EXPECT_EQ(corpus.evidence_of(s)[0]->id, "cs-2");
}

TEST(Corpus, RejectsUnknownDatabase) {
  DatabaseSchema db{"a", {TableSchema{"t", {col("x", DataType::integer())}, {}}}, {}, std::nullopt};
  RoutingSample s{"q1", "text", "missing", std::nullopt, Partition::kTrain};
  try {
    Corpus({db}, {s});
    FAIL() << "expected an integrity error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIntegrity);
  }
}

TEST(Corpus, ManifestRoundTrip) {
  const auto corpus = ingest_corpus(testing::source_path("data/toy"));
  testing::TempDir dir;
  write_manifest(corpus, dir.path());
  const auto back = ingest_corpus(dir.path());
  EXPECT_EQ(back.databases(), corpus.databases());
  ASSERT_EQ(back.samples().size(), corpus.samples().size());
  for (std::size_t i = 0; i < back.samples().size(); ++i) {
    EXPECT_EQ(back.samples()[i].question_id, corpus.samples()[i].question_id);
    EXPECT_EQ(back.samples()[i].partition, corpus.samples()[i].partition);
    EXPECT_EQ(back.samples()[i].evidence_ids, corpus.samples()[i].evidence_ids);
  }
}

TEST(Corpus, ConvertsSpiderLayout) {
  using nlohmann::json;
  testing::TempDir dir;
  const json tables = json::array({json{{"db_id", "pets_1"},
                                        {"table_names", {"student", "has pet"}},
                                        {"table_names_original", {"Student", "Has_Pet"}},
                                        {"column_names", {{-1, "*"}, {0, "stuid"}, {0, "age"}, {1, "stuid"}}},
                                        {"column_names_original", {{-1, "*"}, {0, "StuID"}, {0, "Age"}, {1, "StuID"}}},
                                        {"column_types", {"text", "number", "number", "number"}},
                                        {"primary_keys", {1}},
                                        {"foreign_keys", {{3, 1}}}},
                                   json{{"db_id", "flight_2"},
                                        {"table_names", {"airlines"}},
                                        {"table_names_original", {"airlines"}},
                                        {"column_names", {{-1, "*"}, {0, "uid"}}},
                                        {"column_names_original", {{-1, "*"}, {0, "uid"}}},
                                        {"column_types", {"text", "number"}},
                                        {"primary_keys", json::array()},
                                        {"foreign_keys", json::array()}}});
  write_file((dir / "tables.json").string(), tables.dump());
  write_file((dir / "train_spider.json").string(),
             json::array({json{{"db_id", "pets_1"}, {"question", "How many students?"},
                               {"query", "SELECT count(*) FROM student"}}})
                 .dump());
  write_file((dir / "dev.json").string(),
             json::array({json{{"db_id", "flight_2"}, {"question", "List airlines."},
                               {"query", "SELECT * FROM airlines"}}})
                 .dump());
  const auto corpus = convert_spider(dir.path());
  ASSERT_EQ(corpus.databases().size(), 2u);
  const auto& pets = corpus.database("pets_1");
  ASSERT_EQ(pets.tables.size(), 2u);
  EXPECT_EQ(pets.tables[1].name, "has pet");
  EXPECT_EQ(pets.tables[1].sql_name(), "Has_Pet");
  EXPECT_TRUE(pets.tables[0].columns[0].is_primary_key);
  EXPECT_TRUE(pets.tables[1].columns[0].is_foreign_key);
  ASSERT_EQ(corpus.samples().size(), 2u);
  EXPECT_EQ(corpus.samples()[0].partition, Partition::kTrain);
  EXPECT_EQ(corpus.samples()[1].partition, Partition::kHeldOut);
  EXPECT_EQ(corpus.sql_map().size(), 2u);
}

TEST(Clusters, ShippedListsHaveExpectedSizes) {
  const auto spider_in = VerticalClusters::load(testing::source_path("data/clusters/spider_in_domain.json"));
  const auto spider_out = VerticalClusters::load(testing::source_path("data/clusters/spider_cross_domain.json"));
  const auto bird_in = VerticalClusters::load(testing::source_path("data/clusters/bird_in_domain.json"));
  const auto bird_out = VerticalClusters::load(testing::source_path("data/clusters/bird_cross_domain.json"));
  EXPECT_EQ(spider_in.mapping().size(), 140u);
  EXPECT_EQ(spider_out.mapping().size(), 20u);
  EXPECT_EQ(bird_in.mapping().size(), 69u);
  EXPECT_EQ(bird_out.mapping().size(), 11u);
  std::vector<std::string> out_ids;
  for (const auto& [db, c] : bird_out.mapping()) out_ids.push_back(db);
  EXPECT_TRUE(bird_out.all_singletons(out_ids));
  out_ids.clear();
  for (const auto& [db, c] : spider_out.mapping()) out_ids.push_back(db);
  EXPECT_EQ(spider_out.size_profile(out_ids), (std::vector<std::size_t>{6, 4, 4, 3, 1, 1, 1}));
  EXPECT_EQ(spider_in.at("musical"), spider_in.at("music_1"));
}

}  // namespace
}  // namespace dbrouter
