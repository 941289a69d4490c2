// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <set>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "common/text.hpp"
#include "json.hpp"
#include "oracles/oracles.hpp"
#include "schema/clusters.hpp"
#include "schema/ddl.hpp"
#include "synth/pairs.hpp"
#include "synth/splits.hpp"
#include "synth/sql_tables.hpp"
#include "synth/subsets.hpp"
#include "test_support.hpp"

namespace dbrouter {
namespace {

using testing::col;

DatabaseSchema simple_db(const std::string& id, std::vector<std::string> tables = {"t"},
                         std::vector<DomainStatement> metadata = {}) {
  DatabaseSchema db;
  db.db_id = id;
  for (const auto& t : tables) db.tables.push_back({t, {col(t + " id", DataType::integer(), true)}, {}});
  db.metadata = std::move(metadata);
  return db;
}

RoutingSample q(const std::string& id, const std::string& text, const std::string& db,
                Partition p = Partition::kTrain, std::optional<std::vector<std::string>> evidence = std::nullopt) {
  return {id, text, db, std::move(evidence), p};
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

// ---- splits ----------------------------------------------------------------

TEST(Splits, SingleDatabaseTenQuestions) {
  std::vector<RoutingSample> samples;
  for (int i = 0; i < 10; ++i) samples.push_back(q("q" + std::to_string(i), "question " + std::to_string(i), "a"));
  const Corpus corpus({simple_db("a")}, samples);
  const auto ds = make_splits(corpus, 0.2, 7);
  EXPECT_EQ(ds.test_in.size(), 2u);
  EXPECT_EQ(ds.train.size(), 8u);
  std::set<std::string> all = as_set(ds.train);
  for (const auto& id : ds.test_in) EXPECT_TRUE(all.insert(id).second);
  EXPECT_EQ(all.size(), 10u);
}

TEST(Splits, DuplicateQuestionStaysInTrain) {
  std::vector<RoutingSample> samples;
  for (const std::string db : {"a", "b", "c"}) {
    samples.push_back(q(db + "-dup", "Count the number of accounts.", db));
    for (int i = 0; i < 3; ++i) samples.push_back(q(db + std::to_string(i), db + " question " + std::to_string(i), db));
  }
  const Corpus corpus({simple_db("a"), simple_db("b"), simple_db("c")}, samples);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto ds = make_splits(corpus, 0.5, seed);
    const auto train = as_set(ds.train);
    for (const std::string db : {"a", "b", "c"}) EXPECT_TRUE(train.contains(db + "-dup"));
  }
}

TEST(Splits, QuotaRoundsHalfUp) {
  for (std::size_t n = 0; n < 60; ++n) {
    for (double f : {0.1, 0.16, 0.2, 0.25, 0.5}) EXPECT_EQ(in_domain_quota(n, f), oracle::quota(n, f)) << n << " " << f;
  }
}

TEST(Splits, HeldOutPartitionBecomesTestOut) {
  const auto corpus = ingest_corpus(testing::source_path("data/toy"));
  const auto ds = dataset_from_partitions(corpus);
  EXPECT_EQ(ds.train.size(), 8u);
  EXPECT_EQ(ds.test_out.size(), 4u);
  EXPECT_TRUE(ds.test_in.empty());
  EXPECT_EQ(ds.out_dbs, (std::vector<std::string>{"pets_1"}));

  const auto split = make_splits(corpus, 0.25, 3);
  EXPECT_EQ(split.test_in.size(), 2u);
  EXPECT_EQ(split.train_dbs, (std::vector<std::string>{"concert_singer", "musical"}));
}

TEST(Splits, RejectsBadFraction) {
  const auto corpus = ingest_corpus(testing::source_path("data/toy"));
  EXPECT_THROW(make_splits(corpus, 0.0, 1), Error);
  EXPECT_THROW(make_splits(corpus, 1.0, 1), Error);
}

TEST(Splits, SplitFileRoundTrip) {
  std::vector<RoutingSample> samples;
  for (int i = 0; i < 6; ++i) samples.push_back(q("a" + std::to_string(i), "a text " + std::to_string(i), "a"));
  for (int i = 0; i < 6; ++i) samples.push_back(q("b" + std::to_string(i), "b text " + std::to_string(i), "b"));
  samples.push_back(q("c0", "c text", "c", Partition::kHeldOut));
  const Corpus corpus({simple_db("a"), simple_db("b"), simple_db("c")}, samples);
  const auto ds = make_splits(corpus, 0.3, 5);
  testing::TempDir dir;
  write_split_file(ds, dir / "split.json");
  const auto back = read_split_file(corpus, dir / "split.json");
  EXPECT_EQ(back.train, ds.train);
  EXPECT_EQ(back.test_in, ds.test_in);
  EXPECT_EQ(back.test_out, ds.test_out);
  EXPECT_EQ(back.train_dbs, ds.train_dbs);
  EXPECT_EQ(back.out_dbs, (std::vector<std::string>{"c"}));
}

// ---- schema pairs ------------------------------------------------------------

TEST(SchemaPairs, TwoDatabasesOneQuestionAll) {
  const Corpus corpus({simple_db("a"), simple_db("b")}, {q("q1", "question a", "a"), q("q2", "question b", "b")});
  RoutingDataset ds;
  ds.train = {"q1"};
  ds.train_dbs = {"a", "b"};
  const auto set = gen_schema_pairs(ds, corpus, NegativePolicy::parse("all"), 0);
  EXPECT_EQ(set.positives, 1u);
  EXPECT_EQ(set.negatives, 1u);
  for (const auto& p : set.pairs) {
    EXPECT_EQ(p.side_a, "question a");
    EXPECT_EQ(p.side_b, db_text(corpus.database(p.label == 1 ? "a" : "b")));
  }
}

TEST(SchemaPairs, PolicyCounts) {
  std::vector<RoutingSample> samples;
  std::vector<DatabaseSchema> dbs;
  for (int d = 0; d < 4; ++d) {
    const std::string id = "db" + std::to_string(d);
    dbs.push_back(simple_db(id));
    for (int i = 0; i < 5; ++i) samples.push_back(q(id + "-" + std::to_string(i), id + " q " + std::to_string(i), id));
  }
  const Corpus corpus(dbs, samples);
  RoutingDataset ds;
  for (const auto& s : samples) ds.train.push_back(s.question_id);
  ds.train_dbs = corpus.database_ids();
  EXPECT_EQ(gen_schema_pairs(ds, corpus, NegativePolicy::parse("all"), 1).negatives, 20u * 3);
  EXPECT_EQ(gen_schema_pairs(ds, corpus, NegativePolicy::parse("per-question:2"), 1).negatives, 20u * 2);
  // 4 x 3 ordered database pairs, two questions each.
  EXPECT_EQ(gen_schema_pairs(ds, corpus, NegativePolicy::parse("per-db-pair:2"), 1).negatives, 12u * 2);
  EXPECT_EQ(gen_schema_pairs(ds, corpus, NegativePolicy::parse("per-db-pair"), 1).positives, 20u);
  const auto a = gen_schema_pairs(ds, corpus, NegativePolicy::parse("per-question:1"), 9);
  const auto b = gen_schema_pairs(ds, corpus, NegativePolicy::parse("per-question:1"), 9);
  EXPECT_EQ(a.pairs, b.pairs);
}

TEST(SchemaPairs, PolicyParsing) {
  EXPECT_EQ(NegativePolicy::parse("all").to_string(), "all");
  EXPECT_EQ(NegativePolicy::parse("per-question:3").to_string(), "per-question:3");
  EXPECT_EQ(NegativePolicy::parse("per-db-pair").to_string(), "per-db-pair:1");
  EXPECT_THROW(NegativePolicy::parse("some"), Error);
  EXPECT_THROW(NegativePolicy::parse("per-question:x"), Error);
}

// ---- statement pairs -----------------------------------------------------------

TEST(StatementPairs, HardAndSoftFromEnumeratedCandidates) {
  const auto gold = simple_db("a", {"t"}, {{"a1", "alpha one"}, {"a2", "alpha two"}, {"a3", "alpha three"}});
  const auto other = simple_db("b", {"t"}, {{"b1", "beta one"}, {"b2", "beta two"}, {"b3", "beta three"}});
  const Corpus corpus({gold, other}, {q("q1", "question", "a", Partition::kTrain, std::vector<std::string>{"a1"}),
                                      q("q2", "other", "b")});
  RoutingDataset ds;
  ds.train = {"q1", "q2"};
  ds.train_dbs = {"a", "b"};
  const auto set = gen_statement_pairs(ds, corpus, 1, 1, 3);
  EXPECT_EQ(set.skipped_questions, 1u);
  ASSERT_EQ(set.pairs.size(), 3u);
  const std::set<std::string> hard_pool{"alpha two", "alpha three"};
  const std::set<std::string> soft_pool{"beta one", "beta two", "beta three"};
  int pos = 0, hard = 0, soft = 0;
  for (const auto& p : set.pairs) {
    if (p.label == 1) {
      EXPECT_EQ(p.side_b, "alpha one");
      ++pos;
    } else if (p.negative_class == NegativeClass::kHard) {
      EXPECT_TRUE(hard_pool.contains(p.side_b));
      ++hard;
    } else {
      EXPECT_TRUE(soft_pool.contains(p.side_b));
      ++soft;
    }
  }
  EXPECT_EQ(pos, 1);
  EXPECT_EQ(hard, 1);
  EXPECT_EQ(soft, 1);
}

TEST(StatementPairs, ExhaustedHardPool) {
  const auto gold = simple_db("a", {"t"}, {{"a1", "one"}, {"a2", "two"}});
  const Corpus corpus({gold}, {q("q1", "question", "a", Partition::kTrain, std::vector<std::string>{"a1", "a2"})});
  RoutingDataset ds;
  ds.train = {"q1"};
  ds.train_dbs = {"a"};
  const auto set = gen_statement_pairs(ds, corpus, 2, 2, 0);
  EXPECT_EQ(set.positives, 2u);
  EXPECT_EQ(set.negatives, 0u);
}

// ---- table pairs -----------------------------------------------------------------

TEST(TablePairs, CandidatesEnumerated) {
  auto db = simple_db("a", {"x", "y", "z"}, {{"s1", "first"}, {"s2", "second"}});
  const Corpus corpus({db}, {q("q1", "question", "a", Partition::kTrain, std::vector<std::string>{"s1"})},
                      {{"q1", "SELECT * FROM x JOIN y ON x.id = y.id"}});
  const auto& stored = corpus.database("a");
  RoutingDataset ds;
  ds.train = {"q1"};
  ds.train_dbs = {"a"};
  const auto set = gen_table_pairs(ds, corpus, NegativePolicy::parse("all"), 0);
  EXPECT_EQ(set.positives, 2u);
  // {z} x {no statements, own evidence, each non-evidence statement}
  const auto cands = table_negative_candidates(stored, {&stored.tables[0], &stored.tables[1]}, {"s1"});
  ASSERT_EQ(cands.size(), 3u);
  std::set<std::vector<std::string>> variants;
  for (const auto& c : cands) {
    EXPECT_EQ(c.table->name, "z");
    variants.insert(c.statements);
  }
  EXPECT_EQ(variants, (std::set<std::vector<std::string>>{{}, {"first"}, {"second"}}));
  EXPECT_EQ(set.negatives, 3u);
  for (const auto& p : set.pairs) EXPECT_EQ(p.side_a, "question\nfirst");
}

TEST(TablePairs, SingleTableDatabase) {
  const Corpus corpus({simple_db("a", {"only"})}, {q("q1", "question", "a")}, {{"q1", "SELECT * FROM only"}});
  RoutingDataset ds;
  ds.train = {"q1"};
  ds.train_dbs = {"a"};
  const auto set = gen_table_pairs(ds, corpus, NegativePolicy::parse("all"), 0);
  EXPECT_EQ(set.positives, 1u);
  EXPECT_EQ(set.negatives, 0u);
  EXPECT_THROW(gen_table_pairs(ds, corpus, NegativePolicy::parse("per-db-pair"), 0), Error);
}

TEST(PairIo, RoundTrip) {
  std::vector<PairExample> pairs(2);
  pairs[0] = {"p0", "question", "CREATE TABLE t (\nx INTEGER,\n);", 1, PairKind::kSchema, std::nullopt, ""};
  pairs[1] = {"p1", "q \"quoted\"", "stmt", 0, PairKind::kStatement, NegativeClass::kSoft, ""};
  testing::TempDir dir;
  write_pairs(pairs, dir / "pairs.jsonl");
  EXPECT_EQ(read_pairs(dir / "pairs.jsonl"), pairs);
}

// ---- SQL tables ------------------------------------------------------------------

TEST(SqlTables, TrivialCases) {
  EXPECT_EQ(extract_tables_from_sql("SELECT name FROM people"), (std::set<std::string>{"people"}));
  EXPECT_EQ(extract_tables_from_sql("SELECT * FROM a JOIN b ON a.x=b.x"), (std::set<std::string>{"a", "b"}));
  EXPECT_EQ(extract_tables_from_sql("SELECT * FROM (SELECT * FROM t1) s, t2 AS z"),
            (std::set<std::string>{"t1", "t2"}));
}

TEST(SqlTables, MatchesParserOracle) {
  std::ifstream in(testing::fixture_path("sql_tables_oracle.jsonl"));
  ASSERT_TRUE(in);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    const auto want = j.at("tables").get<std::set<std::string>>();
    EXPECT_EQ(extract_tables_from_sql(j.at("sql").get<std::string>()), want) << j.at("sql");
    ++n;
  }
  EXPECT_GE(n, 30);
}

TEST(SqlTables, MalformedInput) {
  EXPECT_THROW(extract_tables_from_sql("SELECT * FROM", "q9"), Error);
}

// ---- subsets ---------------------------------------------------------------------

TEST(Subsets, NestedSizes) {
  std::vector<std::string> pool;
  for (int i = 0; i < 160; ++i) pool.push_back("db" + std::to_string(1000 + i));
  const std::vector<std::size_t> sizes{160, 120, 80, 60, 20};
  const auto sets = sample_db_subsets(pool, sizes, 4);
  ASSERT_EQ(sets.size(), 5u);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    EXPECT_EQ(sets[i].size(), sizes[i]);
    if (i > 0) {
      const auto big = as_set(sets[i - 1]);
      for (const auto& db : sets[i]) EXPECT_TRUE(big.contains(db));
    }
  }
  EXPECT_EQ(sets[0], pool);
  const std::vector<std::size_t> too_big{161};
  EXPECT_THROW(sample_db_subsets(pool, too_big, 4), Error);
}

TEST(Subsets, ClusterMatchedSetsMirrorProfile) {
  std::map<std::string, std::string> m;
  std::vector<std::string> pool;
  // Clusters of sizes 5, 4, 3, 2, 2 and four singletons.
  const std::vector<std::size_t> sizes{5, 4, 3, 2, 2, 1, 1, 1, 1};
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    for (std::size_t i = 0; i < sizes[c]; ++i) {
      const std::string db = "c" + std::to_string(c) + "_" + std::to_string(i);
      m[db] = "c" + std::to_string(c);
      pool.push_back(db);
    }
  }
  const VerticalClusters vc(m);
  const std::vector<std::size_t> profile{2, 1, 1};
  const auto sets = sample_cluster_matched(pool, vc, profile, 4, 1);
  ASSERT_EQ(sets.size(), 4u);
  std::set<std::string> seen;
  for (const auto& s : sets) {
    EXPECT_EQ(s.size(), 4u);
    EXPECT_EQ(vc.size_profile(s), (std::vector<std::size_t>{2, 1, 1}));
    for (const auto& db : s) EXPECT_TRUE(seen.insert(db).second) << db;
  }
  EXPECT_EQ(sample_cluster_matched(pool, vc, profile, 4, 1), sets);
  EXPECT_THROW(sample_cluster_matched(pool, vc, {200}, 1, 1), Error);
}

// 7 x 20 from the 140 in-domain databases must use every one of them, but
// only the 21 size-1 slots can take members of the 10 two-member clusters
// and the 21 singletons, so no exact match exists.
TEST(Subsets, SevenSetsOfTwentyNeedTheClosestMatch) {
  const auto in_clusters = VerticalClusters::load(testing::source_path("data/clusters/spider_in_domain.json"));
  const auto out_clusters = VerticalClusters::load(testing::source_path("data/clusters/spider_cross_domain.json"));
  std::vector<std::string> pool, out;
  for (const auto& [db, c] : in_clusters.mapping()) pool.push_back(db);
  for (const auto& [db, c] : out_clusters.mapping()) out.push_back(db);
  const auto profile = out_clusters.size_profile(out);
  try {
    sample_cluster_matched(pool, in_clusters, profile, 7, 1);
    FAIL() << "expected no exact match";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
  }
  const auto closest = sample_cluster_closest(pool, in_clusters, profile, 7, 1);
  ASSERT_EQ(closest.sets.size(), 7u);
  std::set<std::string> seen;
  std::size_t distance = 0;
  for (const auto& s : closest.sets) {
    EXPECT_EQ(s.size(), 20u);
    distance += profile_distance(in_clusters.size_profile(s), profile);
    for (const auto& db : s) EXPECT_TRUE(seen.insert(db).second) << db;
  }
  EXPECT_EQ(seen.size(), 140u);
  EXPECT_EQ(distance, closest.distance);
  // Lower bound: 20 surplus databases from two-member clusters each cost 2
  // when they displace a singleton slot.
  EXPECT_GT(closest.distance, 0u);
  EXPECT_EQ(sample_cluster_closest(pool, in_clusters, profile, 7, 1).sets, closest.sets);
}

TEST(Subsets, ProfileDistance) {
  EXPECT_EQ(profile_distance({3, 1}, {1, 3}), 0u);
  EXPECT_EQ(profile_distance({2, 2}, {3, 1}), 2u);
  EXPECT_EQ(profile_distance({4}, {2, 1, 1}), 4u);
}

}  // namespace
}  // namespace dbrouter
