// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "common/text.hpp"
#include "embedding/embedder.hpp"
#include "retrieval/index.hpp"
#include "retrieval/router.hpp"
#include "retrieval/scoring.hpp"
#include "oracles/oracles.hpp"
#include "test_support.hpp"

namespace dbrouter {
namespace {

using testing::col;

TEST(Pooling, MatchesOracleOnRandomLists) {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.uniform(12);
    std::vector<double> sims(n);
    for (auto& s : sims) s = 2.0 * rng.uniform_real() - 1.0;
    const std::size_t k = 1 + rng.uniform(5);
    const double want = oracle::mean_of_top(sims, k);
    const double got = mean_top_k(sims, k).score;
    EXPECT_LE(std::abs(got - want), 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST(Pooling, WorkedExamples) {
  const std::vector<double> sims{0.9, 0.7, 0.5, 0.1};
  const auto p = mean_top_k(sims, 3);
  EXPECT_EQ(p.score, 0.7);
  EXPECT_EQ(p.contributors, (std::vector<std::size_t>{0, 1, 2}));
  const std::vector<double> two{0.4, 0.2};
  EXPECT_DOUBLE_EQ(mean_top_k(two, 3).score, 0.3);
  EXPECT_THROW(mean_top_k(std::vector<double>{}, 3), Error);
}

TEST(Pooling, TopKTiesKeepIndexOrder) {
  const std::vector<double> v{0.5, 0.9, 0.5, 0.9, 0.1};
  EXPECT_EQ(top_k_indices(v, 3), (std::vector<std::size_t>{1, 3, 0}));
  EXPECT_EQ(top_k_indices(v, 10).size(), 5u);
}

TEST(Ranking, TiesBreakByDbId) {
  std::vector<RankedEntry> e{{"zoo", 0.5, {}}, {"alpha", 0.5, {}}, {"mid", 0.7, {}}};
  sort_entries(e);
  EXPECT_EQ(e[0].db_id, "mid");
  EXPECT_EQ(e[1].db_id, "alpha");
  EXPECT_EQ(e[2].db_id, "zoo");
  RankedList l{"q", Strategy::kWholeSchema, e};
  EXPECT_EQ(l.rank_of("zoo"), 3u);
  EXPECT_EQ(l.rank_of("none"), 0u);
}

TEST(Ranking, StrategyNames) {
  EXPECT_EQ(parse_strategy("pooled+metadata"), Strategy::kPooledTablesMetadata);
  EXPECT_EQ(parse_strategy(to_string(Strategy::kLlmRerank)), Strategy::kLlmRerank);
  EXPECT_THROW(parse_strategy("bm25"), Error);
}

DatabaseSchema three_tables(const std::string& id, const std::string& prefix) {
  DatabaseSchema db{id, {}, {}, std::nullopt};
  for (const char* t : {"alpha", "beta", "gamma"}) {
    db.tables.push_back({prefix + " " + t, {col(std::string(t) + " id", DataType::integer(), true),
                                            col("label", DataType::text())}, {}});
  }
  db.metadata.push_back({id + "-m1", prefix + " rows describe " + prefix + " things"});
  return db;
}

std::shared_ptr<Embedder> test_embedder(std::size_t dim = 32) {
  ProviderConfig cfg;
  cfg.dim = dim;
  cfg.seed = 3;
  return std::make_shared<Embedder>(std::shared_ptr<EmbeddingProvider>(make_provider(cfg)), cfg);
}

Corpus two_db_corpus() {
  return Corpus({three_tables("ocean", "ship"), three_tables("farm", "cow")},
                {{"q1", "how many ships sail", "ocean", std::nullopt, Partition::kTrain}});
}

TEST(Index, ShapesFollowGranularity) {
  const auto corpus = two_db_corpus();
  auto emb = test_embedder();
  const auto idx = build_index(corpus, *emb, nullptr, Granularity{});
  ASSERT_EQ(idx.databases().size(), 2u);
  std::size_t tables = 0;
  for (const auto& db : idx.databases()) {
    tables += db.tables.size();
    EXPECT_TRUE(db.whole.has_value());
    EXPECT_EQ(db.statements.size(), 1u);
  }
  EXPECT_EQ(tables, 6u);
  EXPECT_EQ(idx.database_ids(), (std::vector<std::string>{"farm", "ocean"}));
  EXPECT_EQ(idx.header().dim, 32u);

  const auto only_tables = build_index(corpus, *emb, nullptr, Granularity{false, true, false});
  EXPECT_FALSE(only_tables.databases()[0].whole.has_value());
  EXPECT_TRUE(only_tables.databases()[0].statements.empty());
  EXPECT_THROW(only_tables.at("nowhere"), Error);
}

TEST(Index, RebuildIsByteIdentical) {
  const auto corpus = two_db_corpus();
  testing::TempDir dir;
  save_index(build_index(corpus, *test_embedder(), nullptr, Granularity{}), dir / "a.idx");
  save_index(build_index(corpus, *test_embedder(), nullptr, Granularity{}), dir / "b.idx");
  EXPECT_EQ(read_file((dir / "a.idx").string()), read_file((dir / "b.idx").string()));
}

TEST(Index, SaveLoadRoundTrip) {
  const auto corpus = two_db_corpus();
  const auto idx = build_index(corpus, *test_embedder(), nullptr, Granularity{}, DbNameStyle::kPrettified);
  testing::TempDir dir;
  save_index(idx, dir / "x.idx");
  const auto back = load_index(dir / "x.idx");
  EXPECT_EQ(back.header().provider, idx.header().provider);
  EXPECT_EQ(back.header().name_style, DbNameStyle::kPrettified);
  ASSERT_EQ(back.databases().size(), idx.databases().size());
  for (std::size_t i = 0; i < idx.databases().size(); ++i) {
    EXPECT_EQ(back.databases()[i].tables, idx.databases()[i].tables);
    EXPECT_EQ(back.databases()[i].table_names, idx.databases()[i].table_names);
    EXPECT_EQ(back.databases()[i].whole, idx.databases()[i].whole);
    EXPECT_EQ(back.databases()[i].statement_ids, idx.databases()[i].statement_ids);
  }
  auto bytes = read_file((dir / "x.idx").string());
  write_file((dir / "t.idx").string(), bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(load_index(dir / "t.idx"), Error);
}

TEST(Index, AdapterDigestRecorded) {
  const auto corpus = two_db_corpus();
  const auto adapter = identity_adapter(32, 1);
  const auto idx = build_index(corpus, *test_embedder(), &adapter, Granularity{});
  EXPECT_EQ(idx.header().adapter_digest, adapter.digest());
}

struct ToyFixture {
  std::shared_ptr<const Corpus> corpus;
  std::shared_ptr<Embedder> embedder;
  std::shared_ptr<const RepositoryIndex> index;
  std::unique_ptr<Router> router;

  ToyFixture() {
    corpus = std::make_shared<const Corpus>(ingest_corpus(testing::source_path("data/toy")));
    embedder = test_embedder(64);
    index = std::make_shared<const RepositoryIndex>(build_index(*corpus, *embedder, nullptr, Granularity{}));
    router = std::make_unique<Router>(corpus, index, embedder);
  }
};

TEST(Router, StatementRetrievalMatchesBruteForce) {
  ToyFixture f;
  const auto& db = f.index->at("concert_singer");
  const auto q = f.router->embed_query("Which singers performed in stadium concerts?");
  std::vector<std::pair<double, std::string>> brute;
  for (std::size_t i = 0; i < db.statements.size(); ++i) {
    brute.emplace_back(oracle::cosine(q.values, db.statements[i]), db.statement_ids[i]);
  }
  std::stable_sort(brute.begin(), brute.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  const auto got = f.router->retrieve_statements(q, "concert_singer", 5);
  ASSERT_EQ(got.size(), brute.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].statement_id, brute[i].second);
    EXPECT_NEAR(got[i].score, brute[i].first, 1e-12);
  }
}

TEST(Router, QueryEqualToStatementScoresOne) {
  ToyFixture f;
  const auto& db = f.index->at("pets_1");
  ASSERT_FALSE(db.statements.empty());
  EmbeddingVector q{db.statements[0], true};
  const auto got = f.router->retrieve_statements(q, "pets_1", 1);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].statement_id, db.statement_ids[0]);
  EXPECT_NEAR(got[0].score, 1.0, 1e-7);
}

TEST(Router, PooledRankingMatchesExhaustiveScoring) {
  ToyFixture f;
  for (const auto& s : f.corpus->samples()) {
    const auto q = f.router->embed_query(s.text);
    std::vector<std::pair<double, std::string>> want;
    for (const auto& db : f.index->databases()) {
      std::vector<double> sims;
      for (const auto& t : db.tables) sims.push_back(oracle::cosine(q.values, t));
      want.emplace_back(oracle::mean_of_top(sims, 3), db.db_id);
    }
    std::sort(want.begin(), want.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    RankOptions opts;
    const auto got = f.router->rank_databases(s.question_id, s.text, opts);
    ASSERT_EQ(got.entries.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_EQ(got.entries[i].db_id, want[i].second) << s.question_id;
      EXPECT_NEAR(got.entries[i].score, want[i].first, 1e-12);
    }
  }
}

TEST(Router, WholeSchemaAndScopes) {
  ToyFixture f;
  RankOptions opts;
  opts.strategy = Strategy::kWholeSchema;
  opts.top_k = 2;
  const auto l = f.router->rank_databases("x", "How many pets does each student have?", opts);
  EXPECT_EQ(l.entries.size(), 2u);
  EXPECT_TRUE(l.entries[0].top_tables.empty());
  opts.scope = {"musical"};
  opts.top_k = 0;
  const auto one = f.router->rank_databases("x", "anything", opts);
  ASSERT_EQ(one.entries.size(), 1u);
  EXPECT_EQ(one.entries[0].db_id, "musical");
  opts.scope = {"missing"};
  EXPECT_THROW(f.router->rank_databases("x", "anything", opts), Error);
}

TEST(Router, MetadataStrategyRuns) {
  ToyFixture f;
  RankOptions opts;
  opts.strategy = Strategy::kPooledTablesMetadata;
  const auto l = f.router->rank_databases("x", "Which concerts were held in 2014?", opts);
  EXPECT_EQ(l.entries.size(), 3u);
  EXPECT_FALSE(l.entries[0].top_tables.empty());
}

TEST(Router, SingleDatabaseRepository) {
  auto corpus = std::make_shared<const Corpus>(Corpus({three_tables("solo", "desk")}, {}));
  auto emb = test_embedder();
  auto idx = std::make_shared<const RepositoryIndex>(build_index(*corpus, *emb, nullptr, Granularity{}));
  Router r(corpus, idx, emb);
  const auto l = r.rank_databases("q", "desks", RankOptions{});
  ASSERT_EQ(l.entries.size(), 1u);
  EXPECT_EQ(l.rank_of("solo"), 1u);
}

TEST(Router, ProviderMismatchRejected) {
  ToyFixture f;
  ProviderConfig other;
  other.dim = 64;
  other.seed = 99;
  auto emb = std::make_shared<Embedder>(std::shared_ptr<EmbeddingProvider>(make_provider(other)), other);
  EXPECT_THROW(Router(f.corpus, f.index, emb), Error);
  EXPECT_THROW(Router(f.corpus, f.index, f.embedder, identity_adapter(64, 1)), Error);
}

}  // namespace
}  // namespace dbrouter
