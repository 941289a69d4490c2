// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "eval/experiment.hpp"
#include "eval/metrics.hpp"
#include "eval/report.hpp"
#include "json.hpp"
#include "oracles/oracles.hpp"
#include "test_support.hpp"

namespace dbrouter {
namespace {

RankedList list_of(std::vector<std::string> ids) {
  RankedList l{"q", Strategy::kWholeSchema, {}};
  double s = 1.0;
  for (auto& id : ids) l.entries.push_back({std::move(id), s -= 0.01, {}});
  return l;
}

TEST(Metrics, WorkedExamples) {
  const auto l = list_of({"a", "b", "c", "d", "e"});
  EXPECT_EQ(average_precision(l, "b"), 0.5);
  EXPECT_EQ(average_precision(l, "zzz"), 0.0);
  EXPECT_EQ(recall_at_k(l, "c", 3), 1);
  EXPECT_EQ(recall_at_k(l, "d", 3), 0);

  VerticalClusters vc({{"a", "x"}, {"b", "y"}, {"c", "y"}, {"d", "z"}, {"e", "w"}});
  // First entry of gold's cluster at rank 2.
  EXPECT_EQ(across_vertical_rk_map(l, "c", vc, 3), std::make_pair(1, 0.5));
  // Singleton cluster, gold at rank 5.
  EXPECT_EQ(across_vertical_rk_map(l, "e", vc, 3), std::make_pair(0, 0.2));
  EXPECT_EQ(vertical_r1(l, "a", vc), std::make_pair(1, 1));
  EXPECT_EQ(vertical_r1(list_of({"b", "a", "c"}), "c", vc), std::make_pair(0, 1));
  EXPECT_EQ(vertical_r1(l, "d", vc), std::make_pair(1, 0));
}

// Every ordering of three databases, every gold, every clustering of the
// three into labelled groups.
TEST(Metrics, VerticalTruthTableIsExhaustive) {
  const std::vector<std::vector<std::string>> clusterings{
      {"x", "x", "x"}, {"x", "x", "y"}, {"x", "y", "x"}, {"y", "x", "x"}, {"x", "y", "z"}};
  std::size_t checked = 0;
  for (const auto& labels : clusterings) {
    std::map<std::string, std::string> cmap{{"a", labels[0]}, {"b", labels[1]}, {"c", labels[2]}};
    VerticalClusters vc(cmap);
    std::vector<std::string> order{"a", "b", "c"};
    do {
      for (const auto& gold : order) {
        const auto got = vertical_r1(list_of(order), gold, vc);
        const auto want = oracle::score(order, gold, cmap);
        EXPECT_EQ(got.first, want.within_r1);
        EXPECT_EQ(got.second, want.across_r1);
        EXPECT_FALSE(got.first == 0 && got.second == 0);
        ++checked;
      }
    } while (std::next_permutation(order.begin(), order.end()));
  }
  EXPECT_EQ(checked, 5u * 6u * 3u);
}

TEST(Metrics, AggregateMatchesOracle) {
  Rng rng(5);
  const std::vector<std::string> dbs{"d0", "d1", "d2", "d3", "d4", "d5"};
  std::map<std::string, std::string> cmap{{"d0", "c0"}, {"d1", "c0"}, {"d2", "c1"},
                                          {"d3", "c1"}, {"d4", "c2"}, {"d5", "c3"}};
  VerticalClusters vc(cmap);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<QuestionRow> rows;
    std::vector<std::size_t> ranks, across_ranks;
    std::size_t r1 = 0, r3 = 0, w1 = 0, a1 = 0, a3 = 0;
    const std::size_t n = 1 + rng.uniform(40);
    for (std::size_t i = 0; i < n; ++i) {
      auto order = dbs;
      rng.shuffle(order);
      const auto gold = dbs[rng.uniform(dbs.size())];
      rows.push_back(score_question(list_of(order), gold, &vc));
      const auto t = oracle::score(order, gold, cmap);
      ranks.push_back(t.rank);
      across_ranks.push_back(t.across_rank);
      r1 += t.r1;
      r3 += t.r3;
      w1 += t.within_r1;
      a1 += t.across_r1;
      a3 += t.across_r3;
    }
    const auto rep = aggregate(rows);
    ASSERT_EQ(rep.n, n);
    EXPECT_EQ(rep.overall.r1, oracle::mean_count_pct(r1, n));
    EXPECT_EQ(rep.overall.r3, oracle::mean_count_pct(r3, n));
    EXPECT_EQ(rep.overall.map, oracle::mean_reciprocal_pct(ranks, dbs.size()));
    ASSERT_TRUE(rep.within_r1 && rep.across);
    EXPECT_EQ(*rep.within_r1, oracle::mean_count_pct(w1, n));
    EXPECT_EQ(rep.across->r1, oracle::mean_count_pct(a1, n));
    EXPECT_EQ(rep.across->r3, oracle::mean_count_pct(a3, n));
    EXPECT_EQ(rep.across->map, oracle::mean_reciprocal_pct(across_ranks, dbs.size()));
  }
}

TEST(Metrics, HalfAndFull) {
  std::vector<QuestionRow> rows{score_question(list_of({"a", "b"}), "a", nullptr),
                                score_question(list_of({"a", "b"}), "b", nullptr)};
  auto rep = aggregate(rows);
  EXPECT_EQ(rep.overall.r1, 50.0);
  EXPECT_EQ(rep.overall.r3, 100.0);
  EXPECT_EQ(rep.overall.map, 75.0);
  EXPECT_FALSE(rep.within_r1.has_value());
  EXPECT_THROW(aggregate({}), Error);
}

TEST(Metrics, HandFixtureOfTenQuestions) {
  // Ranks 1,1,1,2,2,3,4,5,absent,1 over a 5-DB list.
  const std::vector<std::string> order{"a", "b", "c", "d", "e"};
  const std::vector<std::string> golds{"a", "a", "a", "b", "b", "c", "d", "e", "zz", "a"};
  std::vector<QuestionRow> rows;
  for (const auto& g : golds) rows.push_back(score_question(list_of(order), g, nullptr));
  const auto rep = aggregate(rows);
  EXPECT_EQ(rep.overall.r1, 40.0);
  EXPECT_EQ(rep.overall.r3, 70.0);
  // (4 + 1 + 1/3 + 1/4 + 1/5) / 10 = 347/600
  EXPECT_EQ(display2(rep.overall.map), 57.83);
  EXPECT_EQ(rep.overall.map, oracle::mean_reciprocal_pct({1, 1, 1, 2, 2, 3, 4, 5, 0, 1}, 5));
}

TEST(Metrics, Display) {
  EXPECT_EQ(display2(57.8333333), 57.83);
  EXPECT_EQ(display2(100.0), 100.0);
}

struct ToyEngine {
  std::shared_ptr<const Corpus> corpus =
      std::make_shared<const Corpus>(ingest_corpus(testing::source_path("data/toy")));
  std::shared_ptr<Embedder> embedder;
  std::unique_ptr<Router> router;
  VerticalClusters clusters = VerticalClusters::load(testing::source_path("data/toy/clusters.json"));

  ToyEngine() {
    ProviderConfig cfg;
    cfg.seed = 7;
    embedder = std::make_shared<Embedder>(std::shared_ptr<EmbeddingProvider>(make_provider(cfg)), cfg);
    auto idx = std::make_shared<const RepositoryIndex>(build_index(*corpus, *embedder, nullptr, Granularity{}));
    router = std::make_unique<Router>(corpus, idx, embedder);
  }

  std::vector<const RoutingSample*> questions() const {
    std::vector<const RoutingSample*> out;
    for (const auto& s : corpus->samples()) out.push_back(&s);
    return out;
  }

  RoutingDataset dataset() const {
    RoutingDataset d;
    d.train = {"toy-01", "toy-02", "toy-04", "toy-05", "toy-06", "toy-08"};
    d.test_in = {"toy-03", "toy-07"};
    d.test_out = {"toy-09", "toy-10", "toy-11", "toy-12"};
    d.train_dbs = {"concert_singer", "musical"};
    d.out_dbs = {"pets_1"};
    return d;
  }
};

TEST(Evaluate, ToyReportShape) {
  ToyEngine e;
  EvalOptions opts;
  opts.clusters = &e.clusters;
  const auto rep = evaluate(*e.router, nullptr, e.questions(), opts);
  EXPECT_EQ(rep.n, 12u);
  ASSERT_EQ(rep.rows.size(), 12u);
  EXPECT_TRUE(rep.within_r1.has_value());
  for (const auto& r : rep.rows) EXPECT_EQ(r.top.size(), 3u);

  const auto text = report_json("toy", "pooled-tables", {{"all", rep}});
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j.at("title"), "toy");
  EXPECT_EQ(j.at("reports").at(0).at("rows").size(), 12u);
  EXPECT_TRUE(j.at("reports").at(0).at("overall").contains("map"));
  EXPECT_EQ(text, report_json("toy", "pooled-tables", {{"all", evaluate(*e.router, nullptr, e.questions(), opts)}}));

  const auto csv = report_csv({{"a,b", rep}});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "label,n,r1,r3,map,wv_r1,av_r1,av_r3,av_map");
  EXPECT_NE(csv.find("\"a,b\",12,"), std::string::npos);
}

TEST(Evaluate, SingletonScopeSuppressesVertical) {
  ToyEngine e;
  EvalOptions opts;
  opts.clusters = &e.clusters;
  opts.rank.scope = {"pets_1", "musical"};
  std::vector<const RoutingSample*> qs{&e.corpus->sample("toy-09"), &e.corpus->sample("toy-05")};
  const auto rep = evaluate(*e.router, nullptr, qs, opts);
  EXPECT_FALSE(rep.within_r1.has_value());
  EXPECT_FALSE(rep.across.has_value());
  EXPECT_THROW(evaluate(*e.router, nullptr, {}, opts), Error);
}

TEST(Evaluate, RerankedWithMockMatchesEmbeddingOrder) {
  ToyEngine e;
  Reranker r(std::make_shared<MockChatClient>(), LlmConfig{});
  EvalOptions base, rr;
  rr.rank.strategy = Strategy::kLlmRerank;
  const auto a = evaluate(*e.router, nullptr, e.questions(), base);
  const auto b = evaluate(*e.router, &r, e.questions(), rr);
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].top, b.rows[i].top);
}

TEST(Experiment, Protocols) {
  ToyEngine e;
  ExperimentSpec spec;
  spec.eval.clusters = &e.clusters;
  spec.protocol = Protocol::kInVsCross;
  auto res = run_experiment(spec, *e.router, nullptr, e.dataset());
  ASSERT_EQ(res.cells.size(), 2u);
  EXPECT_EQ(res.cells[0].label, "in-domain");
  EXPECT_EQ(res.cells[0].report.n, 2u);
  EXPECT_EQ(res.cells[1].report.n, 4u);

  spec.protocol = Protocol::kMetadataAblation;
  res = run_experiment(spec, *e.router, nullptr, e.dataset());
  ASSERT_EQ(res.cells.size(), 2u);
  EXPECT_EQ(res.cells[1].label, "without metadata");

  spec.protocol = Protocol::kSubsetScaling;
  spec.sizes = {3, 2};
  res = run_experiment(spec, *e.router, nullptr, e.dataset());
  ASSERT_FALSE(res.cells.empty());
  EXPECT_EQ(res.cells[0].label, "3 DB");
  spec.sizes.clear();
  EXPECT_THROW(run_experiment(spec, *e.router, nullptr, e.dataset()), Error);
  EXPECT_EQ(parse_protocol("cluster-matched-sampling"), Protocol::kClusterMatchedSampling);
}

TEST(Experiment, AverageOfReports) {
  MetricsReport a, b;
  a.n = 2;
  a.overall = {50.0, 100.0, 75.0};
  b.n = 4;
  b.overall = {100.0, 100.0, 100.0};
  const auto m = average_reports({a, b});
  EXPECT_EQ(m.n, 6u);
  EXPECT_EQ(m.overall.r1, 75.0);
  EXPECT_EQ(m.overall.map, 87.5);
}

}  // namespace
}  // namespace dbrouter
