// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

// Exercises the shared library through its C header, and the CLI built
// on top of it.

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <algorithm>

#include "dbrouter/dbrouter.h"
#include "json.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string src(const std::string& rel) { return (fs::path(DBROUTER_SOURCE_DIR) / rel).string(); }

std::string toy_config() {
  return json{{"env", false},
              {"overrides",
               {{"corpus", src("data/toy")},
                {"clusters", src("data/toy/clusters.json")},
                {"embedding", {{"kind", "deterministic-test"}, {"dim", 64}, {"seed", 7}}},
                {"llm", {{"client", "mock"}}}}}}
      .dump();
}

std::string take(char* s) {
  std::string out = s ? s : "";
  dbr_string_free(s);
  return out;
}

struct ScratchDir {
  fs::path path = fs::temp_directory_path() / ("dbrouter-capi-" + std::to_string(::getpid()));
  ScratchDir() { fs::create_directories(path); }
  ~ScratchDir() { fs::remove_all(path); }
};

TEST(CApi, StatusNamesAndVersion) {
  EXPECT_STREQ(dbr_status_name(DBR_OK), "ok");
  EXPECT_STREQ(dbr_status_name(DBR_NOT_FOUND), "not_found");
  EXPECT_NE(std::string(dbr_version()), "");
}

TEST(CApi, CorpusLifecycle) {
  dbr_corpus* c = nullptr;
  ASSERT_EQ(dbr_corpus_load(src("data/toy").c_str(), &c), DBR_OK);
  EXPECT_STREQ(dbr_last_error(), "");
  char* summary = nullptr;
  ASSERT_EQ(dbr_corpus_summary(c, &summary), DBR_OK);
  const auto j = json::parse(take(summary));
  EXPECT_EQ(j.at("databases"), 3);
  EXPECT_EQ(j.at("samples"), 12);

  char* ddl = nullptr;
  ASSERT_EQ(dbr_render_ddl(c, "pets_1", &ddl), DBR_OK);
  EXPECT_EQ(take(ddl).rfind("CREATE TABLE", 0), 0u);
  EXPECT_EQ(dbr_render_ddl(c, "nope", &ddl), DBR_NOT_FOUND);
  EXPECT_NE(std::string(dbr_last_error()).find("nope"), std::string::npos);
  dbr_corpus_free(c);
}

TEST(CApi, ArgumentErrors) {
  dbr_corpus* c = nullptr;
  EXPECT_EQ(dbr_corpus_load(nullptr, &c), DBR_INVALID_ARGUMENT);
  EXPECT_EQ(dbr_corpus_load("/nonexistent/dir", &c), DBR_IO);
  EXPECT_EQ(c, nullptr);
  dbr_router* r = nullptr;
  EXPECT_EQ(dbr_router_open("{not json", &r), DBR_PARSE);
  EXPECT_EQ(dbr_router_open(R"({"env": false, "overrides": {"bogus": 1}})", &r), DBR_INVALID_ARGUMENT);
}

TEST(CApi, RouteThroughRouter) {
  dbr_router* r = nullptr;
  ASSERT_EQ(dbr_router_open(toy_config().c_str(), &r), DBR_OK) << dbr_last_error();
  char* out = nullptr;
  ASSERT_EQ(dbr_router_route(r, "How many pets does each student have?", R"({"top_k": 2})", &out), DBR_OK);
  const auto j = json::parse(take(out));
  EXPECT_EQ(j.at("ranked").size(), 2u);
  EXPECT_EQ(dbr_router_route(r, "x", R"({"strategy": "nope"})", &out), DBR_INVALID_ARGUMENT);
  dbr_router_free(r);
}

TEST(CApi, IndexBuildInspectAndEvalAreDeterministic) {
  ScratchDir dir;
  const auto idx = (dir.path / "toy.idx").string();
  char* summary = nullptr;
  ASSERT_EQ(dbr_index_build(toy_config().c_str(), "{}", idx.c_str(), &summary), DBR_OK) << dbr_last_error();
  EXPECT_EQ(json::parse(take(summary)).at("databases"), 3);
  char* inspect = nullptr;
  ASSERT_EQ(dbr_index_inspect(idx.c_str(), &inspect), DBR_OK);
  EXPECT_EQ(json::parse(take(inspect)).at("dim"), 64);

  char *a = nullptr, *a_csv = nullptr, *b = nullptr, *b_csv = nullptr;
  ASSERT_EQ(dbr_eval(toy_config().c_str(), "{}", &a, &a_csv), DBR_OK) << dbr_last_error();
  ASSERT_EQ(dbr_eval(toy_config().c_str(), "{}", &b, &b_csv), DBR_OK);
  const auto ra = take(a);
  EXPECT_EQ(ra, take(b));
  EXPECT_EQ(take(a_csv), take(b_csv));
  EXPECT_EQ(json::parse(ra).at("reports").at(0).at("n"), 12);
}

TEST(CApi, SynthAndTrain) {
  dbr_corpus* c = nullptr;
  ASSERT_EQ(dbr_corpus_load(src("data/toy").c_str(), &c), DBR_OK);
  ScratchDir dir;
  const auto split = (dir.path / "split.json").string();
  const auto pairs = (dir.path / "pairs.jsonl").string();
  char* summary = nullptr;
  ASSERT_EQ(dbr_synth(c, "partitions", "{}", split.c_str(), &summary), DBR_OK) << dbr_last_error();
  take(summary);
  const auto opts = json{{"split", split}, {"kind", "schema"}, {"seed", 1}}.dump();
  ASSERT_EQ(dbr_synth(c, "pairs", opts.c_str(), pairs.c_str(), &summary), DBR_OK) << dbr_last_error();
  EXPECT_GT(json::parse(take(summary)).at("pairs").get<int>(), 0);
  EXPECT_EQ(dbr_synth(c, "no-such-command", "{}", pairs.c_str(), &summary), DBR_INVALID_ARGUMENT);
  dbr_corpus_free(c);

  const auto adapter = (dir.path / "a.bin").string();
  char* log = nullptr;
  ASSERT_EQ(dbr_train(toy_config().c_str(), pairs.c_str(), R"({"epochs": 2, "lr": 0.001, "seed": 3})",
                      adapter.c_str(), &log),
            DBR_OK)
      << dbr_last_error();
  const auto j = json::parse(take(log));
  EXPECT_EQ(j.at("epoch_mean_loss").size(), 2u);
  EXPECT_TRUE(fs::exists(adapter));
}

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(DBROUTER_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = ::popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = ::pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

TEST(Cli, HelpExitsZero) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("route"), std::string::npos);
}

TEST(Cli, RoutePrintsThreeLines) {
  const auto r = run("route --no-env --config " + src("data/toy/config.json") + " --question 'Which singers sang?'");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
  EXPECT_EQ(r.out.rfind("1\t", 0), 0u);
}

TEST(Cli, ErrorsAreReported) {
  const auto r = run("render --manifest /nonexistent --db x");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("error: code="), std::string::npos);
  EXPECT_NE(run("route --bogus-flag").code, 0);
}

}  // namespace
