// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

// Umbrella command line over the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dbrouter/dbrouter.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct CString {
  char* p = nullptr;
  ~CString() { dbr_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

// Thrown to unwind with the status of a failed C call.
struct Failure {
  dbr_status status;
  std::string message;
};

void check(dbr_status st) {
  if (st != DBR_OK) throw Failure{st, dbr_last_error()};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{DBR_IO, "cannot write " + path};
  out << text;
  if (!out) throw Failure{DBR_IO, "write failed for " + path};
}

// Engine flags shared by the commands that need an engine.
struct EngineFlags {
  std::string config;
  bool no_env = false;
  std::string corpus, index, adapter, clusters;
  std::string embed_kind, embed_url, embed_model, cache_dir;
  int embed_dim = 0;
  std::string llm_client, llm_replay, llm_url, llm_model;
  int shortlist = 0, tables = 0;
  std::string strategy;
  int k = 0;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON config file");
    app->add_flag("--no-env", no_env, "Ignore DBROUTER_* environment variables");
    app->add_option("--dataset,--corpus", corpus, "Corpus manifest directory");
    app->add_option("--index", index, "Index file (built in memory when omitted)");
    app->add_option("--adapter", adapter, "Adapter file");
    app->add_option("--clusters", clusters, "Cluster mapping JSON");
    app->add_option("--embed-kind", embed_kind, "remote | deterministic-test");
    app->add_option("--embed-url", embed_url, "Embedding endpoint base URL");
    app->add_option("--embed-model", embed_model, "Embedding model name");
    app->add_option("--embed-dim", embed_dim, "Dimension of the deterministic provider");
    app->add_option("--cache-dir", cache_dir, "Persistent embedding cache directory");
    app->add_option("--llm-client", llm_client, "auto | http | mock | replay | record");
    app->add_option("--llm-replay", llm_replay, "Record/replay fixture file");
    app->add_option("--llm-url", llm_url, "Chat completion endpoint base URL");
    app->add_option("--llm-model", llm_model, "Chat model name");
    app->add_option("--shortlist", shortlist, "Rerank shortlist size");
    app->add_option("--tables", tables, "Tables per rerank candidate");
  }

  std::string envelope() const {
    json o = json::object();
    auto put = [&o](const char* key, const std::string& v) {
      if (!v.empty()) o[key] = v;
    };
    put("corpus", corpus);
    put("index", index);
    put("adapter", adapter);
    put("clusters", clusters);
    put("strategy", strategy);
    if (k > 0) o["top_k"] = k;
    json e = json::object();
    if (!embed_kind.empty()) e["kind"] = embed_kind;
    if (!embed_url.empty()) {
      e["endpoint"] = embed_url;
      if (embed_kind.empty()) e["kind"] = "remote";
    }
    if (!embed_model.empty()) e["model"] = embed_model;
    if (!cache_dir.empty()) e["cache_dir"] = cache_dir;
    if (embed_dim > 0) e["dim"] = embed_dim;
    if (!e.empty()) o["embedding"] = e;
    json l = json::object();
    if (!llm_client.empty()) l["client"] = llm_client;
    if (!llm_replay.empty()) l["replay"] = llm_replay;
    if (!llm_url.empty()) l["endpoint"] = llm_url;
    if (!llm_model.empty()) l["model"] = llm_model;
    if (shortlist > 0) l["shortlist"] = shortlist;
    if (tables > 0) l["tables"] = tables;
    if (!l.empty()) o["llm"] = l;
    json env{{"env", !no_env}, {"overrides", o}};
    if (!config.empty()) env["file"] = config;
    return env.dump();
  }
};

std::string name_style(bool prettified) { return prettified ? "prettified" : "raw"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dbrouter: route natural-language questions to databases"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dbr_version()));

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate a manifest or convert a release into one");
  std::string manifest, from_spider, from_bird;
  ingest->add_option("--manifest", manifest, "Manifest directory")->required();
  auto* spider_opt = ingest->add_option("--from-spider", from_spider, "Spider release directory");
  ingest->add_option("--from-bird", from_bird, "BIRD release directory")->excludes(spider_opt);

  // render
  auto* render = app.add_subcommand("render", "Print the DDL of one database");
  std::string render_db;
  render->add_option("--manifest", manifest, "Manifest directory")->required();
  render->add_option("--db", render_db, "Database id")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "Generate splits, training pairs and evaluation subsets");
  synth->require_subcommand(1);
  std::string synth_out, split_file, policy = "all", clusters_file;
  std::uint64_t seed = 0;
  double in_fraction = 0.16;
  std::vector<std::size_t> sizes;
  std::size_t n_sets = 7, hard = 1, soft = 1;
  bool prettified = false;
  auto synth_common = [&](CLI::App* sub, bool needs_split) {
    sub->add_option("--manifest", manifest, "Manifest directory")->required();
    sub->add_option("--out", synth_out, "Output file")->required();
    sub->add_option("--seed", seed, "Random seed");
    if (needs_split) sub->add_option("--split", split_file, "Split file")->required();
  };
  auto* s_splits = synth->add_subcommand("splits", "Random in/cross-domain split");
  synth_common(s_splits, false);
  s_splits->add_option("--in-fraction", in_fraction, "Fraction of databases held in-domain");
  auto* s_parts = synth->add_subcommand("partitions", "Split file from the sample partitions");
  synth_common(s_parts, false);
  auto* s_schema = synth->add_subcommand("schema-pairs", "Question/schema pairs");
  synth_common(s_schema, true);
  s_schema->add_option("--policy", policy, "all | per-question:k | per-db-pair[:k]");
  s_schema->add_flag("--prettified", prettified, "Render database names in prettified form");
  auto* s_table = synth->add_subcommand("table-pairs", "Question/table pairs");
  synth_common(s_table, true);
  s_table->add_option("--policy", policy, "all | per-question:k");
  auto* s_stmt = synth->add_subcommand("statement-pairs", "Question/statement pairs");
  synth_common(s_stmt, true);
  s_stmt->add_option("--hard", hard, "Hard negatives per positive");
  s_stmt->add_option("--soft", soft, "Soft negatives per positive");
  auto* s_subsets = synth->add_subcommand("subsets", "Nested database subsets");
  synth_common(s_subsets, true);
  s_subsets->add_option("--sizes", sizes, "Subset sizes")->required();
  auto* s_csets = synth->add_subcommand("cluster-sets", "Cluster-matched in-domain database sets");
  synth_common(s_csets, true);
  s_csets->add_option("--clusters", clusters_file, "Cluster mapping JSON")->required();
  s_csets->add_option("--n-sets", n_sets, "Number of sets");

  // index
  auto* index = app.add_subcommand("index", "Build or inspect a repository index");
  index->require_subcommand(1);
  auto* i_build = index->add_subcommand("build", "Embed the corpus into an index file");
  EngineFlags build_flags;
  build_flags.attach(i_build);
  std::string index_out;
  bool no_whole = false, no_tables = false, no_statements = false;
  i_build->add_option("--out", index_out, "Index file")->required();
  i_build->add_flag("--no-whole-schema", no_whole, "Skip whole-schema vectors");
  i_build->add_flag("--no-tables", no_tables, "Skip table vectors");
  i_build->add_flag("--no-statements", no_statements, "Skip statement vectors");
  i_build->add_flag("--prettified", prettified, "Render database names in prettified form");
  auto* i_inspect = index->add_subcommand("inspect", "Print an index header");
  std::string inspect_path;
  i_inspect->add_option("index", inspect_path, "Index file")->required();

  // train
  auto* train = app.add_subcommand("train", "Train a linear adapter on pairs");
  EngineFlags train_flags;
  train_flags.attach(train);
  std::string pairs_path, adapter_out, mode = "distance-standard";
  int epochs = 2, batch = 16;
  double lr = 5e-6, margin = 0.5, init_sigma = 1e-4;
  train->add_option("--pairs", pairs_path, "Pair file")->required();
  train->add_option("--out", adapter_out, "Adapter file")->required();
  train->add_option("--epochs", epochs, "Epochs");
  train->add_option("--batch", batch, "Batch size");
  train->add_option("--lr", lr, "Learning rate");
  train->add_option("--margin", margin, "Contrastive margin");
  train->add_option("--mode", mode, "distance-standard | paper-literal");
  train->add_option("--seed", seed, "Random seed");
  train->add_option("--init-sigma", init_sigma, "Initial weight noise");

  // route
  auto* route = app.add_subcommand("route", "Rank databases for one question");
  EngineFlags route_flags;
  route_flags.attach(route);
  std::string question;
  route->add_option("--question", question, "Question text")->required();
  route->add_option("--strategy", route_flags.strategy, "whole-schema | pooled | pooled+metadata | llm-rerank");
  route->add_option("--k", route_flags.k, "Number of databases to print");
  bool route_json = false;
  route->add_flag("--json", route_json, "Print the full JSON response");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate routing over a question set");
  EngineFlags eval_flags;
  eval_flags.attach(eval);
  std::string eval_split = "all", scope = "split", report_out, csv_out, title;
  eval->add_option("--strategy", eval_flags.strategy, "Routing strategy");
  eval->add_option("--split", eval_split, "all | train | test_in | test_out");
  eval->add_option("--split-file", split_file, "Split file (defaults to sample partitions)");
  eval->add_option("--scope", scope, "split | all");
  eval->add_option("--report", report_out, "JSON report path (stdout when omitted)");
  eval->add_option("--csv", csv_out, "CSV report path");
  eval->add_option("--title", title, "Report title");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run an evaluation protocol");
  EngineFlags exp_flags;
  exp_flags.attach(exp);
  std::string protocol = "in-vs-cross";
  exp->add_option("--protocol", protocol,
                  "subset-scaling | cluster-matched-sampling | metadata-ablation | in-vs-cross");
  exp->add_option("--strategy", exp_flags.strategy, "Routing strategy");
  exp->add_option("--split-file", split_file, "Split file (defaults to sample partitions)");
  exp->add_option("--sizes", sizes, "Subset sizes for subset-scaling");
  exp->add_option("--n-sets", n_sets, "Sets for cluster-matched-sampling");
  exp->add_option("--seed", seed, "Random seed");
  exp->add_option("--report", report_out, "JSON report path (stdout when omitted)");
  exp->add_option("--csv", csv_out, "CSV report path");
  exp->add_option("--title", title, "Report title");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP routing service");
  EngineFlags serve_flags;
  serve_flags.attach(serve);
  std::string host;
  int port = -1;
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--strategy", serve_flags.strategy, "Default strategy");
  serve->add_option("--k", serve_flags.k, "Default top_k");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      CString summary;
      if (!from_spider.empty() || !from_bird.empty()) {
        const bool spider = !from_spider.empty();
        check(dbr_corpus_convert(spider ? "spider" : "bird", spider ? from_spider.c_str() : from_bird.c_str(),
                                 manifest.c_str(), &summary.p));
      } else {
        dbr_corpus* corpus = nullptr;
        check(dbr_corpus_load(manifest.c_str(), &corpus));
        std::unique_ptr<dbr_corpus, void (*)(dbr_corpus*)> guard(corpus, dbr_corpus_free);
        check(dbr_corpus_summary(corpus, &summary.p));
      }
      std::cout << summary.str() << "\n";
    } else if (*render) {
      dbr_corpus* corpus = nullptr;
      check(dbr_corpus_load(manifest.c_str(), &corpus));
      std::unique_ptr<dbr_corpus, void (*)(dbr_corpus*)> guard(corpus, dbr_corpus_free);
      CString ddl;
      check(dbr_render_ddl(corpus, render_db.c_str(), &ddl.p));
      std::cout << ddl.str() << "\n";
    } else if (*synth) {
      dbr_corpus* corpus = nullptr;
      check(dbr_corpus_load(manifest.c_str(), &corpus));
      std::unique_ptr<dbr_corpus, void (*)(dbr_corpus*)> guard(corpus, dbr_corpus_free);
      std::string command;
      json opts{{"seed", seed}};
      if (!split_file.empty()) opts["split"] = split_file;
      if (*s_splits) {
        command = "split";
        opts["in_fraction"] = in_fraction;
      } else if (*s_parts) {
        command = "partitions";
      } else if (*s_schema || *s_table || *s_stmt) {
        command = "pairs";
        opts["kind"] = *s_schema ? "schema" : (*s_table ? "table" : "statement");
        opts["negatives"] = policy;
        opts["hard"] = hard;
        opts["soft"] = soft;
        opts["name_style"] = name_style(prettified);
      } else if (*s_subsets) {
        command = "subsets";
        opts["sizes"] = sizes;
      } else {
        command = "cluster-sets";
        opts["clusters"] = clusters_file;
        opts["n_sets"] = n_sets;
      }
      CString summary;
      check(dbr_synth(corpus, command.c_str(), opts.dump().c_str(), synth_out.c_str(), &summary.p));
      std::cout << summary.str() << "\n";
    } else if (*i_build) {
      const json opts{{"whole_schema", !no_whole},
                      {"tables", !no_tables},
                      {"statements", !no_statements},
                      {"name_style", name_style(prettified)}};
      CString summary;
      check(dbr_index_build(build_flags.envelope().c_str(), opts.dump().c_str(), index_out.c_str(), &summary.p));
      std::cout << summary.str() << "\n";
    } else if (*i_inspect) {
      CString out;
      check(dbr_index_inspect(inspect_path.c_str(), &out.p));
      std::cout << out.str() << "\n";
    } else if (*train) {
      const json opts{{"epochs", epochs}, {"batch", batch},           {"lr", lr},
                      {"margin", margin}, {"mode", mode},             {"seed", seed},
                      {"init_sigma", init_sigma}};
      CString log;
      check(dbr_train(train_flags.envelope().c_str(), pairs_path.c_str(), opts.dump().c_str(), adapter_out.c_str(),
                      &log.p));
      std::cout << log.str() << "\n";
    } else if (*route) {
      dbr_router* router = nullptr;
      check(dbr_router_open(route_flags.envelope().c_str(), &router));
      std::unique_ptr<dbr_router, void (*)(dbr_router*)> guard(router, dbr_router_free);
      CString out;
      check(dbr_router_route(router, question.c_str(), "{}", &out.p));
      if (route_json) {
        std::cout << out.str() << "\n";
      } else {
        const auto j = json::parse(out.str());
        int rank = 1;
        for (const auto& e : j.at("ranked")) {
          std::printf("%d\t%s\t%.6f\n", rank++, e.at("db_id").get<std::string>().c_str(), e.at("score").get<double>());
        }
      }
    } else if (*eval || *exp) {
      CString report, csv;
      if (*eval) {
        json opts{{"split", eval_split}, {"scope", scope}};
        if (!split_file.empty()) opts["split_file"] = split_file;
        if (!title.empty()) opts["title"] = title;
        check(dbr_eval(eval_flags.envelope().c_str(), opts.dump().c_str(), &report.p, &csv.p));
      } else {
        json opts{{"protocol", protocol}, {"seed", seed}, {"n_sets", n_sets}};
        if (!sizes.empty()) opts["sizes"] = sizes;
        if (!split_file.empty()) opts["split_file"] = split_file;
        if (!title.empty()) opts["title"] = title;
        check(dbr_experiment(exp_flags.envelope().c_str(), opts.dump().c_str(), &report.p, &csv.p));
      }
      if (report_out.empty()) {
        std::cout << report.str();
      } else {
        write_text(report_out, report.str());
      }
      if (!csv_out.empty()) write_text(csv_out, csv.str());
    } else if (*serve) {
      json env = json::parse(serve_flags.envelope());
      if (!host.empty()) env["overrides"]["host"] = host;
      if (port >= 0) env["overrides"]["port"] = port;
      check(dbr_serve(env.dump().c_str()));
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: code=%s status=%d message=%s\n", dbr_status_name(f.status), static_cast<int>(f.status),
                 json(f.message).dump().c_str());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: code=internal status=%d message=%s\n", static_cast<int>(DBR_INTERNAL),
                 json(std::string(e.what())).dump().c_str());
    return 1;
  }
  return 0;
}
