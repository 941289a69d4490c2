// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "dbrouter/dbrouter.h"

#include <cstdlib>
#include <cstring>
#include <set>
#include <string>

#include "adapter/trainer.hpp"
#include "common/error.hpp"
#include "common/text.hpp"
#include "eval/experiment.hpp"
#include "json.hpp"
#include "schema/ddl.hpp"
#include "service/config.hpp"
#include "service/server.hpp"
#include "synth/pairs.hpp"
#include "synth/splits.hpp"
#include "synth/subsets.hpp"

struct dbr_corpus {
  dbrouter::Corpus corpus;
};

struct dbr_router {
  std::shared_ptr<dbrouter::Engine> engine;
};

namespace {

using dbrouter::Error;
using dbrouter::ErrorCode;
using nlohmann::json;

thread_local std::string g_last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
dbr_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return DBR_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<dbr_status>(static_cast<int>(e.code()));
  } catch (const json::exception& e) {
    g_last_error = std::string("invalid JSON: ") + e.what();
    return DBR_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DBR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DBR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must not be null");
}

json parse_options(const char* text) {
  if (text == nullptr || *text == '\0') return json::object();
  auto j = json::parse(text);
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "options must be a JSON object");
  return j;
}

dbrouter::ServiceConfig config_from_envelope(const char* config_json) {
  const json env = parse_options(config_json);
  const std::string file = env.value("file", std::string());
  const bool use_env = env.value("env", true);
  const json overrides = env.contains("overrides") ? env["overrides"] : json::object();
  auto lookup = use_env ? dbrouter::process_env()
                        : dbrouter::EnvLookup([](const std::string&) { return std::optional<std::string>(); });
  return dbrouter::load_config(file, lookup, overrides);
}

void set_out(char** out, const std::string& s) {
  if (out != nullptr) *out = dup(s);
}

json dataset_summary(const dbrouter::RoutingDataset& ds) {
  return {{"train", ds.train.size()},
          {"test_in", ds.test_in.size()},
          {"test_out", ds.test_out.size()},
          {"train_dbs", ds.train_dbs.size()},
          {"in_dbs", ds.in_dbs().size()},
          {"out_dbs", ds.out_dbs.size()},
          {"uncovered_dbs", ds.uncovered_dbs},
          {"heldout_text_overlap", ds.heldout_text_overlap}};
}

dbrouter::RoutingDataset dataset_for(const dbrouter::Corpus& corpus, const json& opts) {
  const std::string split_file = opts.value("split_file", opts.value("split", std::string()));
  if (!split_file.empty() && split_file != "all" && split_file != "train" && split_file != "test_in" &&
      split_file != "test_out") {
    return dbrouter::read_split_file(corpus, split_file);
  }
  return dbrouter::dataset_from_partitions(corpus);
}

}  // namespace

extern "C" {

const char* dbr_version(void) { return "0.1.0"; }

const char* dbr_status_name(dbr_status status) {
  if (status == DBR_OK) return "ok";
  return dbrouter::error_code_name(static_cast<ErrorCode>(static_cast<int>(status)));
}

const char* dbr_last_error(void) { return g_last_error.c_str(); }

void dbr_string_free(char* s) { std::free(s); }

dbr_status dbr_corpus_load(const char* manifest_dir, dbr_corpus** out) {
  return guarded([&] {
    require(manifest_dir, "manifest_dir");
    require(out, "out");
    *out = new dbr_corpus{dbrouter::ingest_corpus(manifest_dir)};
  });
}

void dbr_corpus_free(dbr_corpus* corpus) { delete corpus; }

dbr_status dbr_corpus_summary(const dbr_corpus* corpus, char** out_json) {
  return guarded([&] {
    require(corpus, "corpus");
    const auto& c = corpus->corpus;
    std::size_t tables = 0, statements = 0, train = 0, heldout = 0;
    for (const auto& db : c.databases()) {
      tables += db.tables.size();
      statements += db.metadata.size();
    }
    for (const auto& s : c.samples()) (s.partition == dbrouter::Partition::kTrain ? train : heldout)++;
    set_out(out_json, json{{"databases", c.databases().size()},
                           {"tables", tables},
                           {"statements", statements},
                           {"samples", c.samples().size()},
                           {"train_partition", train},
                           {"heldout_partition", heldout},
                           {"with_sql", c.sql_map().size()}}
                          .dump(2));
  });
}

dbr_status dbr_corpus_convert(const char* format, const char* source_dir, const char* out_dir,
                              char** out_summary_json) {
  return guarded([&] {
    require(format, "format");
    require(source_dir, "source_dir");
    require(out_dir, "out_dir");
    const std::string f = format;
    dbrouter::Corpus corpus;
    if (f == "spider") {
      corpus = dbrouter::convert_spider(source_dir);
    } else if (f == "bird") {
      corpus = dbrouter::convert_bird(source_dir);
    } else if (f == "manifest") {
      corpus = dbrouter::ingest_corpus(source_dir);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown corpus format '" + f + "'");
    }
    dbrouter::write_manifest(corpus, out_dir);
    set_out(out_summary_json,
            json{{"databases", corpus.databases().size()}, {"samples", corpus.samples().size()}, {"out", out_dir}}.dump(2));
  });
}

dbr_status dbr_render_ddl(const dbr_corpus* corpus, const char* db_id, char** out_ddl) {
  return guarded([&] {
    require(corpus, "corpus");
    require(db_id, "db_id");
    set_out(out_ddl, dbrouter::render_ddl(corpus->corpus.database(db_id)));
  });
}

dbr_status dbr_synth(const dbr_corpus* corpus, const char* command, const char* options_json, const char* out_path,
                     char** out_summary_json) {
  return guarded([&] {
    require(corpus, "corpus");
    require(command, "command");
    require(out_path, "out_path");
    const auto& c = corpus->corpus;
    const json opts = parse_options(options_json);
    const std::string cmd = command;
    const auto seed = opts.value("seed", std::uint64_t{0});

    if (cmd == "split" || cmd == "partitions") {
      const auto ds = cmd == "split" ? dbrouter::make_splits(c, opts.value("in_fraction", 0.16), seed)
                                     : dbrouter::dataset_from_partitions(c);
      dbrouter::write_split_file(ds, out_path);
      set_out(out_summary_json, dataset_summary(ds).dump(2));
      return;
    }

    if (!opts.contains("split")) throw Error(ErrorCode::kInvalidArgument, cmd + " needs a 'split' file");
    const auto ds = dbrouter::read_split_file(c, opts.at("split").get<std::string>());

    if (cmd == "pairs") {
      const auto kind = dbrouter::parse_pair_kind(opts.value("kind", std::string("schema")));
      dbrouter::PairSet set;
      const auto style = opts.value("name_style", std::string("raw")) == "prettified" ? dbrouter::DbNameStyle::kPrettified
                                                                                     : dbrouter::DbNameStyle::kRaw;
      switch (kind) {
        case dbrouter::PairKind::kSchema:
          set = dbrouter::gen_schema_pairs(ds, c, dbrouter::NegativePolicy::parse(opts.value("negatives", std::string("all"))),
                                           seed, style);
          break;
        case dbrouter::PairKind::kTable:
          set = dbrouter::gen_table_pairs(ds, c, dbrouter::NegativePolicy::parse(opts.value("negatives", std::string("all"))),
                                          seed);
          break;
        case dbrouter::PairKind::kStatement:
          set = dbrouter::gen_statement_pairs(ds, c, opts.value("hard", std::size_t{1}), opts.value("soft", std::size_t{1}),
                                              seed);
          break;
      }
      dbrouter::write_pairs(set.pairs, out_path);
      set_out(out_summary_json, json{{"pairs", set.pairs.size()},
                                     {"positives", set.positives},
                                     {"negatives", set.negatives},
                                     {"skipped_questions", set.skipped_questions},
                                     {"unresolved_tables", set.unresolved_tables}}
                                    .dump(2));
      return;
    }

    std::vector<std::vector<std::string>> sets;
    std::size_t profile_distance = 0;
    if (cmd == "subsets") {
      std::vector<std::string> pool = ds.in_dbs();
      pool.insert(pool.end(), ds.out_dbs.begin(), ds.out_dbs.end());
      const auto sizes = opts.at("sizes").get<std::vector<std::size_t>>();
      sets = dbrouter::sample_db_subsets(pool, sizes, seed);
    } else if (cmd == "cluster-sets") {
      const auto clusters = dbrouter::VerticalClusters::load(opts.at("clusters").get<std::string>());
      const auto profile = clusters.size_profile(ds.out_dbs);
      const auto n_sets = opts.value("n_sets", std::size_t{7});
      try {
        sets = dbrouter::sample_cluster_matched(ds.in_dbs(), clusters, profile, n_sets, seed);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kInfeasible) throw;
        auto closest = dbrouter::sample_cluster_closest(ds.in_dbs(), clusters, profile, n_sets, seed);
        profile_distance = closest.distance;
        sets = std::move(closest.sets);
      }
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown synth command '" + cmd + "'");
    }
    dbrouter::write_file(out_path, json(sets).dump(1) + "\n");
    json summary{{"sets", sets.size()}};
    if (cmd == "cluster-sets") summary["profile_distance"] = profile_distance;
    set_out(out_summary_json, summary.dump(2));
  });
}

dbr_status dbr_index_build(const char* config_json, const char* options_json, const char* out_path,
                           char** out_summary_json) {
  return guarded([&] {
    require(out_path, "out_path");
    auto cfg = config_from_envelope(config_json);
    const json opts = parse_options(options_json);
    if (cfg.corpus.empty()) throw Error(ErrorCode::kInvalidArgument, "no corpus configured");
    const auto corpus = dbrouter::ingest_corpus(cfg.corpus);
    dbrouter::Embedder embedder(std::shared_ptr<dbrouter::EmbeddingProvider>(dbrouter::make_provider(cfg.embedding)),
                                cfg.embedding);
    std::optional<dbrouter::LinearAdapter> adapter;
    if (!cfg.adapter.empty()) adapter = dbrouter::load_adapter(cfg.adapter);
    dbrouter::Granularity g;
    g.whole_schema = opts.value("whole_schema", true);
    g.tables = opts.value("tables", true);
    g.statements = opts.value("statements", true);
    const auto style = opts.value("name_style", std::string("raw")) == "prettified" ? dbrouter::DbNameStyle::kPrettified
                                                                                   : dbrouter::DbNameStyle::kRaw;
    const auto index = dbrouter::build_index(corpus, embedder, adapter ? &*adapter : nullptr, g, style);
    dbrouter::save_index(index, out_path);
    const auto st = embedder.stats();
    auto summary = json::parse(dbrouter::inspect_index(index));
    summary["truncated_texts"] = st.truncated;
    summary["provider_calls"] = st.provider_calls;
    set_out(out_summary_json, summary.dump(2));
  });
}

dbr_status dbr_index_inspect(const char* index_path, char** out_json) {
  return guarded([&] {
    require(index_path, "index_path");
    set_out(out_json, dbrouter::inspect_index(dbrouter::load_index(index_path)));
  });
}

dbr_status dbr_train(const char* config_json, const char* pairs_path, const char* options_json, const char* out_path,
                     char** out_log_json) {
  return guarded([&] {
    require(pairs_path, "pairs_path");
    require(out_path, "out_path");
    const auto cfg = config_from_envelope(config_json);
    const json opts = parse_options(options_json);
    dbrouter::TrainConfig tc;
    tc.epochs = opts.value("epochs", tc.epochs);
    tc.batch_size = opts.value("batch", tc.batch_size);
    tc.learning_rate = opts.value("lr", tc.learning_rate);
    tc.margin = opts.value("margin", tc.margin);
    tc.loss_mode = dbrouter::parse_loss_mode(opts.value("mode", std::string("distance-standard")));
    tc.seed = opts.value("seed", tc.seed);
    tc.init_sigma = opts.value("init_sigma", tc.init_sigma);
    const auto pairs = dbrouter::read_pairs(pairs_path);
    dbrouter::Embedder embedder(std::shared_ptr<dbrouter::EmbeddingProvider>(dbrouter::make_provider(cfg.embedding)),
                                cfg.embedding);
    const auto result = dbrouter::train_adapter(pairs, embedder, tc);
    dbrouter::save_adapter(result.adapter, out_path);
    std::set<std::string> kinds;
    for (const auto& p : pairs) kinds.insert(std::string(dbrouter::to_string(p.kind)));
    set_out(out_log_json, json{{"pairs", pairs.size()},
                               {"kinds", kinds},
                               {"epoch_mean_loss", result.log.epoch_mean_loss},
                               {"post_epoch_loss", result.log.post_epoch_loss},
                               {"selected_epoch", result.log.selected_epoch},
                               {"steps", result.log.steps},
                               {"digest", result.adapter.digest()}}
                              .dump(2));
  });
}

dbr_status dbr_router_open(const char* config_json, dbr_router** out) {
  return guarded([&] {
    require(out, "out");
    *out = new dbr_router{dbrouter::load_engine(config_from_envelope(config_json))};
  });
}

void dbr_router_free(dbr_router* router) { delete router; }

dbr_status dbr_router_route(dbr_router* router, const char* question, const char* options_json, char** out_json) {
  return guarded([&] {
    require(router, "router");
    require(question, "question");
    const json opts = parse_options(options_json);
    const auto& engine = *router->engine;
    auto rank = engine.rank_options();
    if (opts.contains("strategy")) rank.strategy = dbrouter::parse_strategy(opts["strategy"].get<std::string>());
    if (opts.contains("top_k")) rank.top_k = opts["top_k"].get<std::size_t>();
    const auto qid = opts.value("question_id", std::string("question"));
    const auto ranked = dbrouter::route_question(*engine.router, engine.reranker.get(), qid, question, rank,
                                                 engine.cfg.rerank_base);
    json entries = json::array();
    for (const auto& e : ranked.entries) {
      json item{{"db_id", e.db_id}, {"score", e.score}};
      if (!e.top_tables.empty()) item["top_tables"] = e.top_tables;
      entries.push_back(std::move(item));
    }
    set_out(out_json, json{{"question_id", qid}, {"strategy", dbrouter::to_string(ranked.strategy)}, {"ranked", entries}}
                          .dump(2));
  });
}

dbr_status dbr_eval(const char* config_json, const char* options_json, char** out_report_json, char** out_report_csv) {
  return guarded([&] {
    const auto engine = dbrouter::load_engine(config_from_envelope(config_json));
    const json opts = parse_options(options_json);
    const auto& corpus = *engine->corpus;
    const std::string split = opts.value("split", std::string("all"));
    const bool split_scope = opts.value("scope", std::string("split")) == "split";

    std::vector<const dbrouter::RoutingSample*> questions;
    std::vector<std::string> scope;
    if (split == "all") {
      for (const auto& s : corpus.samples()) questions.push_back(&s);
    } else {
      json dopts = opts;
      dopts.erase("split");
      const auto ds = dataset_for(corpus, dopts);
      const std::vector<std::string>* ids = nullptr;
      if (split == "train") ids = &ds.train;
      else if (split == "test_in") ids = &ds.test_in;
      else if (split == "test_out") ids = &ds.test_out;
      else throw Error(ErrorCode::kInvalidArgument, "unknown split '" + split + "'");
      for (const auto& id : *ids) questions.push_back(&corpus.sample(id));
      if (split_scope) scope = split == "test_out" ? ds.out_dbs : ds.in_dbs();
    }
    dbrouter::EvalOptions eo;
    eo.rank = engine->rank_options();
    eo.rank.scope = scope;
    eo.rerank_base = engine->cfg.rerank_base;
    eo.clusters = engine->clusters ? &*engine->clusters : nullptr;
    const auto report = dbrouter::evaluate(*engine->router, engine->reranker.get(), questions, eo);
    const std::vector<dbrouter::LabeledReport> cells{{split, report}};
    const std::size_t incidents = engine->reranker ? engine->reranker->incidents().size() : 0;
    set_out(out_report_json, dbrouter::report_json(opts.value("title", std::string("dbrouter eval")),
                                                   std::string(dbrouter::to_string(eo.rank.strategy)), cells, incidents));
    set_out(out_report_csv, dbrouter::report_csv(cells));
  });
}

dbr_status dbr_experiment(const char* config_json, const char* options_json, char** out_json, char** out_csv) {
  return guarded([&] {
    const auto engine = dbrouter::load_engine(config_from_envelope(config_json));
    const json opts = parse_options(options_json);
    dbrouter::ExperimentSpec spec;
    spec.protocol = dbrouter::parse_protocol(opts.value("protocol", std::string("in-vs-cross")));
    spec.seed = opts.value("seed", std::uint64_t{0});
    spec.sizes = opts.value("sizes", std::vector<std::size_t>{});
    spec.n_sets = opts.value("n_sets", std::size_t{7});
    spec.eval.rank = engine->rank_options();
    spec.eval.rerank_base = engine->cfg.rerank_base;
    spec.eval.clusters = engine->clusters ? &*engine->clusters : nullptr;
    const auto ds = dataset_for(*engine->corpus, opts);
    const auto result = dbrouter::run_experiment(spec, *engine->router, engine->reranker.get(), ds);
    const std::size_t incidents = engine->reranker ? engine->reranker->incidents().size() : 0;
    set_out(out_json, dbrouter::report_json(opts.value("title", std::string(dbrouter::to_string(spec.protocol))),
                                            std::string(dbrouter::to_string(spec.eval.rank.strategy)), result.cells,
                                            incidents));
    set_out(out_csv, dbrouter::report_csv(result.cells));
  });
}

dbr_status dbr_serve(const char* config_json) {
  return guarded([&] { dbrouter::serve(config_from_envelope(config_json)); });
}

}  // extern "C"
