/* Copyright 2026 The dbrouter Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

/*
 * dbrouter C API.
 *
 * Every function returns a dbr_status. On failure, dbr_last_error() gives a
 * message for the calling thread. Strings returned through `char**` out
 * parameters are owned by the caller and must be released with
 * dbr_string_free(). Options and configuration travel as JSON text.
 *
 * Engine configuration envelope (`config_json`):
 *   {"file": "<optional config file>", "env": true, "overrides": {...}}
 * Layers apply in order: defaults, file, DBROUTER_* environment (when
 * "env" is true), overrides.
 */

#ifndef DBROUTER_DBROUTER_H_
#define DBROUTER_DBROUTER_H_

#if defined(DBROUTER_BUILDING_LIBRARY)
#define DBR_API __attribute__((visibility("default")))
#else
#define DBR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dbr_status {
  DBR_OK = 0,
  DBR_INVALID_ARGUMENT = 1,
  DBR_IO = 2,
  DBR_PARSE = 3,
  DBR_INTEGRITY = 4,
  DBR_TRANSPORT = 5,
  DBR_NUMERIC = 6,
  DBR_INFEASIBLE = 7,
  DBR_NOT_FOUND = 8,
  DBR_INTERNAL = 9
} dbr_status;

typedef struct dbr_corpus dbr_corpus;
typedef struct dbr_router dbr_router;

DBR_API const char* dbr_version(void);
DBR_API const char* dbr_status_name(dbr_status status);
/* Message of the last failed call on this thread; empty after success. */
DBR_API const char* dbr_last_error(void);
DBR_API void dbr_string_free(char* s);

/* Corpus manifests (databases.json + samples.json). */
DBR_API dbr_status dbr_corpus_load(const char* manifest_dir, dbr_corpus** out);
DBR_API void dbr_corpus_free(dbr_corpus* corpus);
DBR_API dbr_status dbr_corpus_summary(const dbr_corpus* corpus, char** out_json);
/* format: "spider" | "bird" | "manifest". Writes a manifest to out_dir. */
DBR_API dbr_status dbr_corpus_convert(const char* format, const char* source_dir, const char* out_dir,
                                      char** out_summary_json);
DBR_API dbr_status dbr_render_ddl(const dbr_corpus* corpus, const char* db_id, char** out_ddl);

/*
 * Dataset synthesis. command:
 *   "split"        {"in_fraction": 0.16, "seed": 0}            -> split file
 *   "partitions"   {}                                          -> split file from sample partitions
 *   "pairs"        {"split", "kind": schema|table|statement, "negatives", "seed",
 *                   "hard", "soft", "name_style": raw|prettified} -> JSONL pairs
 *   "subsets"      {"split", "sizes": [...], "seed"}          -> JSON DB sets
 *   "cluster-sets" {"split", "clusters", "n_sets", "seed"}    -> JSON DB sets
 */
DBR_API dbr_status dbr_synth(const dbr_corpus* corpus, const char* command, const char* options_json,
                             const char* out_path, char** out_summary_json);

/* options: {"whole_schema": bool, "tables": bool, "statements": bool, "name_style": raw|prettified} */
DBR_API dbr_status dbr_index_build(const char* config_json, const char* options_json, const char* out_path,
                                   char** out_summary_json);
DBR_API dbr_status dbr_index_inspect(const char* index_path, char** out_json);

/* options: {"epochs", "batch", "lr", "margin", "mode", "seed", "init_sigma"} */
DBR_API dbr_status dbr_train(const char* config_json, const char* pairs_path, const char* options_json,
                             const char* out_path, char** out_log_json);

DBR_API dbr_status dbr_router_open(const char* config_json, dbr_router** out);
DBR_API void dbr_router_free(dbr_router* router);
/* options: {"strategy", "top_k", "question_id"} */
DBR_API dbr_status dbr_router_route(dbr_router* router, const char* question, const char* options_json,
                                    char** out_json);

/* options: {"split": all|train|test_in|test_out, "split_file", "scope": split|all, "title"} */
DBR_API dbr_status dbr_eval(const char* config_json, const char* options_json, char** out_report_json,
                            char** out_report_csv);
/* options: {"protocol", "split_file", "sizes", "n_sets", "seed", "title"} */
DBR_API dbr_status dbr_experiment(const char* config_json, const char* options_json, char** out_json,
                                  char** out_csv);

/* Blocks until SIGINT/SIGTERM. */
DBR_API dbr_status dbr_serve(const char* config_json);

#ifdef __cplusplus
}
#endif

#endif /* DBROUTER_DBROUTER_H_ */
