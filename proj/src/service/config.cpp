// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "service/config.hpp"

#include <cstdlib>
#include <set>

#include "common/error.hpp"
#include "common/text.hpp"

namespace dbrouter {

void ServiceConfig::validate() const {
  if (top_k < 1) throw Error(ErrorCode::kInvalidArgument, "top_k must be >= 1");
  if (pool_k < 1 || statement_k < 1) throw Error(ErrorCode::kInvalidArgument, "pool_k and statement_k must be >= 1");
  if (max_concurrent < 1) throw Error(ErrorCode::kInvalidArgument, "max_concurrent must be >= 1");
  if (port < 0 || port > 65535) throw Error(ErrorCode::kInvalidArgument, "port out of range");
  if (rerank_base == Strategy::kLlmRerank) throw Error(ErrorCode::kInvalidArgument, "rerank_base must be an embedding strategy");
  static const std::set<std::string> clients{"auto", "http", "mock", "replay", "record"};
  if (!clients.contains(llm_client)) throw Error(ErrorCode::kInvalidArgument, "unknown llm client '" + llm_client + "'");
  if ((llm_client == "replay" || llm_client == "record") && llm_replay.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "llm client '" + llm_client + "' needs a replay file");
  }
  embedding.validate();
  llm.validate();
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  };
}

nlohmann::json config_to_json(const ServiceConfig& c) {
  const auto& e = c.embedding;
  const auto& l = c.llm;
  return {{"host", c.host},
          {"port", c.port},
          {"corpus", c.corpus},
          {"index", c.index},
          {"adapter", c.adapter},
          {"clusters", c.clusters},
          {"strategy", to_string(c.strategy)},
          {"rerank_base", to_string(c.rerank_base)},
          {"top_k", c.top_k},
          {"pool_k", c.pool_k},
          {"statement_k", c.statement_k},
          {"request_timeout_ms", c.request_timeout.count()},
          {"max_concurrent", c.max_concurrent},
          {"embedding",
           {{"kind", to_string(e.kind)},
            {"endpoint", e.endpoint},
            {"model", e.model},
            {"token_budget", e.token_budget},
            {"batch_size", e.batch_size},
            {"timeout_ms", e.timeout.count()},
            {"max_in_flight", e.max_in_flight},
            {"retries", e.retries},
            {"dim", e.dim},
            {"seed", e.seed},
            {"cache_dir", e.cache_dir}}},
          {"llm",
           {{"client", c.llm_client},
            {"replay", c.llm_replay},
            {"endpoint", l.endpoint},
            {"model", l.model},
            {"max_prompt_tokens", l.max_prompt_tokens},
            {"temperature", l.temperature},
            {"timeout_ms", l.timeout.count()},
            {"retries", l.retries},
            {"shortlist", l.shortlist},
            {"tables", l.tables}}}};
}

namespace {

// Rejects keys the defaults do not know, so typos fail loudly.
void check_keys(const nlohmann::json& doc, const nlohmann::json& schema, const std::string& where) {
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidArgument, "config " + where + " must be an object");
  for (const auto& [k, v] : doc.items()) {
    if (!schema.contains(k)) throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + where + k + "'");
    if (schema[k].is_object()) check_keys(v, schema[k], where + k + ".");
  }
}

}  // namespace

ServiceConfig config_from_json(const nlohmann::json& doc) {
  const auto defaults = config_to_json(ServiceConfig{});
  check_keys(doc, defaults, "");
  nlohmann::json j = defaults;
  j.merge_patch(doc);
  ServiceConfig c;
  try {
    c.host = j.at("host").get<std::string>();
    c.port = j.at("port").get<int>();
    c.corpus = j.at("corpus").get<std::string>();
    c.index = j.at("index").get<std::string>();
    c.adapter = j.at("adapter").get<std::string>();
    c.clusters = j.at("clusters").get<std::string>();
    c.strategy = parse_strategy(j.at("strategy").get<std::string>());
    c.rerank_base = parse_strategy(j.at("rerank_base").get<std::string>());
    c.top_k = j.at("top_k").get<std::size_t>();
    c.pool_k = j.at("pool_k").get<std::size_t>();
    c.statement_k = j.at("statement_k").get<std::size_t>();
    c.request_timeout = std::chrono::milliseconds(j.at("request_timeout_ms").get<long long>());
    c.max_concurrent = j.at("max_concurrent").get<std::size_t>();
    const auto& e = j.at("embedding");
    c.embedding.kind = parse_provider_kind(e.at("kind").get<std::string>());
    c.embedding.endpoint = e.at("endpoint").get<std::string>();
    c.embedding.model = e.at("model").get<std::string>();
    c.embedding.token_budget = e.at("token_budget").get<std::size_t>();
    c.embedding.batch_size = e.at("batch_size").get<std::size_t>();
    c.embedding.timeout = std::chrono::milliseconds(e.at("timeout_ms").get<long long>());
    c.embedding.max_in_flight = e.at("max_in_flight").get<std::size_t>();
    c.embedding.retries = e.at("retries").get<int>();
    c.embedding.dim = e.at("dim").get<std::size_t>();
    c.embedding.seed = e.at("seed").get<std::uint64_t>();
    c.embedding.cache_dir = e.at("cache_dir").get<std::string>();
    const auto& l = j.at("llm");
    c.llm_client = l.at("client").get<std::string>();
    c.llm_replay = l.at("replay").get<std::string>();
    c.llm.endpoint = l.at("endpoint").get<std::string>();
    c.llm.model = l.at("model").get<std::string>();
    c.llm.max_prompt_tokens = l.at("max_prompt_tokens").get<std::size_t>();
    c.llm.temperature = l.at("temperature").get<double>();
    c.llm.timeout = std::chrono::milliseconds(l.at("timeout_ms").get<long long>());
    c.llm.retries = l.at("retries").get<int>();
    c.llm.shortlist = l.at("shortlist").get<std::size_t>();
    c.llm.tables = l.at("tables").get<std::size_t>();
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad config value: ") + ex.what());
  }
  c.validate();
  return c;
}

namespace {

nlohmann::json env_layer(const EnvLookup& env) {
  nlohmann::json out = nlohmann::json::object();
  auto str = [&](const char* name, std::initializer_list<const char*> path) {
    auto v = env(name);
    if (!v) return;
    nlohmann::json* node = &out;
    std::vector<const char*> p(path);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) node = &(*node)[p[i]];
    (*node)[p.back()] = *v;
  };
  auto num = [&](const char* name, std::initializer_list<const char*> path) {
    auto v = env(name);
    if (!v) return;
    nlohmann::json* node = &out;
    std::vector<const char*> p(path);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) node = &(*node)[p[i]];
    try {
      (*node)[p.back()] = std::stoll(*v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must be an integer, got '" + *v + "'");
    }
  };
  str("DBROUTER_HOST", {"host"});
  num("DBROUTER_PORT", {"port"});
  str("DBROUTER_CORPUS", {"corpus"});
  str("DBROUTER_INDEX", {"index"});
  str("DBROUTER_ADAPTER", {"adapter"});
  str("DBROUTER_CLUSTERS", {"clusters"});
  str("DBROUTER_STRATEGY", {"strategy"});
  num("DBROUTER_TOP_K", {"top_k"});
  num("DBROUTER_MAX_CONCURRENT", {"max_concurrent"});
  if (env("DBROUTER_EMBED_URL")) out["embedding"]["kind"] = "remote";
  str("DBROUTER_EMBED_URL", {"embedding", "endpoint"});
  str("DBROUTER_EMBED_MODEL", {"embedding", "model"});
  str("DBROUTER_EMBED_KIND", {"embedding", "kind"});
  str("DBROUTER_CACHE_DIR", {"embedding", "cache_dir"});
  str("DBROUTER_LLM_URL", {"llm", "endpoint"});
  str("DBROUTER_LLM_MODEL", {"llm", "model"});
  str("DBROUTER_LLM_CLIENT", {"llm", "client"});
  return out;
}

}  // namespace

ServiceConfig load_config(const std::string& file, const EnvLookup& env, const nlohmann::json& overrides) {
  nlohmann::json doc = nlohmann::json::object();
  if (!file.empty()) {
    try {
      doc = nlohmann::json::parse(read_file(file));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, file + ": " + e.what());
    }
    check_keys(doc, config_to_json(ServiceConfig{}), "");
  }
  doc.merge_patch(env_layer(env));
  if (!overrides.is_null()) doc.merge_patch(overrides);
  return config_from_json(doc);
}

RankOptions Engine::rank_options() const {
  RankOptions o;
  o.strategy = cfg.strategy;
  o.top_k = cfg.top_k;
  o.pool_k = cfg.pool_k;
  o.statement_k = cfg.statement_k;
  return o;
}

namespace {

std::shared_ptr<const Reranker> make_reranker(const ServiceConfig& cfg) {
  std::string kind = cfg.llm_client;
  if (kind == "auto") kind = cfg.llm.endpoint.empty() ? "none" : "http";
  std::shared_ptr<ChatClient> client;
  if (kind == "none") return nullptr;
  if (kind == "http") client = make_http_chat_client(cfg.llm);
  if (kind == "mock") client = std::make_shared<MockChatClient>();
  if (kind == "replay") client = std::make_shared<ReplayChatClient>(std::filesystem::path(cfg.llm_replay));
  if (kind == "record") client = std::make_shared<RecordingChatClient>(make_http_chat_client(cfg.llm), cfg.llm_replay);
  return std::make_shared<Reranker>(std::move(client), cfg.llm);
}

}  // namespace

std::shared_ptr<Engine> load_engine(const ServiceConfig& cfg) {
  cfg.validate();
  if (cfg.corpus.empty()) throw Error(ErrorCode::kInvalidArgument, "no corpus configured (--corpus / DBROUTER_CORPUS)");
  auto e = std::make_shared<Engine>();
  e->cfg = cfg;
  e->corpus = std::make_shared<const Corpus>(ingest_corpus(cfg.corpus));
  e->embedder = std::make_shared<Embedder>(std::shared_ptr<EmbeddingProvider>(make_provider(cfg.embedding)), cfg.embedding);
  if (!cfg.adapter.empty()) e->adapter = load_adapter(cfg.adapter);
  if (cfg.index.empty()) {
    e->index = std::make_shared<const RepositoryIndex>(
        build_index(*e->corpus, *e->embedder, e->adapter ? &*e->adapter : nullptr, Granularity{}));
  } else {
    e->index = std::make_shared<const RepositoryIndex>(load_index(cfg.index));
  }
  e->router = std::make_shared<const Router>(e->corpus, e->index, e->embedder, e->adapter);
  e->reranker = make_reranker(cfg);
  if (!cfg.clusters.empty()) e->clusters = VerticalClusters::load(cfg.clusters);
  if (cfg.strategy == Strategy::kLlmRerank && !e->reranker) {
    throw Error(ErrorCode::kInvalidArgument, "llm-rerank strategy needs an LLM client (DBROUTER_LLM_URL or llm.client)");
  }
  return e;
}

std::shared_ptr<Engine> reload_index(const Engine& engine, const std::string& path) {
  auto e = std::make_shared<Engine>(engine);
  e->index = std::make_shared<const RepositoryIndex>(load_index(path));
  e->router = std::make_shared<const Router>(e->corpus, e->index, e->embedder, e->adapter);
  e->cfg.index = path;
  return e;
}

}  // namespace dbrouter
