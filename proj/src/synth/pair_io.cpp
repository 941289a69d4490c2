// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include <fstream>

#include "common/error.hpp"
#include "json.hpp"
#include "synth/pairs.hpp"

namespace dbrouter {

void write_pairs(const std::vector<PairExample>& pairs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  for (const auto& p : pairs) {
    nlohmann::ordered_json j;
    j["id"] = p.id;
    j["side_a"] = p.side_a;
    j["side_b"] = p.side_b;
    j["label"] = p.label;
    j["kind"] = to_string(p.kind);
    if (p.negative_class) j["negative_class"] = to_string(*p.negative_class);
    out << j.dump() << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "short write to '" + path.string() + "'");
}

std::vector<PairExample> read_pairs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::vector<PairExample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      PairExample p;
      p.id = j.at("id").get<std::string>();
      p.side_a = j.at("side_a").get<std::string>();
      p.side_b = j.at("side_b").get<std::string>();
      p.label = j.at("label").get<int>();
      p.kind = parse_pair_kind(j.at("kind").get<std::string>());
      if (j.contains("negative_class") && !j.at("negative_class").is_null()) {
        p.negative_class = parse_negative_class(j.at("negative_class").get<std::string>());
      }
      if (p.label != 0 && p.label != 1) throw Error(ErrorCode::kParse, "label must be 0 or 1");
      if (p.side_a.empty() || p.side_b.empty()) throw Error(ErrorCode::kParse, "empty pair side");
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace dbrouter
