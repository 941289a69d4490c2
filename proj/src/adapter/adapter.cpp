// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "adapter/adapter.hpp"

#include <cmath>
#include <cstring>

#include "common/digest.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "common/text.hpp"
#include "json.hpp"

namespace dbrouter {

namespace {

constexpr std::string_view kMagic = "DBRADP1\n";

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& s, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + i])) << (8 * i);
  return v;
}

std::string weight_bytes(const Eigen::MatrixXd& w) {
  std::string out;
  out.reserve(static_cast<std::size_t>(w.size()) * 4);
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      const float f = static_cast<float>(w(r, c));
      std::uint32_t bits;
      std::memcpy(&bits, &f, 4);
      put_u32(out, bits);
    }
  }
  return out;
}

}  // namespace

void LinearAdapter::validate() const {
  if (weight.rows() < 1 || weight.cols() < 1) throw Error(ErrorCode::kInvalidArgument, "adapter must have d_out, d_in >= 1");
  if (!(margin > 0.0)) throw Error(ErrorCode::kInvalidArgument, "adapter margin must be > 0");
  if (!weight.allFinite()) throw Error(ErrorCode::kNumeric, "adapter weight has non-finite entries");
}

std::string LinearAdapter::digest() const {
  std::string buf = std::to_string(d_out()) + "x" + std::to_string(d_in()) + ";m=" + nlohmann::json(margin).dump() +
                    ";mode=" + std::string(to_string(mode)) + ";";
  buf += weight_bytes(weight);
  return sha256_hex(buf);
}

void round_to_float(Eigen::MatrixXd& w) {
  w = w.unaryExpr([](double x) { return static_cast<double>(static_cast<float>(x)); });
}

LinearAdapter identity_adapter(std::size_t dim, std::uint64_t seed, double sigma, double margin, LossMode mode) {
  if (dim < 1) throw Error(ErrorCode::kInvalidArgument, "adapter dim must be >= 1");
  LinearAdapter a;
  a.weight = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  Rng rng(derive_seed(seed, fnv1a64("adapter-init")));
  for (Eigen::Index r = 0; r < a.weight.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.weight.cols(); ++c) a.weight(r, c) += sigma * rng.normal();
  }
  round_to_float(a.weight);
  a.margin = margin;
  a.mode = mode;
  a.seed = seed;
  a.validate();
  return a;
}

EmbeddingVector apply_adapter(const LinearAdapter& adapter, const EmbeddingVector& v) {
  if (v.dim() != adapter.d_in()) {
    throw Error(ErrorCode::kInvalidArgument, "adapter expects dim " + std::to_string(adapter.d_in()) + ", got " +
                                                 std::to_string(v.dim()));
  }
  Eigen::VectorXd e(static_cast<Eigen::Index>(v.dim()));
  bool any = false;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    e(static_cast<Eigen::Index>(i)) = v.values[i];
    any = any || v.values[i] != 0.0f;
  }
  if (!any) throw Error(ErrorCode::kNumeric, "cannot project a zero vector");
  const Eigen::VectorXd z = adapter.weight * e;
  return normalized(std::span<const double>(z.data(), static_cast<std::size_t>(z.size())));
}

void save_adapter(const LinearAdapter& adapter, const std::filesystem::path& path) {
  adapter.validate();
  const nlohmann::json header{{"d_in", adapter.d_in()},
                              {"d_out", adapter.d_out()},
                              {"margin", adapter.margin},
                              {"mode", to_string(adapter.mode)},
                              {"seed", adapter.seed},
                              {"digest", adapter.digest()}};
  const std::string h = header.dump();
  std::string out(kMagic);
  put_u32(out, static_cast<std::uint32_t>(h.size()));
  out += h;
  out += weight_bytes(adapter.weight);
  write_file(path.string(), out);
}

LinearAdapter load_adapter(const std::filesystem::path& path) {
  const std::string data = read_file(path.string());
  if (data.compare(0, kMagic.size(), kMagic) != 0) {
    throw Error(ErrorCode::kParse, path.string() + ": not an adapter file");
  }
  std::size_t off = kMagic.size();
  if (data.size() < off + 4) throw Error(ErrorCode::kParse, path.string() + ": truncated header");
  const std::uint32_t hlen = get_u32(data, off);
  off += 4;
  if (data.size() < off + hlen) throw Error(ErrorCode::kParse, path.string() + ": truncated header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(data.substr(off, hlen));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": bad adapter header: " + e.what());
  }
  off += hlen;

  LinearAdapter a;
  const auto rows = header.at("d_out").get<std::size_t>();
  const auto cols = header.at("d_in").get<std::size_t>();
  if (data.size() != off + rows * cols * 4) throw Error(ErrorCode::kIntegrity, path.string() + ": payload size mismatch");
  a.margin = header.at("margin").get<double>();
  a.mode = parse_loss_mode(header.at("mode").get<std::string>());
  a.seed = header.value("seed", std::uint64_t{0});
  a.weight.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::uint32_t bits = get_u32(data, off);
      off += 4;
      float f;
      std::memcpy(&f, &bits, 4);
      a.weight(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = f;
    }
  }
  a.validate();
  if (header.contains("digest") && header["digest"].get<std::string>() != a.digest()) {
    throw Error(ErrorCode::kIntegrity, path.string() + ": adapter digest mismatch");
  }
  return a;
}

}  // namespace dbrouter
