// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "adapter/loss.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace dbrouter {

std::string_view to_string(LossMode mode) {
  return mode == LossMode::kDistanceStandard ? "distance-standard" : "paper-literal";
}

LossMode parse_loss_mode(std::string_view s) {
  if (s == "distance-standard") return LossMode::kDistanceStandard;
  if (s == "paper-literal") return LossMode::kPaperLiteral;
  throw Error(ErrorCode::kInvalidArgument, "unknown loss mode '" + std::string(s) + "'");
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kInvalidArgument, "cosine of vectors with different dims");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::kNumeric, "cosine with a zero vector");
  return a.dot(b) / (na * nb);
}

namespace {

void check_label(int label) {
  if (label != 0 && label != 1) throw Error(ErrorCode::kInvalidArgument, "label must be 0 or 1");
}

}  // namespace

double contrastive_loss_from_cos(double cos, int label, double margin, LossMode mode) {
  check_label(label);
  const double l = label;
  if (mode == LossMode::kDistanceStandard) {
    const double d = 1.0 - cos;
    const double hinge = std::max(0.0, margin - d);
    return 0.5 * (l * d * d + (1.0 - l) * hinge * hinge);
  }
  return 0.5 * (l * cos * cos + (1.0 - l) * std::max(0.0, margin - cos * cos));
}

double dloss_dcos(double cos, int label, double margin, LossMode mode) {
  check_label(label);
  const double l = label;
  if (mode == LossMode::kDistanceStandard) {
    const double d = 1.0 - cos;
    return -l * d + (1.0 - l) * std::max(0.0, margin - d);
  }
  return l * cos - (1.0 - l) * (margin > cos * cos ? cos : 0.0);
}

double contrastive_loss(const Eigen::VectorXd& zi, const Eigen::VectorXd& zj, int label, double margin,
                        LossMode mode) {
  return contrastive_loss_from_cos(cosine(zi, zj), label, margin, mode);
}

LossAndGradient loss_gradient(const Eigen::MatrixXd& w, const Eigen::VectorXd& ei, const Eigen::VectorXd& ej,
                              int label, double margin, LossMode mode) {
  if (w.cols() != ei.size() || w.cols() != ej.size()) {
    throw Error(ErrorCode::kInvalidArgument, "adapter input dim does not match embedding dim");
  }
  const Eigen::VectorXd zi = w * ei;
  const Eigen::VectorXd zj = w * ej;
  const double ni = zi.norm();
  const double nj = zj.norm();
  if (ni == 0.0 || nj == 0.0) throw Error(ErrorCode::kNumeric, "projected embedding is zero");
  const double c = zi.dot(zj) / (ni * nj);

  LossAndGradient out;
  out.loss = contrastive_loss_from_cos(c, label, margin, mode);
  const double g = dloss_dcos(c, label, margin, mode);
  // d cos / d z_i = z_j / (|z_i||z_j|) - cos z_i / |z_i|^2, symmetric for z_j.
  const Eigen::VectorXd gi = g * (zj / (ni * nj) - c * zi / (ni * ni));
  const Eigen::VectorXd gj = g * (zi / (ni * nj) - c * zj / (nj * nj));
  out.grad = gi * ei.transpose() + gj * ej.transpose();
  return out;
}

}  // namespace dbrouter
