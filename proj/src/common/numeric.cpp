// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "common/numeric.hpp"

#include <cmath>
#include <vector>

#include "common/error.hpp"

namespace dbrouter {

namespace {

// Non-overlapping partials whose exact sum equals the sum of `values`.
std::vector<double> partials_of(std::span<const double> values) {
  std::vector<double> partials;
  for (double x : values) {
    std::size_t i = 0;
    for (double y : partials) {
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[i++] = lo;
      x = hi;
    }
    partials.resize(i);
    partials.push_back(x);
  }
  return partials;
}

double round_partials(const std::vector<double>& partials) {
  if (partials.empty()) return 0.0;
  std::size_t n = partials.size();
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  // Round half to even across the remaining partials.
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

}  // namespace

double exact_sum(std::span<const double> values) { return round_partials(partials_of(values)); }

double exact_mean(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "mean of an empty list");
  auto partials = partials_of(values);
  const double sum = round_partials(partials);
  partials.push_back(-sum);
  const double sum_error = round_partials(partials_of(partials));
  const double n = static_cast<double>(values.size());
  const double q = sum / n;
  const double remainder = std::fma(-q, n, sum);
  return q + (remainder + sum_error) / n;
}

}  // namespace dbrouter
