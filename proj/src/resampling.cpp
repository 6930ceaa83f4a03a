// Copyright 2026 The saemabc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "saemabc/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "saemabc/errors.hpp"
#include "saemabc/simd.hpp"

namespace saemabc {

namespace {

void check_normalized(std::span<const double> w, const char* who) {
  if (w.empty()) throw ContractViolation(std::string(who) + ": empty weight vector");
  const double total = simd::sum(w);
  if (!(std::abs(total - 1.0) <= kNormalizationTolerance))
    throw ContractViolation(std::string(who) + ": weights are not normalized (sum = " + std::to_string(total) + ")");
}

}  // namespace

double ess(std::span<const double> normalized_weights) {
  check_normalized(normalized_weights, "ess");
  const double m = static_cast<double>(normalized_weights.size());
  return std::clamp(1.0 / simd::sum_squares(normalized_weights), 1.0, m);
}

std::vector<std::size_t> stratified_resample(std::span<const double> normalized_weights, Rng& rng) {
  check_normalized(normalized_weights, "stratified_resample");
  const std::size_t M = normalized_weights.size();
  const double inv_m = 1.0 / static_cast<double>(M);
  std::vector<std::size_t> out(M);
  std::size_t k = 0;
  double cumulative = normalized_weights[0];
  for (std::size_t m = 0; m < M; ++m) {
    const double u = (static_cast<double>(m) + rng.uniform()) * inv_m;
    while (u > cumulative && k + 1 < M) cumulative += normalized_weights[++k];
    // Rounding in the cumulative sum must not select a zero-weight tail.
    std::size_t pick = k;
    while (normalized_weights[pick] == 0.0 && pick > 0) --pick;
    out[m] = pick;
  }
  return out;
}

std::size_t sample_index(std::span<const double> normalized_weights, Rng& rng) {
  check_normalized(normalized_weights, "sample_index");
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t m = 0; m < normalized_weights.size(); ++m) {
    if (normalized_weights[m] > 0.0) last_positive = m;
    cumulative += normalized_weights[m];
    if (u <= cumulative && normalized_weights[m] > 0.0) return m;
  }
  return last_positive;
}

double normalize_log_weights(std::span<const double> log_weights, std::span<double> out) {
  if (out.size() != log_weights.size()) throw ContractViolation("normalize_log_weights: size mismatch");
  const double top = simd::max_value(log_weights);
  if (top == -std::numeric_limits<double>::infinity()) {
    std::fill(out.begin(), out.end(), 0.0);
    return top;
  }
  if (!std::isfinite(top)) throw ContractViolation("normalize_log_weights: non-finite log-weight");
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = std::exp(log_weights[m] - top);
  const double total = simd::sum(out);
  simd::scale_inplace(out, 1.0 / total);
  return top + std::log(total);
}

}  // namespace saemabc
