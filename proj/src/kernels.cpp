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

#include "saemabc/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "saemabc/errors.hpp"
#include "saemabc/simd.hpp"

namespace saemabc {

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractViolation("euclidean_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0)) throw std::domain_error("ABC threshold delta must be positive");
}

double uniform_distance(const KernelSpec& spec, std::span<const double> y, std::span<const double> y_star) {
  const Distance& rho = spec.distance ? spec.distance : Distance(euclidean_distance);
  if (spec.summary) {
    const auto sy = spec.summary(y);
    const auto ss = spec.summary(y_star);
    return rho(ss, sy);
  }
  return rho(y_star, y);
}

}  // namespace

double kernel_log_weight(const KernelSpec& spec, std::span<const double> y, std::span<const double> y_star,
                         double delta) {
  check_delta(delta);
  if (y.size() != y_star.size()) throw ContractViolation("kernel_log_weight: dimension mismatch");
  if (spec.kind == KernelKind::gaussian) {
    double sq = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) sq += (y_star[i] - y[i]) * (y_star[i] - y[i]);
    return -static_cast<double>(y.size()) * std::log(delta) - sq / (2.0 * delta * delta);
  }
  return uniform_distance(spec, y, y_star) <= delta ? 0.0 : -std::numeric_limits<double>::infinity();
}

void kernel_log_weights(const KernelSpec& spec, double y, std::span<const double> y_star, double delta,
                        std::span<double> out) {
  check_delta(delta);
  if (out.size() != y_star.size()) throw ContractViolation("kernel_log_weights: output size mismatch");
  if (spec.kind == KernelKind::gaussian) {
    simd::gaussian_log_kernel(y_star, y, 1.0 / (2.0 * delta * delta), -std::log(delta), out);
    return;
  }
  const double yy[1] = {y};
  for (std::size_t m = 0; m < y_star.size(); ++m) out[m] = kernel_log_weight(spec, yy, y_star.subspan(m, 1), delta);
}

ThresholdSchedule::ThresholdSchedule(std::vector<ThresholdLevel> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw ContractViolation("ThresholdSchedule: at least one level is required");
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    const auto& lv = levels_[l];
    if (!(lv.delta > 0.0) || !std::isfinite(lv.delta))
      throw ContractViolation("ThresholdSchedule: level " + std::to_string(l + 1) + " has non-positive delta");
    if (lv.iterations == 0)
      throw ContractViolation("ThresholdSchedule: level " + std::to_string(l + 1) + " has zero iterations");
    if (l > 0 && !(lv.delta < levels_[l - 1].delta))
      throw ContractViolation("ThresholdSchedule: deltas must be strictly decreasing");
    total_ += lv.iterations;
  }
}

double ThresholdSchedule::delta_at(std::size_t k) const {
  if (k == 0 || k > total_)
    throw ContractViolation("ThresholdSchedule: iteration " + std::to_string(k) + " outside [1, " +
                            std::to_string(total_) + "]");
  std::size_t upper = 0;
  for (const auto& lv : levels_) {
    upper += lv.iterations;
    if (k <= upper) return lv.delta;
  }
  return levels_.back().delta;
}

}  // namespace saemabc
