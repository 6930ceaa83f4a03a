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

#include "saemabc/grid.hpp"

#include <cmath>

#include "saemabc/errors.hpp"

namespace saemabc {

TimeGrid::TimeGrid(double t0, double interval, std::size_t n, std::size_t substeps)
    : t0_(t0), interval_(interval), n_(n), substeps_(substeps) {
  if (!(interval > 0.0) || !std::isfinite(interval)) throw ContractViolation("TimeGrid: interval must be positive");
  if (n == 0) throw ContractViolation("TimeGrid: need at least one observation");
  if (substeps == 0) throw ContractViolation("TimeGrid: substeps per interval must be positive");
  if (!std::isfinite(t0)) throw ContractViolation("TimeGrid: t0 must be finite");
}

double TimeGrid::fine_time(std::size_t i) const {
  if (i > fine_steps()) throw ContractViolation("TimeGrid: fine index out of range");
  return t0_ + (static_cast<double>(i) * interval_) / static_cast<double>(substeps_);
}

double TimeGrid::sampling_time(std::size_t j) const {
  if (j == 0 || j > n_) throw ContractViolation("TimeGrid: sampling index out of range");
  return fine_time(fine_index(j));
}

std::vector<double> TimeGrid::fine_times() const {
  std::vector<double> out(fine_steps() + 1);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fine_time(i);
  return out;
}

std::vector<double> TimeGrid::sampling_times() const {
  std::vector<double> out(n_);
  for (std::size_t j = 1; j <= n_; ++j) out[j - 1] = sampling_time(j);
  return out;
}

}  // namespace saemabc
