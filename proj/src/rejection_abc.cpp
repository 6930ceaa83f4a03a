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

#include "saemabc/rejection_abc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "saemabc/errors.hpp"

namespace saemabc {

RejectionResult rejection_abc_path(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                                   const ParameterVector& theta, double delta, const Distance& rho,
                                   const SummaryMap& eta, std::size_t max_attempts, Rng& rng) {
  if (max_attempts == 0) throw ContractViolation("rejection_abc_path: max_attempts must be at least 1");
  if (delta < 0.0 || std::isnan(delta)) throw std::domain_error("rejection_abc_path: delta must be non-negative");
  if (y.size() != grid.n()) throw ContractViolation("rejection_abc_path: observations do not match the grid");
  const Distance dist = rho ? rho : Distance(euclidean_distance);
  const std::vector<double> target = eta ? eta(y.values()) : y.values();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
    SimulatedData sim = simulate_dataset(model, grid, theta, rng);
    const auto& ys = sim.observations.values();
    const double d = eta ? dist(eta(ys), target) : dist(ys, target);
    if (d <= delta) return {std::move(sim.path), attempt, d};
    if (d < best) best = d;
  }
  throw AcceptanceFailure(max_attempts, best);
}

}  // namespace saemabc
