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

#include "saemabc/model.hpp"

#include <cmath>
#include <limits>

#include "saemabc/errors.hpp"

namespace saemabc {

LatentPath::LatentPath(std::size_t dim, std::size_t substeps, std::vector<double> x0, std::vector<double> values)
    : dim_(dim), substeps_(substeps), x0_(std::move(x0)), values_(std::move(values)) {
  if (dim_ == 0) throw ContractViolation("LatentPath: state dimension must be positive");
  if (substeps_ == 0) throw ContractViolation("LatentPath: substeps must be positive");
  if (x0_.size() != dim_) throw ContractViolation("LatentPath: initial state has wrong dimension");
  if (values_.size() % dim_ != 0) throw ContractViolation("LatentPath: values not a multiple of the dimension");
  if (fine_steps() % substeps_ != 0) throw ContractViolation("LatentPath: length not a multiple of substeps");
}

std::span<const double> LatentPath::state(std::size_t i) const {
  if (i == 0) return x0_;
  if (i > fine_steps()) throw ContractViolation("LatentPath: fine index out of range");
  return std::span<const double>(values_).subspan((i - 1) * dim_, dim_);
}

std::vector<double> LatentPath::sampled_values() const {
  std::vector<double> out;
  out.reserve(observations() * dim_);
  for (std::size_t j = 1; j <= observations(); ++j) {
    auto s = at_sample(j);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

ObservationSeries::ObservationSeries(std::size_t dim, std::vector<double> values)
    : dim_(dim), values_(std::move(values)) {
  if (dim_ == 0) throw ContractViolation("ObservationSeries: dimension must be positive");
  if (values_.size() % dim_ != 0) throw ContractViolation("ObservationSeries: values not a multiple of the dimension");
}

std::span<const double> ObservationSeries::at(std::size_t j) const {
  if (j == 0 || j > size()) throw ContractViolation("ObservationSeries: index out of range");
  return std::span<const double>(values_).subspan((j - 1) * dim_, dim_);
}

void StateSpaceModel::simulate_interval(std::span<const double> x_prev, std::span<const double> times,
                                        const ParameterVector& theta, Rng& rng, std::span<double> out) const {
  const std::size_t d = state_dim();
  const std::size_t steps = times.size() - 1;
  std::span<const double> prev = x_prev;
  for (std::size_t r = 0; r < steps; ++r) {
    auto next = out.subspan(r * d, d);
    simulate_transition(prev, next, times[r], times[r + 1], theta, rng);
    prev = next;
  }
}

double StateSpaceModel::transition_logdensity(std::span<const double>, std::span<const double>, double, double,
                                              const ParameterVector&) const {
  throw std::logic_error("model '" + id() + "' has no transition density");
}

void StateSpaceModel::obs_logdensity_batch(std::span<const double> y, std::span<const double> states,
                                           const ParameterVector& theta, std::span<double> out) const {
  const std::size_t d = state_dim();
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = obs_logdensity(y, states.subspan(m * d, d), theta);
}

Derivatives StateSpaceModel::complete_derivatives(const ObservationSeries&, const LatentPath&, const TimeGrid&,
                                                  const ParameterVector&) const {
  throw std::logic_error("model '" + id() + "' provides no derivatives");
}

std::vector<double> StateSpaceModel::fisher_jacobian(const ParameterVector&) const {
  throw std::logic_error("model '" + id() + "' provides no derivatives");
}

namespace {

void check_dimensions(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                      const LatentPath& x) {
  if (y.size() != grid.n()) throw ContractViolation("observation count does not match the grid");
  if (y.dim() != model.obs_dim()) throw ContractViolation("observation dimension does not match the model");
  if (x.dim() != model.state_dim()) throw ContractViolation("state dimension does not match the model");
  if (x.fine_steps() != grid.fine_steps() || x.substeps() != grid.substeps())
    throw ContractViolation("latent path does not match the grid");
}

}  // namespace

double complete_loglik(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                       const LatentPath& x, const ParameterVector& theta) {
  check_dimensions(model, grid, y, x);
  if (!model.has_transition_density())
    throw ContractViolation("complete_loglik requires a transition density; model '" + model.id() + "' has none");
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t j = 1; j <= grid.n(); ++j) {
    const double lf = model.obs_logdensity(y.at(j), x.at_sample(j), theta);
    if (lf == neg_inf) return neg_inf;
    total += lf;
  }
  for (std::size_t i = 1; i <= grid.fine_steps(); ++i) {
    const double lp =
        model.transition_logdensity(x.state(i), x.state(i - 1), grid.fine_time(i - 1), grid.fine_time(i), theta);
    if (lp == neg_inf) return neg_inf;
    total += lp;
  }
  return total;
}

LatentPath simulate_path(const StateSpaceModel& model, const TimeGrid& grid, const ParameterVector& theta, Rng& rng) {
  const std::size_t d = model.state_dim();
  std::vector<double> x0(d);
  model.sample_initial(theta, rng, x0);
  std::vector<double> values(grid.fine_steps() * d);
  std::span<const double> prev = x0;
  for (std::size_t i = 1; i <= grid.fine_steps(); ++i) {
    std::span<double> next(values.data() + (i - 1) * d, d);
    model.simulate_transition(prev, next, grid.fine_time(i - 1), grid.fine_time(i), theta, rng);
    prev = next;
  }
  return LatentPath(d, grid.substeps(), std::move(x0), std::move(values));
}

SimulatedData simulate_dataset(const StateSpaceModel& model, const TimeGrid& grid, const ParameterVector& theta,
                               Rng& rng) {
  LatentPath path = simulate_path(model, grid, theta, rng);
  const std::size_t dy = model.obs_dim();
  std::vector<double> y(grid.n() * dy);
  for (std::size_t j = 1; j <= grid.n(); ++j)
    model.simulate_obs(path.at_sample(j), theta, rng, std::span<double>(y.data() + (j - 1) * dy, dy));
  return {std::move(path), ObservationSeries(dy, std::move(y))};
}

}  // namespace saemabc
