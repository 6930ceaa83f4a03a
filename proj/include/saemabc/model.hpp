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

#ifndef SAEMABC_MODEL_HPP
#define SAEMABC_MODEL_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "saemabc/grid.hpp"
#include "saemabc/parameters.hpp"
#include "saemabc/rng.hpp"

namespace saemabc {

/// Latent states X_0..X_N on the fine grid, stored row-major with `dim`
/// reals per state.
class LatentPath {
 public:
  LatentPath() = default;
  LatentPath(std::size_t dim, std::size_t substeps, std::vector<double> x0, std::vector<double> values);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t substeps() const noexcept { return substeps_; }
  /// N, the number of states after X_0.
  [[nodiscard]] std::size_t fine_steps() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
  /// n, the number of sampling times covered.
  [[nodiscard]] std::size_t observations() const noexcept { return fine_steps() / substeps_; }

  /// State at fine index i in [0, N]; index 0 is X_0.
  [[nodiscard]] std::span<const double> state(std::size_t i) const;
  /// State at sampling index j in [1, n], i.e. fine index j * R.
  [[nodiscard]] std::span<const double> at_sample(std::size_t j) const { return state(j * substeps_); }
  /// Scalar shorthand for one-dimensional states.
  [[nodiscard]] double operator[](std::size_t i) const { return state(i)[0]; }

  [[nodiscard]] const std::vector<double>& initial_state() const noexcept { return x0_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  /// Subsampled view: the n states at sampling times, flattened.
  [[nodiscard]] std::vector<double> sampled_values() const;

  friend bool operator==(const LatentPath&, const LatentPath&) = default;

 private:
  std::size_t dim_ = 0;
  std::size_t substeps_ = 1;
  std::vector<double> x0_;
  std::vector<double> values_;
};

/// Observations Y_1..Y_n at sampling times.
class ObservationSeries {
 public:
  ObservationSeries() = default;
  ObservationSeries(std::size_t dim, std::vector<double> values);
  static ObservationSeries scalar(std::vector<double> values) { return ObservationSeries(1, std::move(values)); }

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
  /// Observation j in [1, n].
  [[nodiscard]] std::span<const double> at(std::size_t j) const;
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

  friend bool operator==(const ObservationSeries&, const ObservationSeries&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

struct MStepResult {
  ParameterVector theta;
  std::vector<std::string> warnings;
};

/// Gradient and Hessian of the complete-data log-likelihood in the model's
/// Fisher coordinates.
struct Derivatives {
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// State-space model contract consumed by the filters, SAEM and the samplers.
///
/// Implementations are immutable after construction; all randomness comes in
/// through the Rng argument.
class StateSpaceModel {
 public:
  virtual ~StateSpaceModel() = default;

  [[nodiscard]] virtual std::string id() const = 0;
  [[nodiscard]] virtual std::size_t state_dim() const = 0;
  [[nodiscard]] virtual std::size_t obs_dim() const = 0;
  [[nodiscard]] virtual std::vector<ParameterSpec> parameter_specs() const = 0;

  /// Draw X_0. Point-mass models ignore the rng.
  virtual void sample_initial(const ParameterVector& theta, Rng& rng, std::span<double> x0) const = 0;

  /// Forward simulator for one fine step t_prev -> t_next.
  virtual void simulate_transition(std::span<const double> x_prev, std::span<double> x_next, double t_prev,
                                   double t_next, const ParameterVector& theta, Rng& rng) const = 0;

  /// Propagate across one sampling interval. `times` holds the R+1 fine
  /// times of the interval; `out` receives R states.
  virtual void simulate_interval(std::span<const double> x_prev, std::span<const double> times,
                                 const ParameterVector& theta, Rng& rng, std::span<double> out) const;

  [[nodiscard]] virtual bool has_transition_density() const { return false; }
  /// log p(x_next | x_prev); only valid when has_transition_density().
  [[nodiscard]] virtual double transition_logdensity(std::span<const double> x_next, std::span<const double> x_prev,
                                                     double t_prev, double t_next, const ParameterVector& theta) const;

  [[nodiscard]] virtual double obs_logdensity(std::span<const double> y, std::span<const double> x,
                                              const ParameterVector& theta) const = 0;
  /// log f(y | x_m) for M states packed in `states`.
  virtual void obs_logdensity_batch(std::span<const double> y, std::span<const double> states,
                                    const ParameterVector& theta, std::span<double> out) const;
  virtual void simulate_obs(std::span<const double> x, const ParameterVector& theta, Rng& rng,
                            std::span<double> y) const = 0;

  [[nodiscard]] virtual std::vector<double> sufficient_stats(const ObservationSeries& y, const LatentPath& x,
                                                             const TimeGrid& grid) const = 0;
  [[nodiscard]] virtual MStepResult mstep(std::span<const double> s, const TimeGrid& grid,
                                          const ParameterVector& previous) const = 0;

  [[nodiscard]] virtual bool has_derivatives() const { return false; }
  /// Names of the coordinates in which derivatives are expressed.
  [[nodiscard]] virtual std::vector<std::string> fisher_coordinates() const { return {}; }
  [[nodiscard]] virtual Derivatives complete_derivatives(const ObservationSeries& y, const LatentPath& x,
                                                         const TimeGrid& grid, const ParameterVector& theta) const;
  /// d(coordinate_i)/d(theta_i); the coordinate map is componentwise.
  [[nodiscard]] virtual std::vector<double> fisher_jacobian(const ParameterVector& theta) const;

  // Data-conditioned proposals (diffusion bridges and the like) would hook in
  // here; only blind forward proposals exist today.
  [[nodiscard]] virtual bool has_proposal() const { return false; }

  [[nodiscard]] ParameterVector make_parameters(std::vector<double> natural) const {
    return ParameterVector(parameter_specs(), std::move(natural));
  }
};

/// Sum of observation and transition log-densities along a path.
double complete_loglik(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                       const LatentPath& x, const ParameterVector& theta);

struct SimulatedData {
  LatentPath path;
  ObservationSeries observations;
};

/// Forward-simulate a latent path on the fine grid and observations at
/// sampling times.
SimulatedData simulate_dataset(const StateSpaceModel& model, const TimeGrid& grid, const ParameterVector& theta,
                               Rng& rng);

/// Forward-simulate a path only (no observations).
LatentPath simulate_path(const StateSpaceModel& model, const TimeGrid& grid, const ParameterVector& theta, Rng& rng);

}  // namespace saemabc

#endif  // SAEMABC_MODEL_HPP
