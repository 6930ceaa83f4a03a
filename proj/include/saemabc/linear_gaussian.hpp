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

#ifndef SAEMABC_LINEAR_GAUSSIAN_HPP
#define SAEMABC_LINEAR_GAUSSIAN_HPP

#include "saemabc/model.hpp"

namespace saemabc {

/// X_j = a X_{j-1} + sigma_x tau_j,  Y_j = X_j + sigma_y nu_j,  X_0 = 0.
///
/// Parameters are (a, sigma_x, sigma_y), defaulting to (0.8, 1, 1).
/// Derivatives are taken with respect to (a, sigma_x^2, sigma_y^2).
class LinearGaussianModel final : public StateSpaceModel {
 public:
  [[nodiscard]] std::string id() const override { return "linear-gaussian"; }
  [[nodiscard]] std::size_t state_dim() const override { return 1; }
  [[nodiscard]] std::size_t obs_dim() const override { return 1; }
  [[nodiscard]] std::vector<ParameterSpec> parameter_specs() const override;
  [[nodiscard]] ParameterVector default_parameters() const { return make_parameters({0.8, 1.0, 1.0}); }

  void sample_initial(const ParameterVector& theta, Rng& rng, std::span<double> x0) const override;
  void simulate_transition(std::span<const double> x_prev, std::span<double> x_next, double t_prev, double t_next,
                           const ParameterVector& theta, Rng& rng) const override;
  [[nodiscard]] bool has_transition_density() const override { return true; }
  [[nodiscard]] double transition_logdensity(std::span<const double> x_next, std::span<const double> x_prev,
                                             double t_prev, double t_next, const ParameterVector& theta) const override;
  [[nodiscard]] double obs_logdensity(std::span<const double> y, std::span<const double> x,
                                      const ParameterVector& theta) const override;
  void obs_logdensity_batch(std::span<const double> y, std::span<const double> states, const ParameterVector& theta,
                            std::span<double> out) const override;
  void simulate_obs(std::span<const double> x, const ParameterVector& theta, Rng& rng,
                    std::span<double> y) const override;

  /// (sum x_{i-1}^2, sum x_i x_{i-1}, sum x_i^2, sum (y_j - x_j)^2).
  [[nodiscard]] std::vector<double> sufficient_stats(const ObservationSeries& y, const LatentPath& x,
                                                     const TimeGrid& grid) const override;
  [[nodiscard]] MStepResult mstep(std::span<const double> s, const TimeGrid& grid,
                                  const ParameterVector& previous) const override;

  [[nodiscard]] bool has_derivatives() const override { return true; }
  [[nodiscard]] std::vector<std::string> fisher_coordinates() const override {
    return {"a", "sigma_x^2", "sigma_y^2"};
  }
  [[nodiscard]] Derivatives complete_derivatives(const ObservationSeries& y, const LatentPath& x,
                                                 const TimeGrid& grid, const ParameterVector& theta) const override;
  [[nodiscard]] std::vector<double> fisher_jacobian(const ParameterVector& theta) const override;
};

/// Exact marginal log-likelihood by the Kalman predict/update recursion,
/// started from the point mass X_0 = 0. theta = (a, sigma_x, sigma_y).
/// Throws std::domain_error for non-positive variances.
double kalman_loglik(const ObservationSeries& y, double a, double var_x, double var_y);

inline double kalman_loglik(const ObservationSeries& y, const ParameterVector& theta) {
  return kalman_loglik(y, theta[0], theta[1] * theta[1], theta[2] * theta[2]);
}

}  // namespace saemabc

#endif  // SAEMABC_LINEAR_GAUSSIAN_HPP
