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

#ifndef SAEMABC_NONLINEAR_GAUSSIAN_HPP
#define SAEMABC_NONLINEAR_GAUSSIAN_HPP

#include <array>
#include <cmath>

#include "saemabc/model.hpp"

namespace saemabc {

/// X_j = 2 sin(exp(X_{j-1})) + sigma_x tau_j,  Y_j = X_j + sigma_y nu_j,  X_0 = 0.
///
/// Parameters are the standard deviations (sigma_x, sigma_y). Derivatives
/// are taken with respect to the variances (sigma_x^2, sigma_y^2).
class NonlinearGaussianModel final : public StateSpaceModel {
 public:
  [[nodiscard]] std::string id() const override { return "nonlinear-gaussian"; }
  [[nodiscard]] std::size_t state_dim() const override { return 1; }
  [[nodiscard]] std::size_t obs_dim() const override { return 1; }
  [[nodiscard]] std::vector<ParameterSpec> parameter_specs() const override;

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

  /// (S_x, S_y).
  [[nodiscard]] std::vector<double> sufficient_stats(const ObservationSeries& y, const LatentPath& x,
                                                     const TimeGrid& grid) const override;
  [[nodiscard]] MStepResult mstep(std::span<const double> s, const TimeGrid& grid,
                                  const ParameterVector& previous) const override;

  [[nodiscard]] bool has_derivatives() const override { return true; }
  [[nodiscard]] std::vector<std::string> fisher_coordinates() const override { return {"sigma_x^2", "sigma_y^2"}; }
  [[nodiscard]] Derivatives complete_derivatives(const ObservationSeries& y, const LatentPath& x,
                                                 const TimeGrid& grid, const ParameterVector& theta) const override;
  [[nodiscard]] std::vector<double> fisher_jacobian(const ParameterVector& theta) const override;
};

/// 2 sin(exp(x)).
inline double nlg_map(double x) { return 2.0 * std::sin(std::exp(x)); }

/// S_x = sum (X_j - 2 sin(exp(X_{j-1})))^2 and S_y = sum (Y_j - X_j)^2.
std::array<double, 2> nlg_sufficient_stats(const ObservationSeries& y, const LatentPath& x);

/// Variances (S_x / n, S_y / n). Throws ContractViolation on negative input.
std::array<double, 2> nlg_mstep(std::span<const double> s, std::size_t n);

/// Gradient and Hessian of the complete log-likelihood in (sigma_x^2, sigma_y^2).
Derivatives nlg_derivatives(const ObservationSeries& y, const LatentPath& x, double var_x, double var_y);

}  // namespace saemabc

#endif  // SAEMABC_NONLINEAR_GAUSSIAN_HPP
