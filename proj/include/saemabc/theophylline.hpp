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

#ifndef SAEMABC_THEOPHYLLINE_HPP
#define SAEMABC_THEOPHYLLINE_HPP

#include <array>
#include <cmath>

#include "saemabc/model.hpp"

namespace saemabc {

/// Known constants of the one-compartment pharmacokinetic SDE.
struct TheophyllineConstants {
  double ka = 1.492;
  double dose = 4.0;
  double x0 = 8.0;
};

/// dX_t = (Dose Ka Ke / Cl e^{-Ka t} - Ke X_t) dt + sigma sqrt(X_t) dW_t,
/// Y_j = X_{t_j} + sigma_eps eps_j, integrated by Euler-Maruyama on the fine grid.
///
/// Parameters are (Ke, Cl, sigma, sigma_eps). Derivatives are taken with
/// respect to (Ke, Cl, sigma^2, sigma_eps^2). The diffusion argument is
/// clamped at max(x, 0); transitions out of a non-positive state have no
/// density and are left out of the regression statistics.
class TheophyllineModel final : public StateSpaceModel {
 public:
  explicit TheophyllineModel(TheophyllineConstants constants = {}) : c_(constants) {}

  [[nodiscard]] const TheophyllineConstants& constants() const noexcept { return c_; }

  [[nodiscard]] std::string id() const override { return "theophylline"; }
  [[nodiscard]] std::size_t state_dim() const override { return 1; }
  [[nodiscard]] std::size_t obs_dim() const override { return 1; }
  [[nodiscard]] std::vector<ParameterSpec> parameter_specs() const override;

  void sample_initial(const ParameterVector& theta, Rng& rng, std::span<double> x0) const override;
  void simulate_transition(std::span<const double> x_prev, std::span<double> x_next, double t_prev, double t_next,
                           const ParameterVector& theta, Rng& rng) const override;
  void simulate_interval(std::span<const double> x_prev, std::span<const double> times, const ParameterVector& theta,
                         Rng& rng, std::span<double> out) const override;
  [[nodiscard]] bool has_transition_density() const override { return true; }
  [[nodiscard]] double transition_logdensity(std::span<const double> x_next, std::span<const double> x_prev,
                                             double t_prev, double t_next, const ParameterVector& theta) const override;
  [[nodiscard]] double obs_logdensity(std::span<const double> y, std::span<const double> x,
                                      const ParameterVector& theta) const override;
  void obs_logdensity_batch(std::span<const double> y, std::span<const double> states, const ParameterVector& theta,
                            std::span<double> out) const override;
  void simulate_obs(std::span<const double> x, const ParameterVector& theta, Rng& rng,
                    std::span<double> y) const override;

  /// (S_sigma_eps^2, S_sigma^2, beta_1, beta_2).
  [[nodiscard]] std::vector<double> sufficient_stats(const ObservationSeries& y, const LatentPath& x,
                                                     const TimeGrid& grid) const override;
  /// Closed-form update; a non-positive beta component keeps the previous
  /// Ke or Cl and records a warning.
  [[nodiscard]] MStepResult mstep(std::span<const double> s, const TimeGrid& grid,
                                  const ParameterVector& previous) const override;

  [[nodiscard]] bool has_derivatives() const override { return true; }
  [[nodiscard]] std::vector<std::string> fisher_coordinates() const override {
    return {"Ke", "Cl", "sigma^2", "sigma_eps^2"};
  }
  [[nodiscard]] Derivatives complete_derivatives(const ObservationSeries& y, const LatentPath& x,
                                                 const TimeGrid& grid, const ParameterVector& theta) const override;
  [[nodiscard]] std::vector<double> fisher_jacobian(const ParameterVector& theta) const override;

 private:
  TheophyllineConstants c_;
};

/// Drift Dose Ka Ke / Cl e^{-Ka tau} - Ke x.
inline double theo_drift(double x, double tau, double ke, double cl, const TheophyllineConstants& c) {
  return c.dose * c.ka * ke / cl * std::exp(-c.ka * tau) - ke * x;
}

/// One Euler-Maruyama step x + drift h + sigma sqrt(h max(x, 0)) Z.
/// theta = (Ke, Cl, sigma, sigma_eps).
double euler_maruyama_transition(double x, double tau, double h, const ParameterVector& theta, Rng& rng,
                                 const TheophyllineConstants& c = {});

/// Euler transition log-density: Gaussian with mean x_prev + drift h and
/// variance sigma^2 x_prev h. Returns -inf when x_prev <= 0.
double theo_transition_logdensity(double x, double x_prev, double tau_prev, double h, const ParameterVector& theta,
                                  const TheophyllineConstants& c = {});

/// Regression statistics (S_sigma_eps^2, S_sigma^2, beta_1, beta_2) from a
/// fine-grid path. beta is solved by column-pivoted QR; S_sigma^2 is the
/// residual sum of (V - C beta)^2 / h at that beta.
/// Throws SingularRegressionError when cond(C'C) > 1e12.
std::array<double, 4> theo_sufficient_stats(const ObservationSeries& y, const LatentPath& x, const TimeGrid& grid,
                                            const TheophyllineConstants& c = {});

/// (Ke, Cl, sigma, sigma_eps) = (beta_2, beta_2 / beta_1, sqrt(S_sigma^2 / N), sqrt(S_eps / n)).
/// Throws MStepDomainError when a beta component is not positive.
std::array<double, 4> theo_mstep(std::span<const double> stats, std::size_t n, std::size_t fine_steps);

/// Gradient and Hessian of the Euler complete log-likelihood in
/// (Ke, Cl, sigma^2, sigma_eps^2).
Derivatives theo_fisher_derivatives(const ObservationSeries& y, const LatentPath& x, const TimeGrid& grid,
                                    const ParameterVector& theta, const TheophyllineConstants& c = {});

}  // namespace saemabc

#endif  // SAEMABC_THEOPHYLLINE_HPP
