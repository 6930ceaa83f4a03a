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

#include "saemabc/nonlinear_gaussian.hpp"

#include <cmath>

#include "saemabc/errors.hpp"
#include "saemabc/simd.hpp"

namespace saemabc {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kVarianceFloor = 1e-12;

double normal_logpdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (kLog2Pi + std::log(var)) - d * d / (2.0 * var);
}

}  // namespace

std::vector<ParameterSpec> NonlinearGaussianModel::parameter_specs() const {
  return {{"sigma_x", Domain::positive}, {"sigma_y", Domain::positive}};
}

void NonlinearGaussianModel::sample_initial(const ParameterVector&, Rng&, std::span<double> x0) const { x0[0] = 0.0; }

void NonlinearGaussianModel::simulate_transition(std::span<const double> x_prev, std::span<double> x_next, double,
                                                 double, const ParameterVector& theta, Rng& rng) const {
  x_next[0] = nlg_map(x_prev[0]) + theta[0] * rng.normal();
}

double NonlinearGaussianModel::transition_logdensity(std::span<const double> x_next, std::span<const double> x_prev,
                                                     double, double, const ParameterVector& theta) const {
  return normal_logpdf(x_next[0], nlg_map(x_prev[0]), theta[0] * theta[0]);
}

double NonlinearGaussianModel::obs_logdensity(std::span<const double> y, std::span<const double> x,
                                              const ParameterVector& theta) const {
  return normal_logpdf(y[0], x[0], theta[1] * theta[1]);
}

void NonlinearGaussianModel::obs_logdensity_batch(std::span<const double> y, std::span<const double> states,
                                                  const ParameterVector& theta, std::span<double> out) const {
  const double var = theta[1] * theta[1];
  simd::gaussian_log_kernel(states, y[0], 1.0 / (2.0 * var), -0.5 * (kLog2Pi + std::log(var)), out);
}

void NonlinearGaussianModel::simulate_obs(std::span<const double> x, const ParameterVector& theta, Rng& rng,
                                          std::span<double> y) const {
  y[0] = x[0] + theta[1] * rng.normal();
}

std::array<double, 2> nlg_sufficient_stats(const ObservationSeries& y, const LatentPath& x) {
  if (x.dim() != 1 || y.dim() != 1) throw ContractViolation("nlg_sufficient_stats: scalar model");
  if (x.observations() != y.size()) throw ContractViolation("nlg_sufficient_stats: length mismatch");
  double sx = 0.0;
  for (std::size_t i = 1; i <= x.fine_steps(); ++i) {
    const double r = x[i] - nlg_map(x[i - 1]);
    sx += r * r;
  }
  double sy = 0.0;
  for (std::size_t j = 1; j <= y.size(); ++j) {
    const double r = y.at(j)[0] - x.at_sample(j)[0];
    sy += r * r;
  }
  return {sx, sy};
}

std::array<double, 2> nlg_mstep(std::span<const double> s, std::size_t n) {
  if (s.size() != 2) throw ContractViolation("nlg_mstep: expected two statistics");
  if (n == 0) throw ContractViolation("nlg_mstep: n must be positive");
  if (s[0] < 0.0 || s[1] < 0.0) throw ContractViolation("nlg_mstep: negative sufficient statistic");
  return {s[0] / static_cast<double>(n), s[1] / static_cast<double>(n)};
}

std::vector<double> NonlinearGaussianModel::sufficient_stats(const ObservationSeries& y, const LatentPath& x,
                                                             const TimeGrid&) const {
  const auto s = nlg_sufficient_stats(y, x);
  return {s[0], s[1]};
}

MStepResult NonlinearGaussianModel::mstep(std::span<const double> s, const TimeGrid& grid,
                                          const ParameterVector&) const {
  if (s.size() != 2) throw ContractViolation("nonlinear-gaussian mstep: expected two statistics");
  if (s[0] < 0.0 || s[1] < 0.0) throw MStepDomainError("nonlinear-gaussian mstep: negative sufficient statistic");
  const double var_x = s[0] / static_cast<double>(grid.fine_steps());
  const double var_y = s[1] / static_cast<double>(grid.n());
  MStepResult out{make_parameters({1.0, 1.0}), {}};
  std::vector<double> sd(2);
  const double vars[2] = {var_x, var_y};
  const char* names[2] = {"sigma_x^2", "sigma_y^2"};
  for (int c = 0; c < 2; ++c) {
    double v = vars[c];
    if (v < kVarianceFloor) {
      out.warnings.push_back(std::string(names[c]) + " clamped to 1e-12");
      v = kVarianceFloor;
    }
    sd[c] = std::sqrt(v);
  }
  out.theta = make_parameters(sd);
  return out;
}

Derivatives nlg_derivatives(const ObservationSeries& y, const LatentPath& x, double var_x, double var_y) {
  const auto s = nlg_sufficient_stats(y, x);
  const double nx = static_cast<double>(x.fine_steps());
  const double ny = static_cast<double>(y.size());
  Derivatives d{Eigen::VectorXd(2), Eigen::MatrixXd::Zero(2, 2)};
  d.gradient(0) = -nx / (2.0 * var_x) + s[0] / (2.0 * var_x * var_x);
  d.gradient(1) = -ny / (2.0 * var_y) + s[1] / (2.0 * var_y * var_y);
  d.hessian(0, 0) = nx / (2.0 * var_x * var_x) - s[0] / (var_x * var_x * var_x);
  d.hessian(1, 1) = ny / (2.0 * var_y * var_y) - s[1] / (var_y * var_y * var_y);
  return d;
}

Derivatives NonlinearGaussianModel::complete_derivatives(const ObservationSeries& y, const LatentPath& x,
                                                         const TimeGrid&, const ParameterVector& theta) const {
  return nlg_derivatives(y, x, theta[0] * theta[0], theta[1] * theta[1]);
}

std::vector<double> NonlinearGaussianModel::fisher_jacobian(const ParameterVector& theta) const {
  return {2.0 * theta[0], 2.0 * theta[1]};
}

}  // namespace saemabc
