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

#include "saemabc/linear_gaussian.hpp"

#include <cmath>
#include <stdexcept>

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

std::vector<ParameterSpec> LinearGaussianModel::parameter_specs() const {
  return {{"a", Domain::unconstrained}, {"sigma_x", Domain::positive}, {"sigma_y", Domain::positive}};
}

void LinearGaussianModel::sample_initial(const ParameterVector&, Rng&, std::span<double> x0) const { x0[0] = 0.0; }

void LinearGaussianModel::simulate_transition(std::span<const double> x_prev, std::span<double> x_next, double,
                                              double, const ParameterVector& theta, Rng& rng) const {
  x_next[0] = theta[0] * x_prev[0] + theta[1] * rng.normal();
}

double LinearGaussianModel::transition_logdensity(std::span<const double> x_next, std::span<const double> x_prev,
                                                  double, double, const ParameterVector& theta) const {
  return normal_logpdf(x_next[0], theta[0] * x_prev[0], theta[1] * theta[1]);
}

double LinearGaussianModel::obs_logdensity(std::span<const double> y, std::span<const double> x,
                                           const ParameterVector& theta) const {
  return normal_logpdf(y[0], x[0], theta[2] * theta[2]);
}

void LinearGaussianModel::obs_logdensity_batch(std::span<const double> y, std::span<const double> states,
                                               const ParameterVector& theta, std::span<double> out) const {
  const double var = theta[2] * theta[2];
  simd::gaussian_log_kernel(states, y[0], 1.0 / (2.0 * var), -0.5 * (kLog2Pi + std::log(var)), out);
}

void LinearGaussianModel::simulate_obs(std::span<const double> x, const ParameterVector& theta, Rng& rng,
                                       std::span<double> y) const {
  y[0] = x[0] + theta[2] * rng.normal();
}

std::vector<double> LinearGaussianModel::sufficient_stats(const ObservationSeries& y, const LatentPath& x,
                                                          const TimeGrid&) const {
  std::vector<double> s(4, 0.0);
  for (std::size_t i = 1; i <= x.fine_steps(); ++i) {
    s[0] += x[i - 1] * x[i - 1];
    s[1] += x[i] * x[i - 1];
    s[2] += x[i] * x[i];
  }
  for (std::size_t j = 1; j <= y.size(); ++j) {
    const double r = y.at(j)[0] - x.at_sample(j)[0];
    s[3] += r * r;
  }
  return s;
}

MStepResult LinearGaussianModel::mstep(std::span<const double> s, const TimeGrid& grid,
                                       const ParameterVector& previous) const {
  if (s.size() != 4) throw ContractViolation("linear-gaussian mstep: expected four statistics");
  MStepResult out{previous, {}};
  double a = previous[0];
  if (s[0] > 0.0) {
    a = s[1] / s[0];
  } else {
    out.warnings.push_back("sum of squared states is zero: a kept at previous value");
  }
  double var_x = (s[2] - 2.0 * a * s[1] + a * a * s[0]) / static_cast<double>(grid.fine_steps());
  double var_y = s[3] / static_cast<double>(grid.n());
  if (var_x < kVarianceFloor) {
    out.warnings.push_back("sigma_x^2 clamped to 1e-12");
    var_x = kVarianceFloor;
  }
  if (var_y < kVarianceFloor) {
    out.warnings.push_back("sigma_y^2 clamped to 1e-12");
    var_y = kVarianceFloor;
  }
  out.theta = make_parameters({a, std::sqrt(var_x), std::sqrt(var_y)});
  return out;
}

Derivatives LinearGaussianModel::complete_derivatives(const ObservationSeries& y, const LatentPath& x,
                                                      const TimeGrid& grid, const ParameterVector& theta) const {
  const auto s = sufficient_stats(y, x, grid);
  const double a = theta[0];
  const double vx = theta[1] * theta[1];
  const double vy = theta[2] * theta[2];
  const double nx = static_cast<double>(x.fine_steps());
  const double ny = static_cast<double>(y.size());
  const double q = s[2] - 2.0 * a * s[1] + a * a * s[0];
  const double cross = s[1] - a * s[0];
  Derivatives d{Eigen::VectorXd(3), Eigen::MatrixXd::Zero(3, 3)};
  d.gradient << cross / vx, -nx / (2.0 * vx) + q / (2.0 * vx * vx), -ny / (2.0 * vy) + s[3] / (2.0 * vy * vy);
  d.hessian(0, 0) = -s[0] / vx;
  d.hessian(0, 1) = d.hessian(1, 0) = -cross / (vx * vx);
  d.hessian(1, 1) = nx / (2.0 * vx * vx) - q / (vx * vx * vx);
  d.hessian(2, 2) = ny / (2.0 * vy * vy) - s[3] / (vy * vy * vy);
  return d;
}

std::vector<double> LinearGaussianModel::fisher_jacobian(const ParameterVector& theta) const {
  return {1.0, 2.0 * theta[1], 2.0 * theta[2]};
}

double kalman_loglik(const ObservationSeries& y, double a, double var_x, double var_y) {
  if (!(var_x > 0.0) || !(var_y > 0.0)) throw std::domain_error("kalman_loglik: variances must be positive");
  double mean = 0.0;
  double var = 0.0;
  double total = 0.0;
  for (std::size_t j = 1; j <= y.size(); ++j) {
    mean = a * mean;
    var = a * a * var + var_x;
    const double s = var + var_y;
    const double innov = y.at(j)[0] - mean;
    total += -0.5 * (kLog2Pi + std::log(s)) - innov * innov / (2.0 * s);
    const double gain = var / s;
    mean += gain * innov;
    var *= (1.0 - gain);
  }
  return total;
}

}  // namespace saemabc
