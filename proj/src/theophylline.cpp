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

#include "saemabc/theophylline.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "saemabc/errors.hpp"
#include "saemabc/simd.hpp"

namespace saemabc {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kVarianceFloor = 1e-12;
constexpr double kMaxCondition = 1e12;

double normal_logpdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (kLog2Pi + std::log(var)) - d * d / (2.0 * var);
}

}  // namespace

std::vector<ParameterSpec> TheophyllineModel::parameter_specs() const {
  return {{"Ke", Domain::positive}, {"Cl", Domain::positive}, {"sigma", Domain::positive},
          {"sigma_eps", Domain::positive}};
}

double euler_maruyama_transition(double x, double tau, double h, const ParameterVector& theta, Rng& rng,
                                 const TheophyllineConstants& c) {
  const double xp = x > 0.0 ? x : 0.0;
  return x + theo_drift(x, tau, theta[0], theta[1], c) * h + theta[2] * std::sqrt(h * xp) * rng.normal();
}

double theo_transition_logdensity(double x, double x_prev, double tau_prev, double h, const ParameterVector& theta,
                                  const TheophyllineConstants& c) {
  if (!(x_prev > 0.0)) return -std::numeric_limits<double>::infinity();
  const double mean = x_prev + theo_drift(x_prev, tau_prev, theta[0], theta[1], c) * h;
  return normal_logpdf(x, mean, theta[2] * theta[2] * x_prev * h);
}

void TheophyllineModel::sample_initial(const ParameterVector&, Rng&, std::span<double> x0) const { x0[0] = c_.x0; }

void TheophyllineModel::simulate_transition(std::span<const double> x_prev, std::span<double> x_next, double t_prev,
                                            double t_next, const ParameterVector& theta, Rng& rng) const {
  x_next[0] = euler_maruyama_transition(x_prev[0], t_prev, t_next - t_prev, theta, rng, c_);
}

void TheophyllineModel::simulate_interval(std::span<const double> x_prev, std::span<const double> times,
                                          const ParameterVector& theta, Rng& rng, std::span<double> out) const {
  double x = x_prev[0];
  for (std::size_t r = 0; r + 1 < times.size(); ++r) {
    x = euler_maruyama_transition(x, times[r], times[r + 1] - times[r], theta, rng, c_);
    out[r] = x;
  }
}

double TheophyllineModel::transition_logdensity(std::span<const double> x_next, std::span<const double> x_prev,
                                                double t_prev, double t_next, const ParameterVector& theta) const {
  return theo_transition_logdensity(x_next[0], x_prev[0], t_prev, t_next - t_prev, theta, c_);
}

double TheophyllineModel::obs_logdensity(std::span<const double> y, std::span<const double> x,
                                         const ParameterVector& theta) const {
  return normal_logpdf(y[0], x[0], theta[3] * theta[3]);
}

void TheophyllineModel::obs_logdensity_batch(std::span<const double> y, std::span<const double> states,
                                             const ParameterVector& theta, std::span<double> out) const {
  const double var = theta[3] * theta[3];
  simd::gaussian_log_kernel(states, y[0], 1.0 / (2.0 * var), -0.5 * (kLog2Pi + std::log(var)), out);
}

void TheophyllineModel::simulate_obs(std::span<const double> x, const ParameterVector& theta, Rng& rng,
                                     std::span<double> y) const {
  y[0] = x[0] + theta[3] * rng.normal();
}

std::array<double, 4> theo_sufficient_stats(const ObservationSeries& y, const LatentPath& x, const TimeGrid& grid,
                                            const TheophyllineConstants& c) {
  if (x.dim() != 1 || y.dim() != 1) throw ContractViolation("theo_sufficient_stats: scalar model");
  if (x.fine_steps() != grid.fine_steps() || y.size() != grid.n())
    throw ContractViolation("theo_sufficient_stats: path or data does not match the grid");
  const std::size_t N = grid.fine_steps();
  if (N < 2) throw ContractViolation("theo_sufficient_stats: need at least two fine steps");

  Eigen::MatrixXd C(N, 2);
  Eigen::VectorXd V(N);
  Eigen::VectorXd h(N);
  std::size_t rows = 0;
  for (std::size_t i = 1; i <= N; ++i) {
    const double xp = x[i - 1];
    if (!(xp > 0.0)) continue;
    const double tau = grid.fine_time(i - 1);
    const double hi = grid.fine_time(i) - tau;
    const double root = std::sqrt(xp);
    V(rows) = (x[i] - xp) / root;
    C(rows, 0) = c.dose * c.ka * std::exp(-c.ka * tau) * hi / root;
    C(rows, 1) = -root * hi;
    h(rows) = hi;
    ++rows;
  }
  if (rows < 2) throw SingularRegressionError("theo_sufficient_stats: fewer than two usable transitions");
  const auto Cu = C.topRows(static_cast<Eigen::Index>(rows));
  const auto Vu = V.head(static_cast<Eigen::Index>(rows));

  const Eigen::Matrix2d gram = Cu.transpose() * Cu;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(1);
  if (!(lo > 0.0) || hi / lo > kMaxCondition)
    throw SingularRegressionError("theo_sufficient_stats: regression design is singular (cond(C'C) > 1e12)");

  const Eigen::Vector2d beta = Cu.colPivHouseholderQr().solve(Vu);
  const Eigen::VectorXd resid = Vu - Cu * beta;
  // Rows with x_{i-1} <= 0 carry no diffusion; rescale to N usable rows.
  const double s_sigma = (resid.array().square() / h.head(static_cast<Eigen::Index>(rows)).array()).sum() *
                         static_cast<double>(N) / static_cast<double>(rows);

  double s_eps = 0.0;
  for (std::size_t j = 1; j <= y.size(); ++j) {
    const double r = y.at(j)[0] - x.at_sample(j)[0];
    s_eps += r * r;
  }
  return {s_eps, s_sigma, beta(0), beta(1)};
}

std::array<double, 4> theo_mstep(std::span<const double> stats, std::size_t n, std::size_t fine_steps) {
  if (stats.size() != 4) throw ContractViolation("theo_mstep: expected four statistics");
  if (n == 0 || fine_steps == 0) throw ContractViolation("theo_mstep: n and N must be positive");
  if (!(stats[2] > 0.0) || !(stats[3] > 0.0))
    throw MStepDomainError("theo_mstep: regression coefficients must be positive");
  if (stats[0] < 0.0 || stats[1] < 0.0) throw MStepDomainError("theo_mstep: negative variance statistic");
  return {stats[3], stats[3] / stats[2], std::sqrt(stats[1] / static_cast<double>(fine_steps)),
          std::sqrt(stats[0] / static_cast<double>(n))};
}

std::vector<double> TheophyllineModel::sufficient_stats(const ObservationSeries& y, const LatentPath& x,
                                                        const TimeGrid& grid) const {
  const auto s = theo_sufficient_stats(y, x, grid, c_);
  return {s.begin(), s.end()};
}

MStepResult TheophyllineModel::mstep(std::span<const double> s, const TimeGrid& grid,
                                     const ParameterVector& previous) const {
  if (s.size() != 4) throw ContractViolation("theophylline mstep: expected four statistics");
  if (s[0] < 0.0 || s[1] < 0.0) throw MStepDomainError("theophylline mstep: negative variance statistic");
  MStepResult out{previous, {}};
  double ke = previous[0];
  double cl = previous[1];
  if (s[3] > 0.0) {
    ke = s[3];
  } else {
    out.warnings.push_back("beta_2 <= 0: Ke kept at previous value");
  }
  if (s[2] > 0.0 && s[3] > 0.0) {
    cl = s[3] / s[2];
  } else {
    out.warnings.push_back("beta <= 0: Cl kept at previous value");
  }
  double var = s[1] / static_cast<double>(grid.fine_steps());
  double var_eps = s[0] / static_cast<double>(grid.n());
  if (var < kVarianceFloor) {
    out.warnings.push_back("sigma^2 clamped to 1e-12");
    var = kVarianceFloor;
  }
  if (var_eps < kVarianceFloor) {
    out.warnings.push_back("sigma_eps^2 clamped to 1e-12");
    var_eps = kVarianceFloor;
  }
  out.theta = make_parameters({ke, cl, std::sqrt(var), std::sqrt(var_eps)});
  return out;
}

Derivatives theo_fisher_derivatives(const ObservationSeries& y, const LatentPath& x, const TimeGrid& grid,
                                    const ParameterVector& theta, const TheophyllineConstants& c) {
  const double ke = theta[0];
  const double cl = theta[1];
  const double s2 = theta[2] * theta[2];
  const double e2 = theta[3] * theta[3];
  const std::size_t N = grid.fine_steps();
  const double n = static_cast<double>(y.size());

  // Sums over the fine grid; B = Dose Ka / Cl e^{-Ka tau}, A = Ke Cl B.
  double g_ke = 0.0, g_cl = 0.0, zz = 0.0;
  double h_keke = 0.0, h_clcl = 0.0, h_kecl = 0.0;
  double used = 0.0;
  for (std::size_t i = 1; i <= N; ++i) {
    const double xp = x[i - 1];
    if (!(xp > 0.0)) continue;
    const double tau = grid.fine_time(i - 1);
    const double h = grid.fine_time(i) - tau;
    const double e = std::exp(-c.ka * tau);
    const double b = c.dose * c.ka / cl * e;
    const double a = c.dose * c.ka * ke * e;
    const double z = x[i] - xp - h * (c.dose * c.ka * ke / cl * e - ke * xp);
    g_ke += z / xp * (xp - b);
    g_cl += z / xp * (a / (cl * cl));
    zz += z * z / (xp * h);
    h_keke += h * (xp - b) * (xp - b) / xp;
    h_clcl += (a / (cl * cl)) * (h * a / (cl * cl) - 2.0 * z / cl) / xp;
    h_kecl += (c.dose * c.ka / (cl * cl) * e) * (h * ke * (xp - b) + z) / xp;
    used += 1.0;
  }
  double s_eps = 0.0;
  for (std::size_t j = 1; j <= y.size(); ++j) {
    const double r = y.at(j)[0] - x.at_sample(j)[0];
    s_eps += r * r;
  }

  Derivatives d{Eigen::VectorXd(4), Eigen::MatrixXd::Zero(4, 4)};
  d.gradient(0) = -g_ke / s2;
  d.gradient(1) = -g_cl / s2;
  d.gradient(2) = -used / (2.0 * s2) + zz / (2.0 * s2 * s2);
  d.gradient(3) = -n / (2.0 * e2) + s_eps / (2.0 * e2 * e2);
  d.hessian(0, 0) = -h_keke / s2;
  d.hessian(1, 1) = -h_clcl / s2;
  d.hessian(2, 2) = used / (2.0 * s2 * s2) - zz / (s2 * s2 * s2);
  d.hessian(3, 3) = n / (2.0 * e2 * e2) - s_eps / (e2 * e2 * e2);
  d.hessian(0, 1) = d.hessian(1, 0) = -h_kecl / s2;
  d.hessian(0, 2) = d.hessian(2, 0) = g_ke / (s2 * s2);
  d.hessian(1, 2) = d.hessian(2, 1) = g_cl / (s2 * s2);
  return d;
}

Derivatives TheophyllineModel::complete_derivatives(const ObservationSeries& y, const LatentPath& x,
                                                    const TimeGrid& grid, const ParameterVector& theta) const {
  return theo_fisher_derivatives(y, x, grid, theta, c_);
}

std::vector<double> TheophyllineModel::fisher_jacobian(const ParameterVector& theta) const {
  return {1.0, 1.0, 2.0 * theta[2], 2.0 * theta[3]};
}

}  // namespace saemabc
