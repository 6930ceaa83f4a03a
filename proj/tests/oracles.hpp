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

// Independent numerical oracles shared by the unit and acceptance tests.
#ifndef SAEMABC_TESTS_ORACLES_HPP
#define SAEMABC_TESTS_ORACLES_HPP

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "saemabc/model.hpp"

namespace oracle {

using Function = std::function<double(const std::vector<double>&)>;

/// Central difference gradient with per-coordinate step eps * max(|x|, 1).
inline std::vector<double> fd_gradient(const Function& f, std::vector<double> x, double eps = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = eps * std::max(std::abs(x[i]), 1.0);
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    x[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Jacobian of a vector function by central differences (columns = inputs).
inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const std::vector<double>&)>& f,
                                   std::vector<double> x, double eps = 1e-5) {
  const Eigen::Index m = f(x).size();
  Eigen::MatrixXd J(m, static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = eps * std::max(std::abs(x[i]), 1.0);
    const double xi = x[i];
    x[i] = xi + h;
    const Eigen::VectorXd fp = f(x);
    x[i] = xi - h;
    const Eigen::VectorXd fm = f(x);
    x[i] = xi;
    J.col(static_cast<Eigen::Index>(i)) = (fp - fm) / (2.0 * h);
  }
  return J;
}

/// |a - b| / |b|, with |b| floored at `floor` for entries that vanish.
inline double rel_error(double a, double b, double floor = 1e-12) {
  return std::abs(a - b) / std::max(std::abs(b), floor);
}

/// Maximizes f with the GSL Nelder-Mead simplex, restarting from the best
/// point until the value stops improving.
inline std::vector<double> maximize(const Function& f, std::vector<double> x0, double initial_step = 0.1,
                                    double size_tol = 1e-13) {
  struct Ctx {
    const Function* f;
    std::size_t n;
  } ctx{&f, x0.size()};
  gsl_multimin_function fn;
  fn.n = x0.size();
  fn.params = &ctx;
  fn.f = [](const gsl_vector* v, void* p) {
    auto* c = static_cast<Ctx*>(p);
    std::vector<double> x(c->n);
    for (std::size_t i = 0; i < c->n; ++i) x[i] = gsl_vector_get(v, i);
    const double val = (*c->f)(x);
    return std::isfinite(val) ? -val : 1e300;
  };
  gsl_set_error_handler_off();
  double best = -f(x0);
  for (int restart = 0; restart < 20; ++restart) {
    gsl_vector* x = gsl_vector_alloc(fn.n);
    gsl_vector* step = gsl_vector_alloc(fn.n);
    for (std::size_t i = 0; i < fn.n; ++i) {
      gsl_vector_set(x, i, x0[i]);
      gsl_vector_set(step, i, initial_step * std::max(std::abs(x0[i]), 1e-3));
    }
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, fn.n);
    gsl_multimin_fminimizer_set(s, &fn, x, step);
    for (int it = 0; it < 200000; ++it) {
      if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) == GSL_SUCCESS) break;
    }
    for (std::size_t i = 0; i < fn.n; ++i) x0[i] = gsl_vector_get(s->x, i);
    const double val = s->fval;
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(x);
    gsl_vector_free(step);
    const bool improved = val < best - 1e-15 * std::abs(best);
    best = std::min(best, val);
    if (!improved && restart > 0) break;
    initial_step *= 0.5;
  }
  return x0;
}

/// Exact log-likelihood of y_j = x_j + v_j, x_j = a x_{j-1} + w_j, x_0 = 0,
/// from the joint Gaussian law of (y_1..y_n).
inline double gaussian_joint_loglik(const std::vector<double>& y, double a, double var_x, double var_y) {
  const auto n = static_cast<Eigen::Index>(y.size());
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) {
      double c = 0.0;
      for (Eigen::Index l = 0; l <= std::min(i, k); ++l) c += std::pow(a, double(i - l)) * std::pow(a, double(k - l));
      cov(i, k) = var_x * c + (i == k ? var_y : 0.0);
    }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
  const Eigen::VectorXd z = llt.matrixL().solve(v);
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
  return -0.5 * (static_cast<double>(n) * std::log(2.0 * std::numbers::pi) + logdet + z.squaredNorm());
}

}  // namespace oracle

#endif  // SAEMABC_TESTS_ORACLES_HPP
