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

#include "saemabc/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "saemabc/errors.hpp"

namespace saemabc {

FisherState FisherState::zero(Eigen::Index dim) {
  return {Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Zero(dim, dim), Eigen::MatrixXd::Zero(dim, dim), 0.0};
}

namespace {

double relative_asymmetry(const Eigen::MatrixXd& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

FisherState fisher_update(const FisherState& state, const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess,
                          double gamma) {
  const Eigen::Index d = state.G.size();
  if (grad.size() != d || hess.rows() != d || hess.cols() != d || state.H.rows() != d)
    throw ContractViolation("fisher_update: dimension mismatch");
  if (!std::isfinite(gamma)) throw ContractViolation("fisher_update: non-finite gamma");
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!std::isfinite(grad(i))) throw ContractViolation("fisher_update: non-finite gradient entry " + std::to_string(i));
    for (Eigen::Index j = 0; j < d; ++j)
      if (!std::isfinite(hess(i, j)))
        throw ContractViolation("fisher_update: non-finite hessian entry (" + std::to_string(i) + ", " +
                                std::to_string(j) + ")");
  }
  FisherState out;
  out.G = state.G + gamma * (grad - state.G);
  Eigen::MatrixXd h = state.H + gamma * (hess + grad * grad.transpose() - state.H);
  Eigen::MatrixXd f = h - out.G * out.G.transpose();
  out.asymmetry = std::max({state.asymmetry, relative_asymmetry(h), relative_asymmetry(f)});
  out.H = 0.5 * (h + h.transpose());
  out.F = 0.5 * (f + f.transpose());
  return out;
}

StandardErrors standard_errors(const Eigen::MatrixXd& F) {
  const auto d = static_cast<std::size_t>(F.rows());
  StandardErrors out;
  out.values.assign(d, std::numeric_limits<double>::quiet_NaN());
  if (F.rows() != F.cols()) throw ContractViolation("standard_errors: matrix must be square");
  if (!F.allFinite()) {
    out.warning = "Fisher matrix has non-finite entries";
    return out;
  }
  const Eigen::MatrixXd neg = -0.5 * (F + F.transpose());
  const Eigen::LLT<Eigen::MatrixXd> llt(neg);
  if (llt.info() != Eigen::Success) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(neg, Eigen::EigenvaluesOnly);
    out.warning = "-F is not positive definite (smallest eigenvalue " + std::to_string(eig.eigenvalues()(0)) + ")";
    return out;
  }
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(F.rows(), F.cols()));
  for (std::size_t i = 0; i < d; ++i) out.values[i] = std::sqrt(inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
  out.valid = true;
  return out;
}

std::vector<double> convert_standard_errors(const std::vector<double>& se, const std::vector<double>& jacobian) {
  if (se.size() != jacobian.size()) throw ContractViolation("convert_standard_errors: size mismatch");
  std::vector<double> out(se.size());
  for (std::size_t i = 0; i < se.size(); ++i) out[i] = se[i] / std::abs(jacobian[i]);
  return out;
}

std::vector<double> working_scale_standard_errors(const std::vector<double>& se_natural, const ParameterVector& theta) {
  if (se_natural.size() != theta.size()) throw ContractViolation("working_scale_standard_errors: size mismatch");
  std::vector<double> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i)
    out[i] = theta.specs()[i].domain == Domain::positive ? se_natural[i] / theta[i] : se_natural[i];
  return out;
}

}  // namespace saemabc
