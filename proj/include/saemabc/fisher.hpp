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

#ifndef SAEMABC_FISHER_HPP
#define SAEMABC_FISHER_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "saemabc/parameters.hpp"

namespace saemabc {

/// Stochastic-approximation accumulators of Louis' missing-information
/// identity: G tracks E[grad], H tracks E[hess + grad grad'], F = H - G G'.
struct FisherState {
  Eigen::VectorXd G;
  Eigen::MatrixXd H;
  Eigen::MatrixXd F;
  /// Largest |M - M'| seen in H or F before symmetrization, relative to max |M|.
  double asymmetry = 0.0;

  static FisherState zero(Eigen::Index dim);
};

/// G' = G + gamma (grad - G); H' = H + gamma (hess + grad grad' - H);
/// F' = H' - G' G'. H' and F' are symmetrized. Non-finite input throws
/// ContractViolation naming the entry.
FisherState fisher_update(const FisherState& state, const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess,
                          double gamma);

struct StandardErrors {
  /// sqrt(diag((-F)^{-1})); NaN entries when -F is not positive definite.
  std::vector<double> values;
  bool valid = false;
  std::string warning;
};

StandardErrors standard_errors(const Eigen::MatrixXd& F);

/// Delta-method conversion of standard errors from a componentwise
/// coordinate c_i(theta_i) to theta_i: se_theta = se_c / |dc/dtheta|.
std::vector<double> convert_standard_errors(const std::vector<double>& se, const std::vector<double>& jacobian);

/// Standard errors on the working scale (log for positive components,
/// identity otherwise) from natural-scale standard errors.
std::vector<double> working_scale_standard_errors(const std::vector<double>& se_natural, const ParameterVector& theta);

}  // namespace saemabc

#endif  // SAEMABC_FISHER_HPP
