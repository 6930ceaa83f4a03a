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

#ifndef SAEMABC_REJECTION_ABC_HPP
#define SAEMABC_REJECTION_ABC_HPP

#include <cstddef>

#include "saemabc/kernels.hpp"
#include "saemabc/model.hpp"

namespace saemabc {

struct RejectionResult {
  LatentPath path;
  std::size_t attempts = 0;
  double distance = 0.0;
};

/// Simulate (X*, Y*) forward until rho(eta(Y*), eta(Y)) <= delta, with the
/// distance taken over the whole observation series. rho and eta default to
/// Euclidean and identity.
///
/// Throws AcceptanceFailure after max_attempts rejections and
/// std::domain_error for negative delta.
RejectionResult rejection_abc_path(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                                   const ParameterVector& theta, double delta, const Distance& rho,
                                   const SummaryMap& eta, std::size_t max_attempts, Rng& rng);

}  // namespace saemabc

#endif  // SAEMABC_REJECTION_ABC_HPP
