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

#ifndef SAEMABC_ERRORS_HPP
#define SAEMABC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace saemabc {

/// Raised when a caller breaks a documented precondition (dimensions, ranges).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// All particle weights vanished at one time step.
class DegenerateFilterError : public std::runtime_error {
 public:
  explicit DegenerateFilterError(std::size_t time_index)
      : std::runtime_error("particle filter degenerate: all weights are zero at time index " +
                           std::to_string(time_index)),
        time_index_(time_index) {}

  [[nodiscard]] std::size_t time_index() const noexcept { return time_index_; }

 private:
  std::size_t time_index_;
};

/// Rejection ABC ran out of attempts.
class AcceptanceFailure : public std::runtime_error {
 public:
  AcceptanceFailure(std::size_t attempts, double best_distance)
      : std::runtime_error("rejection ABC: no acceptance after " + std::to_string(attempts) +
                           " attempts (best distance " + std::to_string(best_distance) + ")"),
        attempts_(attempts),
        best_distance_(best_distance) {}

  [[nodiscard]] std::size_t attempts() const noexcept { return attempts_; }
  [[nodiscard]] double best_distance() const noexcept { return best_distance_; }

 private:
  std::size_t attempts_;
  double best_distance_;
};

class SingularRegressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The closed-form M-step produced a value outside the parameter domain.
class MStepDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A SAEM run failed; carries the iteration and, for filter failures, the time index.
class SaemError : public std::runtime_error {
 public:
  SaemError(const std::string& what, std::size_t iteration, std::size_t time_index = 0)
      : std::runtime_error(what), iteration_(iteration), time_index_(time_index) {}

  [[nodiscard]] std::size_t iteration() const noexcept { return iteration_; }
  [[nodiscard]] std::size_t time_index() const noexcept { return time_index_; }

 private:
  std::size_t iteration_;
  std::size_t time_index_;
};

}  // namespace saemabc

#endif  // SAEMABC_ERRORS_HPP
