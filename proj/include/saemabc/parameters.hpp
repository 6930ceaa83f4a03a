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

#ifndef SAEMABC_PARAMETERS_HPP
#define SAEMABC_PARAMETERS_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace saemabc {

enum class Domain { unconstrained, positive };

struct ParameterSpec {
  std::string name;
  Domain domain = Domain::unconstrained;
};

/// Named parameter values on the natural scale.
///
/// Positive components map to the working scale through log; unconstrained
/// components map through the identity.
class ParameterVector {
 public:
  ParameterVector() = default;
  ParameterVector(std::vector<ParameterSpec> specs, std::vector<double> values);

  static ParameterVector from_working(std::vector<ParameterSpec> specs, std::span<const double> working);

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] double value(std::string_view name) const;
  [[nodiscard]] std::size_t index_of(std::string_view name) const;
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] const std::vector<ParameterSpec>& specs() const noexcept { return *specs_; }
  [[nodiscard]] std::vector<std::string> names() const;

  [[nodiscard]] std::vector<double> to_working() const;

  /// Copy with component i replaced (domain-checked).
  [[nodiscard]] ParameterVector with(std::size_t i, double value) const;

  friend bool operator==(const ParameterVector& a, const ParameterVector& b) {
    return a.values_ == b.values_ && a.names() == b.names();
  }

 private:
  std::shared_ptr<const std::vector<ParameterSpec>> specs_ = std::make_shared<const std::vector<ParameterSpec>>();
  std::vector<double> values_;
};

/// Scalar transforms used by ParameterVector.
double to_working(Domain d, double natural);
double to_natural(Domain d, double working);

}  // namespace saemabc

#endif  // SAEMABC_PARAMETERS_HPP
