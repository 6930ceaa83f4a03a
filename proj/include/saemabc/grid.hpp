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

#ifndef SAEMABC_GRID_HPP
#define SAEMABC_GRID_HPP

#include <cstddef>
#include <vector>

namespace saemabc {

/// Equispaced observation grid with an integer number of integration
/// substeps per sampling interval.
///
/// Fine point i sits at t0 + (i * interval) / substeps. Sampling time j is
/// defined as fine point j * substeps, so the two grids agree bitwise.
class TimeGrid {
 public:
  TimeGrid(double t0, double interval, std::size_t n, std::size_t substeps);

  [[nodiscard]] double t0() const noexcept { return t0_; }
  [[nodiscard]] double interval() const noexcept { return interval_; }
  /// Number of observations n.
  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  /// Substeps per sampling interval R.
  [[nodiscard]] std::size_t substeps() const noexcept { return substeps_; }
  /// Number of fine steps N = n * R.
  [[nodiscard]] std::size_t fine_steps() const noexcept { return n_ * substeps_; }
  /// Integration step h = interval / R.
  [[nodiscard]] double step() const noexcept { return interval_ / static_cast<double>(substeps_); }

  /// Fine time tau_i, i in [0, N].
  [[nodiscard]] double fine_time(std::size_t i) const;
  /// Sampling time t_j, j in [1, n].
  [[nodiscard]] double sampling_time(std::size_t j) const;
  /// Fine-grid index of sampling time j.
  [[nodiscard]] std::size_t fine_index(std::size_t j) const noexcept { return j * substeps_; }

  [[nodiscard]] std::vector<double> fine_times() const;
  [[nodiscard]] std::vector<double> sampling_times() const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double t0_;
  double interval_;
  std::size_t n_;
  std::size_t substeps_;
};

}  // namespace saemabc

#endif  // SAEMABC_GRID_HPP
