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

#ifndef SAEMABC_CSV_HPP
#define SAEMABC_CSV_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "saemabc/model.hpp"

namespace saemabc {

struct Dataset {
  std::vector<double> times;
  ObservationSeries observations;
  /// Latent values at the sampling times, when exported.
  std::optional<std::vector<double>> x_true;
};

/// Header time,y[,x_true]; one row per sampling time. Scalar observations only.
void write_dataset_csv(std::ostream& os, const TimeGrid& grid, const ObservationSeries& y,
                       const LatentPath* truth = nullptr);

/// Header time,x_true; N + 1 rows covering the fine grid from X_0.
void write_truth_csv(std::ostream& os, const TimeGrid& grid, const LatentPath& truth);

/// Parse a dataset written by write_dataset_csv. Throws std::runtime_error
/// on malformed input.
Dataset read_dataset_csv(std::istream& is);

/// Split one CSV line on commas (no quoting).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace saemabc

#endif  // SAEMABC_CSV_HPP
