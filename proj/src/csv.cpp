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

#include "saemabc/csv.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "saemabc/errors.hpp"

namespace saemabc {

namespace {

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("dataset line " + std::to_string(line) + ": cannot parse '" + s + "'");
  }
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_dataset_csv(std::ostream& os, const TimeGrid& grid, const ObservationSeries& y, const LatentPath* truth) {
  if (y.dim() != 1) throw ContractViolation("write_dataset_csv: scalar observations only");
  if (y.size() != grid.n()) throw ContractViolation("write_dataset_csv: observations do not match the grid");
  os << (truth != nullptr ? "time,y,x_true\n" : "time,y\n");
  const auto old = os.precision(17);
  for (std::size_t j = 1; j <= grid.n(); ++j) {
    os << grid.sampling_time(j) << ',' << y.at(j)[0];
    if (truth != nullptr) os << ',' << truth->at_sample(j)[0];
    os << '\n';
  }
  os.precision(old);
}

void write_truth_csv(std::ostream& os, const TimeGrid& grid, const LatentPath& truth) {
  if (truth.fine_steps() != grid.fine_steps()) throw ContractViolation("write_truth_csv: path does not match grid");
  os << "time,x_true\n";
  const auto old = os.precision(17);
  for (std::size_t i = 0; i <= grid.fine_steps(); ++i) os << grid.fine_time(i) << ',' << truth.state(i)[0] << '\n';
  os.precision(old);
}

Dataset read_dataset_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("dataset is empty");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "time" || header[1] != "y")
    throw std::runtime_error("dataset header must start with time,y");
  const bool has_truth = header.size() >= 3 && header[2] == "x_true";
  std::vector<double> t, y, x;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size())
      throw std::runtime_error("dataset line " + std::to_string(lineno) + ": wrong number of fields");
    t.push_back(parse_double(f[0], lineno));
    y.push_back(parse_double(f[1], lineno));
    if (has_truth) x.push_back(parse_double(f[2], lineno));
  }
  Dataset d{std::move(t), ObservationSeries::scalar(std::move(y)), std::nullopt};
  if (has_truth) d.x_true = std::move(x);
  return d;
}

}  // namespace saemabc
