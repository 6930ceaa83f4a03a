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

#ifndef SAEMABC_EXPERIMENT_HPP
#define SAEMABC_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "saemabc/kernels.hpp"
#include "saemabc/model.hpp"
#include "saemabc/priors.hpp"

namespace saemabc {

/// Invalid experiment configuration; names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(field) {}
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct StartLaw {
  enum class Kind { fixed, gaussian_around };
  Kind kind = Kind::fixed;
  /// Natural-scale center (or the fixed value).
  std::vector<double> center;
  /// Standard deviation on the working scale.
  double sd = 0.0;
};

struct ExperimentConfig {
  std::string model;
  std::vector<double> truth;
  double t0 = 0.0;
  double interval = 1.0;
  std::size_t n = 50;
  std::size_t substeps = 1;

  std::string algorithm;
  std::size_t particles = 1000;
  double resample_threshold = 200;
  std::size_t iterations = 400;
  std::size_t warmup = 300;
  std::vector<ThresholdLevel> schedule;
  KernelKind kernel = KernelKind::gaussian;
  std::size_t max_attempts = 100000;

  PriorSpec priors;
  std::size_t chain_length = 2000;
  double target_acceptance = 0.07;
  std::vector<double> proposal_sd;
  double gibbs_step = 0.2;
  std::size_t state_scale_index = 0;
  double burn_fraction = 0.5;

  std::size_t replicates = 1;
  bool fresh_data = false;
  StartLaw start;
  std::uint64_t seed = 1;
  bool log_scale = false;

  nlohmann::json source;
};

nlohmann::json load_config_file(const std::filesystem::path& path);

/// Set a dotted key (e.g. "algorithm.M") from its command-line text; the
/// text is parsed as JSON when possible and kept as a string otherwise.
void apply_override(nlohmann::json& config, const std::string& dotted_key, const std::string& value);

/// Validate everything before any run starts. Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& config);

/// Model by identifier: nonlinear-gaussian, theophylline or linear-gaussian.
std::unique_ptr<StateSpaceModel> make_model(const std::string& id);

TimeGrid make_grid(const ExperimentConfig& cfg);

/// Seed of replicate i: master XOR i.
inline std::uint64_t replicate_seed(std::uint64_t master, std::size_t i) { return master ^ static_cast<std::uint64_t>(i); }

/// Dataset simulated at the true parameters from `seed`.
SimulatedData generate_data(const ExperimentConfig& cfg, const StateSpaceModel& model, std::uint64_t seed);

/// Starting value of a replicate drawn from the configured law.
ParameterVector starting_value(const ExperimentConfig& cfg, const StateSpaceModel& model, std::uint64_t seed);

struct ReplicateResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::vector<double> start;
  std::vector<double> estimate;
  /// Natural-scale standard errors (posterior SDs for the samplers).
  std::vector<double> se;
  double wall_seconds = 0.0;
  std::string trace_file;
  std::string diagnostics_file;
  std::vector<std::string> warnings;
  /// File contents kept until the collector writes them.
  std::string trace_csv;
  std::string diagnostics_csv;
  /// Post-burn draws per parameter (samplers only; not serialized).
  std::vector<std::vector<double>> chain_columns;
};

struct Aggregate {
  std::string parameter;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

struct ExperimentReport {
  std::string model;
  std::string algorithm;
  std::vector<std::string> parameter_names;
  std::vector<double> truth;
  std::vector<ReplicateResult> replicates;
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  bool log_scale = false;
  std::vector<Aggregate> aggregates;
  /// Across-replicate R-hat per parameter for the MCMC algorithms.
  std::vector<double> gelman_rubin;

  [[nodiscard]] nlohmann::json to_json() const;
  static ExperimentReport from_json(const nlohmann::json& j);
};

/// Quantile with linear interpolation between order statistics (type 7).
double quantile(std::vector<double> values, double p);

/// Median and quartiles per parameter over successful replicates; values
/// are log-transformed first when `log_scale` is set.
std::vector<Aggregate> aggregate(const std::vector<std::string>& names, const std::vector<ReplicateResult>& reps,
                                 bool log_scale);

/// Run one replicate; failures are captured in the result.
ReplicateResult run_replicate(const ExperimentConfig& cfg, const StateSpaceModel& model, const TimeGrid& grid,
                              const ObservationSeries& shared_data, std::size_t index);

/// Run all replicates on up to `jobs` threads and, when `out_dir` is set,
/// write per-replicate traces/diagnostics, report.json and the summary.
/// `data` overrides the dataset simulated from the master seed.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const std::optional<ObservationSeries>& data,
                                std::size_t jobs, const std::optional<std::filesystem::path>& out_dir);

struct SummaryTable {
  std::vector<std::string> parameters;
  struct Row {
    std::string label;
    std::size_t count = 0;
    std::vector<Aggregate> cells;
  };
  std::vector<Row> rows;
};

/// One row per report. Throws std::runtime_error on differing parameter sets.
SummaryTable summarize(const std::vector<ExperimentReport>& reports);
void write_summary_csv(std::ostream& os, const SummaryTable& table);
/// Aligned text: "median [Q1,Q3]" per parameter.
void write_summary_text(std::ostream& os, const SummaryTable& table);

}  // namespace saemabc

#endif  // SAEMABC_EXPERIMENT_HPP
