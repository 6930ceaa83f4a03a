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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "saemabc/csv.hpp"
#include "saemabc/experiment.hpp"

using namespace saemabc;
using nlohmann::json;

namespace {

json small_config() {
  return json::parse(R"({
    "model": "nonlinear-gaussian",
    "truth": {"sigma_x": 2.0, "sigma_y": 2.0},
    "grid": {"n": 20, "interval": 1.0, "substeps": 1},
    "algorithm": {"name": "saem-abc", "M": 100, "M_bar": 20, "K": 20, "K1": 10,
                  "schedule": [{"delta": 2.0, "iterations": 10}, {"delta": 1.0, "iterations": 10}]},
    "replicates": 3,
    "data_mode": "shared",
    "start": {"law": "gaussian-around", "center": {"sigma_x": 2.0, "sigma_y": 2.0}, "sd": 0.2},
    "seed": 77
  })");
}

std::string field_of(const json& j) {
  try {
    (void)parse_config(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(Quantile, TypeSevenInterpolation) {
  const std::vector<double> v = {5, 1, 4, 2, 3};
  EXPECT_DOUBLE_EQ(quantile(v, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.25), 2.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.75), 4.0);
  EXPECT_DOUBLE_EQ(quantile({1.0, 2.0}, 0.25), 1.25);
  EXPECT_DOUBLE_EQ(quantile({7.0}, 0.25), 7.0);
}

TEST(Config, ErrorsNameTheField) {
  auto j = small_config();
  j["grid"]["substeps"] = 0;
  EXPECT_EQ(field_of(j), "grid.substeps");
  j = small_config();
  j["algorithm"]["K"] = 25;
  EXPECT_EQ(field_of(j), "algorithm.schedule");
  j = small_config();
  j["model"] = "unknown";
  EXPECT_EQ(field_of(j), "model");
  j = small_config();
  j["data_mode"] = "other";
  EXPECT_EQ(field_of(j), "data_mode");
  j = small_config();
  j["start"].erase("center");
  EXPECT_EQ(field_of(j), "start.center");
  EXPECT_EQ(field_of(small_config()), "");
}

TEST(Config, DottedOverrides) {
  auto j = small_config();
  apply_override(j, "algorithm.M", "250");
  apply_override(j, "algorithm.kernel", "uniform");
  apply_override(j, "report.log_scale", "true");
  EXPECT_EQ(j["algorithm"]["M"], 250);
  EXPECT_EQ(j["algorithm"]["kernel"], "uniform");
  EXPECT_EQ(j["report"]["log_scale"], true);
  const auto cfg = parse_config(j);
  EXPECT_EQ(cfg.particles, 250u);
  EXPECT_EQ(cfg.kernel, KernelKind::uniform);
  EXPECT_TRUE(cfg.log_scale);
}

TEST(Config, DefaultsAreFilledIn) {
  auto j = small_config();
  j["algorithm"].erase("M_bar");
  const auto cfg = parse_config(j);
  EXPECT_DOUBLE_EQ(cfg.resample_threshold, 20.0);
  EXPECT_EQ(cfg.seed, 77u);
  EXPECT_EQ(replicate_seed(cfg.seed, 3), 77u ^ 3u);
}

TEST(Experiment, SingleReplicateAggregateEqualsEstimate) {
  auto j = small_config();
  j["replicates"] = 1;
  const auto rep = run_experiment(parse_config(j), std::nullopt, 1, std::nullopt);
  ASSERT_EQ(rep.succeeded, 1u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(rep.aggregates[i].median, rep.replicates[0].estimate[i]);
    EXPECT_EQ(rep.aggregates[i].q1, rep.replicates[0].estimate[i]);
    EXPECT_EQ(rep.aggregates[i].q3, rep.replicates[0].estimate[i]);
  }
}

TEST(Experiment, DeterministicAndSerializable) {
  const auto cfg = parse_config(small_config());
  const auto a = run_experiment(cfg, std::nullopt, 1, std::nullopt);
  const auto b = run_experiment(cfg, std::nullopt, 2, std::nullopt);
  EXPECT_EQ(a.succeeded + a.failed, 3u);
  ASSERT_EQ(a.replicates.size(), b.replicates.size());
  for (std::size_t i = 0; i < a.replicates.size(); ++i) {
    EXPECT_EQ(a.replicates[i].estimate, b.replicates[i].estimate);
    EXPECT_EQ(a.replicates[i].seed, replicate_seed(77, i));
  }
  const auto back = ExperimentReport::from_json(json::parse(a.to_json().dump()));
  EXPECT_EQ(back.to_json(), a.to_json());
  EXPECT_EQ(back.parameter_names, (std::vector<std::string>{"sigma_x", "sigma_y"}));
}

TEST(Experiment, WritesOutputFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "saemabc_test_experiment";
  std::filesystem::remove_all(dir);
  auto j = small_config();
  j["replicates"] = 2;
  (void)run_experiment(parse_config(j), std::nullopt, 1, dir);
  for (const char* f : {"report.json", "summary.csv", "summary.txt", "replicate_000_trace.csv",
                        "replicate_001_diagnostics.csv"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  std::filesystem::remove_all(dir);
}

TEST(Summary, RejectsMismatchedParameters) {
  ExperimentReport a, b;
  a.parameter_names = {"sigma_x", "sigma_y"};
  b.parameter_names = {"a", "sigma_x", "sigma_y"};
  EXPECT_THROW((void)summarize({a, b}), std::runtime_error);
  a.algorithm = "saem-abc";
  a.succeeded = 30;
  a.aggregates = {{"sigma_x", 1.234, 1.0, 1.5}, {"sigma_y", 2.0, 1.9, 2.1}};
  std::ostringstream os;
  write_summary_text(os, summarize({a}));
  EXPECT_NE(os.str().find("1.23 [1.00,1.50]"), std::string::npos) << os.str();
}

TEST(Dataset, CsvRoundTripAndDeterministicGeneration) {
  const auto cfg = parse_config(small_config());
  const auto model = make_model(cfg.model);
  const auto grid = make_grid(cfg);
  const auto d1 = generate_data(cfg, *model, 5);
  const auto d2 = generate_data(cfg, *model, 5);
  std::ostringstream o1, o2;
  write_dataset_csv(o1, grid, d1.observations, &d1.path);
  write_dataset_csv(o2, grid, d2.observations, &d2.path);
  EXPECT_EQ(o1.str(), o2.str());
  std::istringstream in(o1.str());
  const auto back = read_dataset_csv(in);
  ASSERT_EQ(back.observations.size(), 20u);
  for (std::size_t j = 1; j <= 20; ++j) EXPECT_EQ(back.observations.at(j)[0], d1.observations.at(j)[0]);
  ASSERT_TRUE(back.x_true.has_value());
  std::istringstream bad("time,y\n1,abc\n");
  EXPECT_THROW((void)read_dataset_csv(bad), std::runtime_error);
}
