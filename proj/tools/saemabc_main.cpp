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

// saemabc command-line front end.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "saemabc/csv.hpp"
#include "saemabc/errors.hpp"
#include "saemabc/experiment.hpp"
#include "saemabc/particle_filter.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace saemabc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitAllFailed = 3;

/// Turns leftover "--a.b value" / "--a.b=value" arguments into config overrides.
void apply_extras(json& config, const std::vector<std::string>& extras) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0) throw ConfigError(arg, "unexpected argument");
    std::string key = arg.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) throw ConfigError(key, "override needs a value");
      value = extras[++i];
    }
    apply_override(config, key, value);
  }
}

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
};

ExperimentConfig load(const Common& c, const std::vector<std::string>& extras) {
  json j = load_config_file(c.config_path);
  apply_extras(j, extras);
  if (c.seed) j["seed"] = *c.seed;
  return parse_config(j);
}

std::optional<ObservationSeries> load_data(const std::string& path, const ExperimentConfig& cfg) {
  if (path.empty()) return std::nullopt;
  std::ifstream in(path);
  if (!in) throw ConfigError("--data", "cannot open " + path);
  Dataset d = read_dataset_csv(in);
  if (d.observations.size() != cfg.n)
    throw ConfigError("--data", "dataset has " + std::to_string(d.observations.size()) + " rows but grid.n = " +
                                    std::to_string(cfg.n));
  return d.observations;
}

int cmd_generate(const ExperimentConfig& cfg, const fs::path& out) {
  fs::create_directories(out);
  const auto model = make_model(cfg.model);
  const TimeGrid grid = make_grid(cfg);
  const SimulatedData data = generate_data(cfg, *model, cfg.seed);
  std::ofstream ds(out / "dataset.csv");
  write_dataset_csv(ds, grid, data.observations, &data.path);
  std::ofstream tr(out / "dataset_truth.csv");
  write_truth_csv(tr, grid, data.path);
  if (!ds || !tr) throw std::runtime_error("failed writing dataset files in " + out.string());
  std::cout << "wrote " << (out / "dataset.csv").string() << " (" << grid.n() << " rows) and "
            << (out / "dataset_truth.csv").string() << " (" << grid.fine_steps() + 1 << " rows)\n";
  return 0;
}

int cmd_estimate(const ExperimentConfig& cfg, const std::optional<ObservationSeries>& data, std::size_t jobs,
                 const fs::path& out) {
  const ExperimentReport report = run_experiment(cfg, data, jobs, out);
  for (const auto& r : report.replicates)
    if (!r.ok) std::cerr << "replicate " << r.index << " failed: " << r.error << '\n';
  write_summary_text(std::cout, summarize({report}));
  std::cout << report.succeeded << " succeeded, " << report.failed << " failed; outputs in " << out.string() << '\n';
  return report.succeeded == 0 ? kExitAllFailed : 0;
}

int cmd_summarize(const std::vector<std::string>& files, const fs::path& out) {
  std::vector<ExperimentReport> reports;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw std::runtime_error("cannot open " + f);
    reports.push_back(ExperimentReport::from_json(json::parse(in)));
  }
  const SummaryTable table = summarize(reports);
  fs::create_directories(out);
  std::ofstream csv(out / "summary.csv");
  write_summary_csv(csv, table);
  std::ofstream txt(out / "summary.txt");
  write_summary_text(txt, table);
  write_summary_text(std::cout, table);
  return 0;
}

/// One filter pass at the starting value with the final threshold of the schedule.
int cmd_diagnose(const ExperimentConfig& cfg, const std::optional<ObservationSeries>& data, const fs::path& out) {
  const auto model = make_model(cfg.model);
  const TimeGrid grid = make_grid(cfg);
  const ObservationSeries y = data ? *data : generate_data(cfg, *model, cfg.seed).observations;
  const ParameterVector theta = starting_value(cfg, *model, replicate_seed(cfg.seed, 0));
  Rng rng = Rng::substream(cfg.seed, {4});
  const FilterSettings fs{cfg.particles, cfg.resample_threshold};
  FilterResult res;
  if (cfg.algorithm == "saem-abc") {
    const KernelSpec kernel = cfg.kernel == KernelKind::gaussian ? KernelSpec::gaussian() : KernelSpec::uniform();
    res = run_abc_smc(*model, grid, y, theta, fs, cfg.schedule.back().delta, kernel, rng);
  } else {
    res = run_bootstrap(*model, grid, y, theta, fs, rng);
  }
  fs::create_directories(out);
  std::ofstream os(out / "diagnostics.csv");
  write_diagnostics_csv(os, res.diagnostics);
  std::cout << "mean ESS " << res.diagnostics.mean_ess() << ", mean distinct " << res.diagnostics.mean_distinct()
            << ", resampling events " << res.diagnostics.resample_events().size();
  if (cfg.algorithm != "saem-abc") std::cout << ", log-likelihood " << res.diagnostics.log_likelihood;
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate maximum likelihood for state-space models with SAEM and particle filters"};
  app.require_subcommand(1);

  Common common;
  std::string data_path;
  std::size_t jobs = 1;
  std::vector<std::string> report_files;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "Experiment JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "Master seed (overrides the config)");
    sub->add_option("--out", common.out, "Output directory");
    sub->allow_extras();
  };

  auto* gen = app.add_subcommand("generate", "Simulate a dataset and its latent path");
  add_common(gen);
  auto* est = app.add_subcommand("estimate", "Run the configured estimator over all replicates");
  add_common(est);
  est->add_option("--data", data_path, "Dataset CSV (default: simulate from the master seed)");
  est->add_option("--jobs", jobs, "Concurrent replicates")->check(CLI::PositiveNumber);
  auto* sum = app.add_subcommand("summarize", "Median and quartile table from report files");
  sum->add_option("reports", report_files, "report.json files")->required()->check(CLI::ExistingFile);
  sum->add_option("--out", common.out, "Output directory");
  auto* diag = app.add_subcommand("diagnose", "Emit filter diagnostics at the starting value");
  add_common(diag);
  diag->add_option("--data", data_path, "Dataset CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (sum->parsed()) return cmd_summarize(report_files, common.out);
    CLI::App* sub = gen->parsed() ? gen : est->parsed() ? est : diag;
    const ExperimentConfig cfg = load(common, sub->remaining());
    if (gen->parsed()) return cmd_generate(cfg, common.out);
    const auto data = load_data(data_path, cfg);
    if (est->parsed()) return cmd_estimate(cfg, data, jobs, common.out);
    return cmd_diagnose(cfg, data, common.out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
