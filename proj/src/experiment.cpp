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

#include "saemabc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "saemabc/errors.hpp"
#include "saemabc/gibbs.hpp"
#include "saemabc/linear_gaussian.hpp"
#include "saemabc/mcmc.hpp"
#include "saemabc/nonlinear_gaussian.hpp"
#include "saemabc/pmm.hpp"
#include "saemabc/saem.hpp"
#include "saemabc/theophylline.hpp"

namespace saemabc {

using nlohmann::json;

namespace {

const json* find(const json& obj, const std::string& key) {
  if (!obj.is_object()) return nullptr;
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const std::string& key, const std::string& field, std::optional<double> fallback) {
  const json* v = find(obj, key);
  if (v == nullptr) {
    if (fallback) return *fallback;
    throw ConfigError(field, "is required");
  }
  if (!v->is_number()) throw ConfigError(field, "must be a number");
  const double d = v->get<double>();
  if (!std::isfinite(d)) throw ConfigError(field, "must be finite");
  return d;
}

std::size_t get_count(const json& obj, const std::string& key, const std::string& field,
                      std::optional<std::size_t> fallback, std::size_t minimum = 1) {
  const json* v = find(obj, key);
  if (v == nullptr) {
    if (fallback) return *fallback;
    throw ConfigError(field, "is required");
  }
  if (!v->is_number_integer() || v->get<long long>() < static_cast<long long>(minimum))
    throw ConfigError(field, "must be an integer >= " + std::to_string(minimum));
  return v->get<std::size_t>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& field,
                       std::optional<std::string> fallback) {
  const json* v = find(obj, key);
  if (v == nullptr) {
    if (fallback) return *fallback;
    throw ConfigError(field, "is required");
  }
  if (!v->is_string()) throw ConfigError(field, "must be a string");
  return v->get<std::string>();
}

/// Values keyed by parameter name (object) or given in model order (array).
std::vector<double> parameter_values(const json& v, const std::vector<ParameterSpec>& specs, const std::string& field) {
  std::vector<double> out(specs.size());
  if (v.is_array()) {
    if (v.size() != specs.size())
      throw ConfigError(field, "needs " + std::to_string(specs.size()) + " values");
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(field + "[" + std::to_string(i) + "]", "must be a number");
      out[i] = v[i].get<double>();
    }
  } else if (v.is_object()) {
    for (const auto& [k, _] : v.items()) {
      const bool known = std::any_of(specs.begin(), specs.end(), [&](const ParameterSpec& s) { return s.name == k; });
      if (!known) throw ConfigError(field + "." + k, "unknown parameter");
    }
    for (std::size_t i = 0; i < specs.size(); ++i)
      out[i] = get_number(v, specs[i].name, field + "." + specs[i].name, std::nullopt);
  } else {
    throw ConfigError(field, "must be an object keyed by parameter name or an array");
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!std::isfinite(out[i])) throw ConfigError(field + "." + specs[i].name, "must be finite");
    if (specs[i].domain == Domain::positive && !(out[i] > 0.0))
      throw ConfigError(field + "." + specs[i].name, "must be positive");
  }
  return out;
}

Prior parse_prior(const json& v, const std::string& field) {
  if (v.is_string()) {
    if (v.get<std::string>() == "flat-log") return Prior::flat_log();
    throw ConfigError(field, "unknown prior '" + v.get<std::string>() + "'");
  }
  if (const json* u = find(v, "uniform")) {
    if (!u->is_array() || u->size() != 2 || !(*u)[0].is_number() || !(*u)[1].is_number())
      throw ConfigError(field + ".uniform", "must be [lo, hi]");
    const double lo = (*u)[0].get<double>();
    const double hi = (*u)[1].get<double>();
    if (!(lo < hi)) throw ConfigError(field + ".uniform", "needs lo < hi");
    return Prior::uniform(lo, hi);
  }
  throw ConfigError(field, "must be \"flat-log\" or {\"uniform\": [lo, hi]}");
}

const std::vector<std::string> kAlgorithms = {"saem-abc", "saem-smc", "rejection-saem", "gibbs", "pmm"};

bool is_saem(const std::string& a) { return a == "saem-abc" || a == "saem-smc" || a == "rejection-saem"; }

std::string pad_index(std::size_t i) {
  std::ostringstream os;
  os << std::setw(3) << std::setfill('0') << i;
  return os.str();
}

}  // namespace

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
}

void apply_override(json& config, const std::string& dotted_key, const std::string& value) {
  if (dotted_key.empty()) throw ConfigError(dotted_key, "empty override key");
  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted_key.find('.', start);
    const std::string part = dotted_key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(dotted_key, "malformed override key");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError(dotted_key, "override path crosses a non-object value");
      *node = json::object();
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  json parsed = json::parse(value, nullptr, false);
  *node = parsed.is_discarded() ? json(value) : parsed;
}

std::unique_ptr<StateSpaceModel> make_model(const std::string& id) {
  if (id == "nonlinear-gaussian") return std::make_unique<NonlinearGaussianModel>();
  if (id == "theophylline") return std::make_unique<TheophyllineModel>();
  if (id == "linear-gaussian") return std::make_unique<LinearGaussianModel>();
  throw ConfigError("model", "unknown model '" + id + "'");
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "must be a JSON object");
  ExperimentConfig c;
  c.source = j;
  c.model = get_string(j, "model", "model", std::nullopt);
  const auto model = make_model(c.model);
  const auto specs = model->parameter_specs();

  const json* truth = find(j, "truth");
  if (truth == nullptr) throw ConfigError("truth", "is required");
  c.truth = parameter_values(*truth, specs, "truth");

  const json empty = json::object();
  const json* grid = find(j, "grid");
  const json& g = grid != nullptr ? *grid : empty;
  c.n = get_count(g, "n", "grid.n", std::nullopt);
  c.interval = get_number(g, "interval", "grid.interval", 1.0);
  if (!(c.interval > 0.0)) throw ConfigError("grid.interval", "must be positive");
  c.substeps = get_count(g, "substeps", "grid.substeps", 1);
  c.t0 = get_number(g, "t0", "grid.t0", 0.0);

  const json* alg = find(j, "algorithm");
  if (alg == nullptr || !alg->is_object()) throw ConfigError("algorithm", "is required and must be an object");
  const json& a = *alg;
  c.algorithm = get_string(a, "name", "algorithm.name", std::nullopt);
  if (std::find(kAlgorithms.begin(), kAlgorithms.end(), c.algorithm) == kAlgorithms.end())
    throw ConfigError("algorithm.name", "unknown algorithm '" + c.algorithm + "'");

  c.particles = get_count(a, "M", "algorithm.M", 1000);
  c.resample_threshold = get_number(a, "M_bar", "algorithm.M_bar", static_cast<double>(c.particles) / 5.0);
  if (c.resample_threshold < 0.0 || c.resample_threshold > static_cast<double>(c.particles))
    throw ConfigError("algorithm.M_bar", "must lie in [0, M]");

  if (is_saem(c.algorithm)) {
    c.iterations = get_count(a, "K", "algorithm.K", std::nullopt);
    c.warmup = get_count(a, "K1", "algorithm.K1", std::nullopt, 0);
    if (c.warmup >= c.iterations) throw ConfigError("algorithm.K1", "must be smaller than K");
  }
  if (c.algorithm == "saem-abc" || c.algorithm == "rejection-saem") {
    const json* s = find(a, "schedule");
    if (s == nullptr || !s->is_array() || s->empty())
      throw ConfigError("algorithm.schedule", "a non-empty list of {delta, iterations} is required");
    std::size_t total = 0;
    for (std::size_t l = 0; l < s->size(); ++l) {
      const std::string f = "algorithm.schedule[" + std::to_string(l) + "]";
      const double d = get_number((*s)[l], "delta", f + ".delta", std::nullopt);
      const std::size_t k = get_count((*s)[l], "iterations", f + ".iterations", std::nullopt);
      if (!(d > 0.0)) throw ConfigError(f + ".delta", "must be positive");
      if (l > 0 && !(d < c.schedule.back().delta)) throw ConfigError(f + ".delta", "deltas must strictly decrease");
      c.schedule.push_back({d, k});
      total += k;
    }
    if (total != c.iterations)
      throw ConfigError("algorithm.schedule", "iterations sum to " + std::to_string(total) + " but K = " +
                                                  std::to_string(c.iterations));
    const std::string kernel = get_string(a, "kernel", "algorithm.kernel", "gaussian");
    if (kernel == "gaussian") {
      c.kernel = KernelKind::gaussian;
    } else if (kernel == "uniform") {
      c.kernel = KernelKind::uniform;
    } else {
      throw ConfigError("algorithm.kernel", "must be gaussian or uniform");
    }
    c.max_attempts = get_count(a, "max_attempts", "algorithm.max_attempts", 100000);
  }

  if (c.algorithm == "gibbs" || c.algorithm == "pmm") {
    c.chain_length = get_count(a, "chain_length", "algorithm.chain_length", 2000, 2);
    c.burn_fraction = get_number(a, "burn_fraction", "algorithm.burn_fraction", 0.5);
    if (c.burn_fraction < 0.0 || c.burn_fraction >= 1.0) throw ConfigError("algorithm.burn_fraction", "must be in [0, 1)");
    c.target_acceptance =
        get_number(a, "target_acceptance", "algorithm.target_acceptance", c.algorithm == "pmm" ? 0.07 : 0.44);
    if (!(c.target_acceptance > 0.0 && c.target_acceptance < 1.0))
      throw ConfigError("algorithm.target_acceptance", "must be in (0, 1)");
    const json* pri = find(a, "priors");
    c.priors.resize(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const std::string f = "algorithm.priors." + specs[i].name;
      const json* p = pri != nullptr ? find(*pri, specs[i].name) : nullptr;
      if (p != nullptr) {
        c.priors[i] = parse_prior(*p, f);
        if (c.priors[i].kind == Prior::Kind::flat_log && specs[i].domain != Domain::positive)
          throw ConfigError(f, "flat-log needs a positive parameter");
      } else if (specs[i].domain == Domain::positive) {
        c.priors[i] = Prior::uniform(0.1, 15.0);
      } else {
        throw ConfigError(f, "is required for an unconstrained parameter");
      }
    }
    if (const json* sd = find(a, "proposal_sd")) {
      c.proposal_sd = parameter_values(*sd, std::vector<ParameterSpec>(specs.size(), {"", Domain::positive}),
                                       "algorithm.proposal_sd");
      if (sd->is_object()) c.proposal_sd = parameter_values(*sd, [&] {
        auto s2 = specs;
        for (auto& s : s2) s.domain = Domain::positive;
        return s2;
      }(), "algorithm.proposal_sd");
    }
    c.gibbs_step = get_number(a, "step", "algorithm.step", 0.2);
    if (!(c.gibbs_step > 0.0)) throw ConfigError("algorithm.step", "must be positive");
    if (c.algorithm == "gibbs") {
      if (!model->has_transition_density()) throw ConfigError("algorithm.name", "gibbs needs a transition density");
      std::string scale = get_string(a, "state_scale", "algorithm.state_scale", "sigma_x");
      const auto it = std::find_if(specs.begin(), specs.end(), [&](const ParameterSpec& s) { return s.name == scale; });
      if (it == specs.end() || it->domain != Domain::positive)
        throw ConfigError("algorithm.state_scale", "must name a positive parameter of the model");
      c.state_scale_index = static_cast<std::size_t>(it - specs.begin());
    }
  }

  c.replicates = get_count(j, "replicates", "replicates", 1);
  const std::string mode = get_string(j, "data_mode", "data_mode", "shared");
  if (mode != "shared" && mode != "fresh") throw ConfigError("data_mode", "must be shared or fresh");
  c.fresh_data = mode == "fresh";

  const json* start = find(j, "start");
  if (start == nullptr) {
    c.start = {StartLaw::Kind::fixed, c.truth, 0.0};
  } else {
    const std::string law = get_string(*start, "law", "start.law", "fixed");
    const json* center = find(*start, "center");
    if (law == "fixed") {
      c.start.kind = StartLaw::Kind::fixed;
      c.start.center = center != nullptr ? parameter_values(*center, specs, "start.center") : c.truth;
    } else if (law == "gaussian-around") {
      c.start.kind = StartLaw::Kind::gaussian_around;
      if (center == nullptr) throw ConfigError("start.center", "is required for gaussian-around");
      c.start.center = parameter_values(*center, specs, "start.center");
      c.start.sd = get_number(*start, "sd", "start.sd", std::nullopt);
      if (c.start.sd < 0.0) throw ConfigError("start.sd", "must be non-negative");
    } else {
      throw ConfigError("start.law", "must be fixed or gaussian-around");
    }
  }

  if (const json* s = find(j, "seed")) {
    if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0))
      throw ConfigError("seed", "must be a non-negative integer");
    c.seed = s->get<std::uint64_t>();
  }
  if (const json* r = find(j, "report")) {
    if (const json* ls = find(*r, "log_scale")) {
      if (!ls->is_boolean()) throw ConfigError("report.log_scale", "must be a boolean");
      c.log_scale = ls->get<bool>();
    }
  }
  return c;
}

TimeGrid make_grid(const ExperimentConfig& cfg) { return TimeGrid(cfg.t0, cfg.interval, cfg.n, cfg.substeps); }

SimulatedData generate_data(const ExperimentConfig& cfg, const StateSpaceModel& model, std::uint64_t seed) {
  Rng rng(seed);
  return simulate_dataset(model, make_grid(cfg), model.make_parameters(cfg.truth), rng);
}

ParameterVector starting_value(const ExperimentConfig& cfg, const StateSpaceModel& model, std::uint64_t seed) {
  const ParameterVector center = model.make_parameters(cfg.start.center);
  if (cfg.start.kind == StartLaw::Kind::fixed) return center;
  Rng rng = Rng::substream(seed, {3});
  auto w = center.to_working();
  for (double& v : w) v += cfg.start.sd * rng.normal();
  return ParameterVector::from_working(model.parameter_specs(), w);
}

namespace {

std::vector<double> chain_sd(const ChainRecord& chain, std::size_t burn) {
  std::vector<double> out;
  for (std::size_t i = 0; i < chain.parameter_names.size(); ++i) {
    const auto c = chain.column(i, burn);
    const double mu = chain.mean(i, burn);
    double ss = 0.0;
    for (double v : c) ss += (v - mu) * (v - mu);
    out.push_back(c.size() > 1 ? std::sqrt(ss / static_cast<double>(c.size() - 1)) : 0.0);
  }
  return out;
}

}  // namespace

ReplicateResult run_replicate(const ExperimentConfig& cfg, const StateSpaceModel& model, const TimeGrid& grid,
                              const ObservationSeries& shared_data, std::size_t index) {
  ReplicateResult r;
  r.index = index;
  r.seed = replicate_seed(cfg.seed, index);
  const auto t_begin = std::chrono::steady_clock::now();
  try {
    ObservationSeries fresh;
    if (cfg.fresh_data) fresh = generate_data(cfg, model, derive_key(r.seed, {2})).observations;
    const ObservationSeries& y = cfg.fresh_data ? fresh : shared_data;
    const ParameterVector theta0 = starting_value(cfg, model, r.seed);
    r.start = theta0.values();
    Rng rng = Rng::substream(r.seed, {1});
    const FilterSettings fs{cfg.particles, cfg.resample_threshold};

    if (is_saem(cfg.algorithm)) {
      FilterSpec spec = BootstrapFilterSpec{fs};
      if (cfg.algorithm == "saem-abc") {
        spec = AbcFilterSpec{cfg.kernel == KernelKind::gaussian ? KernelSpec::gaussian() : KernelSpec::uniform(),
                             ThresholdSchedule(cfg.schedule), fs};
      } else if (cfg.algorithm == "rejection-saem") {
        spec = RejectionFilterSpec{ThresholdSchedule(cfg.schedule), cfg.max_attempts, {}, {}};
      }
      FilterDiagnostics last;
      bool have_diag = false;
      SaemObserver obs;
      obs.on_filter = [&](std::size_t, const FilterDiagnostics& d) {
        last = d;
        have_diag = true;
      };
      const SaemResult res = run_saem(model, grid, y, theta0, StepSizeSchedule(cfg.iterations, cfg.warmup), spec, rng, &obs);
      r.estimate = res.theta.values();
      r.se = res.se_natural;
      r.warnings = res.warnings;
      std::ostringstream trace;
      write_trace_csv(trace, res.theta.names(), res.trace);
      r.trace_csv = trace.str();
      r.trace_file = "replicate_" + pad_index(index) + "_trace.csv";
      if (have_diag) {
        std::ostringstream diag;
        write_diagnostics_csv(diag, last);
        r.diagnostics_csv = diag.str();
        r.diagnostics_file = "replicate_" + pad_index(index) + "_diagnostics.csv";
      }
    } else {
      ChainRecord chain;
      if (cfg.algorithm == "gibbs") {
        GibbsSettings gs;
        gs.iterations = cfg.chain_length;
        gs.state_scale_index = cfg.state_scale_index;
        gs.initial_step = cfg.gibbs_step;
        gs.target_acceptance = cfg.target_acceptance;
        GibbsSampler sampler(model, grid, y, cfg.priors, gs);
        chain = sampler.run(theta0, rng);
      } else {
        PmmSettings ps;
        ps.iterations = cfg.chain_length;
        ps.target_acceptance = cfg.target_acceptance;
        ps.proposal_sd = cfg.proposal_sd;
        chain = pmm_run(model, grid, y, cfg.priors, theta0, fs, ps, rng);
      }
      const auto burn = static_cast<std::size_t>(cfg.burn_fraction * static_cast<double>(chain.size()));
      for (std::size_t i = 0; i < chain.parameter_names.size(); ++i) {
        r.estimate.push_back(chain.mean(i, burn));
        r.chain_columns.push_back(chain.column(i, burn));
      }
      r.se = chain_sd(chain, burn);
      std::ostringstream os;
      write_chain_csv(os, chain);
      r.trace_csv = os.str();
      r.trace_file = "replicate_" + pad_index(index) + "_chain.csv";
    }
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  return r;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw ContractViolation("quantile: no values");
  if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation("quantile: p must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<Aggregate> aggregate(const std::vector<std::string>& names, const std::vector<ReplicateResult>& reps,
                                 bool log_scale) {
  std::vector<Aggregate> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::vector<double> v;
    for (const auto& r : reps)
      if (r.ok) v.push_back(log_scale ? std::log(r.estimate.at(i)) : r.estimate.at(i));
    if (v.empty()) {
      constexpr double nan = std::numeric_limits<double>::quiet_NaN();
      out.push_back({names[i], nan, nan, nan});
    } else {
      out.push_back({names[i], quantile(v, 0.5), quantile(v, 0.25), quantile(v, 0.75)});
    }
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const std::optional<ObservationSeries>& data,
                                std::size_t jobs, const std::optional<std::filesystem::path>& out_dir) {
  const auto model = make_model(cfg.model);
  const TimeGrid grid = make_grid(cfg);
  ObservationSeries shared;
  if (data) {
    if (data->size() != grid.n()) throw ConfigError("--data", "dataset length does not match grid.n");
    shared = *data;
  } else if (!cfg.fresh_data) {
    shared = generate_data(cfg, *model, cfg.seed).observations;
  }

  ExperimentReport report;
  report.model = cfg.model;
  report.algorithm = cfg.algorithm;
  report.truth = cfg.truth;
  report.log_scale = cfg.log_scale;
  for (const auto& s : model->parameter_specs()) report.parameter_names.push_back(s.name);
  report.replicates.resize(cfg.replicates);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.replicates; i = next++)
      report.replicates[i] = run_replicate(cfg, *model, grid, shared, i);
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, cfg.replicates));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& r : report.replicates) (r.ok ? report.succeeded : report.failed)++;
  report.aggregates = aggregate(report.parameter_names, report.replicates, cfg.log_scale);
  if (!is_saem(cfg.algorithm) && report.succeeded >= 2) {
    for (std::size_t i = 0; i < report.parameter_names.size(); ++i) {
      std::vector<std::vector<double>> chains;
      for (const auto& r : report.replicates)
        if (r.ok) chains.push_back(r.chain_columns[i]);
      report.gelman_rubin.push_back(gelman_rubin(chains));
    }
  }

  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    for (const auto& r : report.replicates) {
      if (!r.trace_file.empty()) std::ofstream(*out_dir / r.trace_file) << r.trace_csv;
      if (!r.diagnostics_file.empty()) std::ofstream(*out_dir / r.diagnostics_file) << r.diagnostics_csv;
    }
    std::ofstream(*out_dir / "report.json") << report.to_json().dump(2) << '\n';
    const SummaryTable table = summarize({report});
    std::ofstream csv(*out_dir / "summary.csv");
    write_summary_csv(csv, table);
    std::ofstream txt(*out_dir / "summary.txt");
    write_summary_text(txt, table);
  }
  return report;
}

json ExperimentReport::to_json() const {
  json j;
  j["model"] = model;
  j["algorithm"] = algorithm;
  j["parameters"] = parameter_names;
  j["truth"] = truth;
  j["succeeded"] = succeeded;
  j["failed"] = failed;
  j["log_scale"] = log_scale;
  j["replicates"] = json::array();
  for (const auto& r : replicates) {
    json e;
    e["index"] = r.index;
    e["seed"] = r.seed;
    e["ok"] = r.ok;
    if (!r.ok) e["error"] = r.error;
    e["start"] = r.start;
    e["estimate"] = r.estimate;
    json se = json::array();
    for (double v : r.se) se.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    e["se"] = se;
    e["wall_seconds"] = r.wall_seconds;
    e["trace_file"] = r.trace_file;
    e["diagnostics_file"] = r.diagnostics_file;
    e["warnings"] = r.warnings.size();
    j["replicates"].push_back(e);
  }
  j["aggregate"] = json::object();
  for (const auto& a : aggregates) j["aggregate"][a.parameter] = {{"median", a.median}, {"q1", a.q1}, {"q3", a.q3}};
  if (!gelman_rubin.empty()) j["gelman_rubin"] = gelman_rubin;
  return j;
}

ExperimentReport ExperimentReport::from_json(const json& j) {
  ExperimentReport r;
  r.model = j.at("model").get<std::string>();
  r.algorithm = j.at("algorithm").get<std::string>();
  r.parameter_names = j.at("parameters").get<std::vector<std::string>>();
  r.truth = j.value("truth", std::vector<double>{});
  r.log_scale = j.value("log_scale", false);
  for (const auto& e : j.at("replicates")) {
    ReplicateResult rep;
    rep.index = e.at("index").get<std::size_t>();
    rep.seed = e.at("seed").get<std::uint64_t>();
    rep.ok = e.at("ok").get<bool>();
    rep.error = e.value("error", std::string());
    rep.start = e.value("start", std::vector<double>{});
    rep.estimate = e.at("estimate").get<std::vector<double>>();
    for (const auto& v : e.value("se", json::array()))
      rep.se.push_back(v.is_number() ? v.get<double>() : std::numeric_limits<double>::quiet_NaN());
    rep.wall_seconds = e.value("wall_seconds", 0.0);
    rep.trace_file = e.value("trace_file", std::string());
    rep.diagnostics_file = e.value("diagnostics_file", std::string());
    (rep.ok ? r.succeeded : r.failed)++;
    r.replicates.push_back(std::move(rep));
  }
  r.aggregates = aggregate(r.parameter_names, r.replicates, r.log_scale);
  r.gelman_rubin = j.value("gelman_rubin", std::vector<double>{});
  return r;
}

SummaryTable summarize(const std::vector<ExperimentReport>& reports) {
  if (reports.empty()) throw std::runtime_error("summarize: at least one report is required");
  SummaryTable t;
  t.parameters = reports.front().parameter_names;
  for (const auto& r : reports) {
    if (r.parameter_names != t.parameters)
      throw std::runtime_error("summarize: report for " + r.algorithm + " has a different parameter set");
    t.rows.push_back({r.algorithm, r.succeeded, r.aggregates});
  }
  return t;
}

void write_summary_csv(std::ostream& os, const SummaryTable& table) {
  os << "method,replicates";
  for (const auto& p : table.parameters) os << ',' << p << "_median," << p << "_q1," << p << "_q3";
  os << '\n';
  const auto old = os.precision(17);
  for (const auto& row : table.rows) {
    os << row.label << ',' << row.count;
    for (const auto& c : row.cells) os << ',' << c.median << ',' << c.q1 << ',' << c.q3;
    os << '\n';
  }
  os.precision(old);
}

void write_summary_text(std::ostream& os, const SummaryTable& table) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header = {"method"};
  for (const auto& p : table.parameters) header.push_back(p);
  cells.push_back(header);
  for (const auto& row : table.rows) {
    std::vector<std::string> line = {row.label};
    for (const auto& c : row.cells) {
      std::ostringstream s;
      s << std::fixed << std::setprecision(2) << c.median << " [" << c.q1 << "," << c.q3 << "]";
      line.push_back(s.str());
    }
    cells.push_back(line);
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      os << std::left << std::setw(static_cast<int>(width[i])) << line[i];
      os << (i + 1 < line.size() ? "  " : "\n");
    }
  }
}

}  // namespace saemabc
