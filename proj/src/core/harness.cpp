// Copyright 2026 The GDCS Authors
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

#include "gdcs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>
#include <utility>

#include <json.hpp>

#include "gdcs/error.hpp"
#include "gdcs/sensing.hpp"

namespace gdcs {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (length < 1) fail(ErrorCode::kInvalidArgument, "length must be positive");
  if (sensor_count < 2) fail(ErrorCode::kInvalidArgument, "need at least 2 sensors");
  if (full_common < 0 || innovation < 0) fail(ErrorCode::kInvalidArgument, "negative sparsity");
  for (const auto& p : partials) {
    if (p.sparsity < 0) fail(ErrorCode::kInvalidArgument, "negative sparsity");
    const int size = p.sensors ? p.sensors->size() : p.size;
    if (size <= 1 || size >= sensor_count) {
      fail(ErrorCode::kInvalidArgument, "partial common size must satisfy 1 < size < J");
    }
    if (p.sensors && p.sensors->members().back() >= sensor_count) {
      fail(ErrorCode::kInvalidArgument, "partial sensor index out of range");
    }
  }
  if (sweep.empty()) fail(ErrorCode::kInvalidArgument, "measurement sweep is empty");
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (sweep[i] < 0) fail(ErrorCode::kInvalidArgument, "negative measurement count");
    if (i > 0 && sweep[i] <= sweep[i - 1]) {
      fail(ErrorCode::kInvalidArgument, "measurement sweep must be strictly increasing");
    }
  }
  if (trials < 1) fail(ErrorCode::kInvalidArgument, "trials must be at least 1");
  if (methods.empty()) fail(ErrorCode::kInvalidArgument, "no methods selected");
  if (!(resolution > 0.0)) fail(ErrorCode::kInvalidArgument, "resolution must be positive");
  if (threads < 0) fail(ErrorCode::kInvalidArgument, "threads must be non-negative");
  solver.validate();
}

namespace {

template <typename T>
void read_key(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) fail(ErrorCode::kParse, where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) ==
        allowed.end()) {
      fail(ErrorCode::kParse, "unknown key '" + key + "' in " + where);
    }
  }
}

SolverSettings solver_from_json(const json& j) {
  check_keys(j,
             {"method", "primal_tolerance", "dual_tolerance", "max_iterations", "step",
              "reweight_epsilon", "reweight_rounds", "zero_threshold"},
             "solver");
  SolverSettings s;
  if (j.contains("method")) s.method = parse_solver_method(j.at("method").get<std::string>());
  read_key(j, "primal_tolerance", s.primal_tolerance);
  read_key(j, "dual_tolerance", s.dual_tolerance);
  read_key(j, "max_iterations", s.max_iterations);
  read_key(j, "step", s.step);
  read_key(j, "reweight_epsilon", s.reweight_epsilon);
  read_key(j, "reweight_rounds", s.reweight_rounds);
  read_key(j, "zero_threshold", s.zero_threshold);
  return s;
}

std::vector<int> sweep_from_json(const json& j) {
  if (j.is_array()) return j.get<std::vector<int>>();
  check_keys(j, {"from", "to", "step"}, "sweep");
  const int from = j.at("from").get<int>();
  const int to = j.at("to").get<int>();
  const int step = j.value("step", 1);
  if (step < 1) fail(ErrorCode::kParse, "sweep step must be positive");
  std::vector<int> out;
  for (int m = from; m <= to; m += step) out.push_back(m);
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  try {
    const json j = json::parse(text);
    check_keys(j,
               {"length", "sensors", "full_common", "partials", "innovation", "sweep", "trials",
                "methods", "solver", "resolution", "seed", "threads", "timing"},
               "config");
    read_key(j, "length", c.length);
    read_key(j, "sensors", c.sensor_count);
    read_key(j, "full_common", c.full_common);
    read_key(j, "innovation", c.innovation);
    read_key(j, "trials", c.trials);
    read_key(j, "resolution", c.resolution);
    read_key(j, "seed", c.seed);
    read_key(j, "threads", c.threads);
    read_key(j, "timing", c.timing);
    if (j.contains("partials")) {
      for (const auto& p : j.at("partials")) {
        check_keys(p, {"size", "sparsity", "sensors"}, "partials");
        PartialSpec spec;
        spec.sparsity = p.at("sparsity").get<int>();
        if (p.contains("sensors")) {
          spec.sensors = SensorSet(p.at("sensors").get<std::vector<int>>());
          spec.size = spec.sensors->size();
        } else {
          spec.size = p.at("size").get<int>();
        }
        c.partials.push_back(std::move(spec));
      }
    }
    if (j.contains("sweep")) c.sweep = sweep_from_json(j.at("sweep"));
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (j.contains("solver")) c.solver = solver_from_json(j.at("solver"));
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string dump_config(const ExperimentConfig& c) {
  json j;
  j["length"] = c.length;
  j["sensors"] = c.sensor_count;
  j["full_common"] = c.full_common;
  j["partials"] = json::array();
  for (const auto& p : c.partials) {
    json e{{"size", p.size}, {"sparsity", p.sparsity}};
    if (p.sensors) e["sensors"] = p.sensors->members();
    j["partials"].push_back(e);
  }
  j["innovation"] = c.innovation;
  j["sweep"] = c.sweep;
  j["trials"] = c.trials;
  j["methods"] = json::array();
  for (Method m : c.methods) j["methods"].push_back(to_string(m));
  j["solver"] = {{"method", to_string(c.solver.method)},
                 {"primal_tolerance", c.solver.primal_tolerance},
                 {"dual_tolerance", c.solver.dual_tolerance},
                 {"max_iterations", c.solver.max_iterations},
                 {"step", c.solver.step},
                 {"reweight_epsilon", c.solver.reweight_epsilon},
                 {"reweight_rounds", c.solver.reweight_rounds},
                 {"zero_threshold", c.solver.zero_threshold}};
  j["resolution"] = c.resolution;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["timing"] = c.timing;
  return j.dump(2) + "\n";
}

std::uint64_t trial_seed(std::uint64_t master, Method method, int M, int trial) {
  std::uint64_t s = derive_seed(master, static_cast<std::uint64_t>(method_id(method)));
  s = derive_seed(s, static_cast<std::uint64_t>(M));
  return derive_seed(s, static_cast<std::uint64_t>(trial));
}

namespace {

SensorSet random_subset(int J, int size, Rng& rng) {
  std::vector<int> pool(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) pool[j] = j;
  for (int k = 0; k < size; ++k) {
    const int pick = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(J - k)));
    std::swap(pool[k], pool[pick]);
  }
  pool.resize(static_cast<std::size_t>(size));
  return SensorSet(std::move(pool));
}

}  // namespace

SignalEnsemble draw_trial_ensemble(const ExperimentConfig& config, Rng& rng) {
  const int J = config.sensor_count;
  std::vector<SensorSet> sets;
  std::vector<int> partial_sparsity;
  for (const auto& p : config.partials) {
    SensorSet s;
    if (p.sensors) {
      s = *p.sensors;
    } else {
      // A fixed set may still collide with a later random one; bound the redraws.
      for (int attempt = 0;; ++attempt) {
        s = random_subset(J, p.size, rng);
        if (std::find(sets.begin(), sets.end(), s) == sets.end()) break;
        if (attempt > 1000) fail(ErrorCode::kInvalidArgument, "cannot draw distinct partial sets");
      }
    }
    sets.push_back(std::move(s));
    partial_sparsity.push_back(p.sparsity);
  }
  const CorrelationStructure structure =
      build_structure(J, config.length, sets, config.full_common > 0);
  const auto sparsities =
      sparsity_profile(structure, config.full_common, partial_sparsity, config.innovation);
  return generate_ensemble(structure, sparsities, rng);
}

TrialResult run_trial(const ExperimentConfig& config, Method method, int M, std::uint64_t seed) {
  TrialResult r;
  r.method = method;
  r.M = M;
  r.seed = seed;
  r.error = 1.0;
  if (M <= 0) {
    r.failure = "no measurements";
    return r;
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    Rng rng(seed);
    const SignalEnsemble ensemble = draw_trial_ensemble(config, rng);
    const std::vector<int> counts(static_cast<std::size_t>(config.sensor_count), M);
    MeasurementSet ms =
        measure(ensemble, draw_measurement_matrices(config.length, counts, rng));
    std::optional<std::vector<SensorSet>> hypothesis;
    if (method == Method::kGdcsOracle) hypothesis = oracle_hypothesis(ensemble.structure);
    const RecoveryResult rec = recover(method, ms, config.solver, hypothesis, ensemble.signals);
    r.error = *rec.relative_error;
    r.structure = rec.structure;
    if (!rec.converged) r.failure = "solver did not converge";
  } catch (const Error& e) {
    r.failure = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.success = r.failure.empty() && std::isfinite(r.error) && r.error < config.resolution;
  return r;
}

const CurvePoint* CurveTable::find(Method method, int M) const {
  for (const auto& p : points) {
    if (p.method == method && p.M == M) return &p;
  }
  return nullptr;
}

std::vector<CurvePoint> CurveTable::curve(Method method) const {
  std::vector<CurvePoint> out;
  for (const auto& p : points) {
    if (p.method == method) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.M < b.M; });
  return out;
}

CurveTable aggregate(const std::vector<TrialResult>& trials) {
  struct Sums {
    int trials = 0;
    int successes = 0;
    double error = 0.0;
    double seconds = 0.0;
  };
  std::map<std::pair<int, int>, Sums> groups;
  for (const auto& t : trials) {
    Sums& s = groups[{method_id(t.method), t.M}];
    ++s.trials;
    s.successes += t.success ? 1 : 0;
    s.error += t.error;
    s.seconds += t.seconds;
  }
  CurveTable table;
  for (const auto& [key, s] : groups) {
    CurvePoint p;
    p.method = static_cast<Method>(key.first);
    p.M = key.second;
    p.trials = s.trials;
    p.successes = s.successes;
    p.mean_error = s.error / s.trials;
    p.mean_seconds = s.seconds / s.trials;
    table.points.push_back(p);
  }
  return table;
}

SweepResult sweep(const ExperimentConfig& config) {
  config.validate();
  struct Job {
    Method method;
    int M;
    int trial;
  };
  std::vector<Job> jobs;
  for (Method m : config.methods) {
    for (int M : config.sweep) {
      for (int t = 0; t < config.trials; ++t) jobs.push_back({m, M, t});
    }
  }
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    return std::tuple(method_id(a.method), a.M, a.trial) <
           std::tuple(method_id(b.method), b.M, b.trial);
  });

  SweepResult out;
  out.trials.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      out.trials[i] = run_trial(config, job.method, job.M,
                                trial_seed(config.seed, job.method, job.M, job.trial));
      if (!config.timing) out.trials[i].seconds = 0.0;
    }
  };
  int threads = config.threads;
  if (threads == 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  out.table = aggregate(out.trials);
  return out;
}

double crossing(const std::vector<CurvePoint>& curve, double level) {
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double p = curve[i].success_prob();
    if (p < level) continue;
    if (i == 0) {
      if (p == level) return curve[0].M;
      break;
    }
    const double q = curve[i - 1].success_prob();
    return curve[i - 1].M + (level - q) / (p - q) * (curve[i].M - curve[i - 1].M);
  }
  fail(ErrorCode::kNotBracketed, "success level not bracketed by the sweep");
}

double measurement_savings(const CurveTable& table, Method a, Method b, double level) {
  return crossing(table.curve(a), level) - crossing(table.curve(b), level);
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_csv(const CurveTable& table) {
  std::string out = "method,M,trials,success_prob,mean_error,mean_seconds\n";
  for (const auto& p : table.points) {
    out += to_string(p.method) + "," + std::to_string(p.M) + "," + std::to_string(p.trials) + "," +
           format_double(p.success_prob()) + "," + format_double(p.mean_error) + "," +
           format_double(p.mean_seconds) + "\n";
  }
  return out;
}

void emit_csv(const CurveTable& table, const std::string& path) {
  if (table.points.empty()) fail(ErrorCode::kInvalidArgument, "empty curve table");
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  f << to_csv(table);
  if (!f) fail(ErrorCode::kIo, "write failed for " + path);
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail(ErrorCode::kParse, "bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail(ErrorCode::kParse, "bad integer '" + s + "'");
  return v;
}

}  // namespace

CurveTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "method,M,trials,success_prob,mean_error,mean_seconds") {
    fail(ErrorCode::kParse, "missing or unexpected CSV header");
  }
  CurveTable table;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6) fail(ErrorCode::kParse, "row " + std::to_string(row) + ": expected 6 fields");
    CurvePoint p;
    p.method = parse_method(f[0]);
    p.M = parse_int(f[1]);
    p.trials = parse_int(f[2]);
    if (p.trials < 1) fail(ErrorCode::kParse, "row " + std::to_string(row) + ": trials must be positive");
    const double prob = parse_double(f[3]);
    if (prob < 0.0 || prob > 1.0) fail(ErrorCode::kParse, "row " + std::to_string(row) + ": probability out of range");
    p.successes = static_cast<int>(std::lround(prob * p.trials));
    p.mean_error = parse_double(f[4]);
    p.mean_seconds = parse_double(f[5]);
    table.points.push_back(p);
  }
  return table;
}

}  // namespace gdcs
