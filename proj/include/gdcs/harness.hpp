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

#ifndef GDCS_HARNESS_HPP_
#define GDCS_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gdcs/l1solver.hpp"
#include "gdcs/model.hpp"
#include "gdcs/search.hpp"

namespace gdcs {

struct PartialSpec {
  int size = 2;
  int sparsity = 0;
  // Fixed sensors; when absent a random set of `size` sensors is drawn per trial.
  std::optional<SensorSet> sensors;
};

struct ExperimentConfig {
  int length = 50;
  int sensor_count = 9;
  int full_common = 0;  // sparsity of z_C, 0 for none
  std::vector<PartialSpec> partials;
  int innovation = 4;
  std::vector<int> sweep;  // per-sensor M, strictly increasing
  int trials = 100;
  std::vector<Method> methods{Method::kSeparate, Method::kDcs, Method::kGdcsOracle,
                              Method::kGdcsSearch};
  SolverSettings solver;
  double resolution = 0.1;
  std::uint64_t seed = 0;
  int threads = 1;  // 0 for one per hardware thread
  // Wall-clock is nondeterministic; without this flag mean_seconds is written
  // as 0 so that a config and seed reproduce the CSV byte for byte.
  bool timing = false;

  void validate() const;
};

// JSON text. Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text);
std::string dump_config(const ExperimentConfig& config);

struct TrialResult {
  Method method = Method::kSeparate;
  int M = 0;
  std::uint64_t seed = 0;
  double error = 0.0;
  bool success = false;
  double seconds = 0.0;
  std::vector<SensorSet> structure;  // discovered, search mode only
  std::string failure;                // empty unless the trial failed outright
};

// derive_seed(derive_seed(derive_seed(master, method id), M), trial).
std::uint64_t trial_seed(std::uint64_t master, Method method, int M, int trial);

// Draws the random structure and ensemble for one trial. Partial sensor sets
// are redrawn until distinct from each other.
SignalEnsemble draw_trial_ensemble(const ExperimentConfig& config, Rng& rng);

TrialResult run_trial(const ExperimentConfig& config, Method method, int M, std::uint64_t seed);

struct CurvePoint {
  Method method = Method::kSeparate;
  int M = 0;
  int trials = 0;
  int successes = 0;
  double mean_error = 0.0;
  double mean_seconds = 0.0;

  double success_prob() const { return trials > 0 ? static_cast<double>(successes) / trials : 0.0; }
};

struct CurveTable {
  std::vector<CurvePoint> points;  // ordered by method then M

  const CurvePoint* find(Method method, int M) const;
  std::vector<CurvePoint> curve(Method method) const;
};

CurveTable aggregate(const std::vector<TrialResult>& trials);

struct SweepResult {
  std::vector<TrialResult> trials;  // ordered by (method, M, trial)
  CurveTable table;
};

SweepResult sweep(const ExperimentConfig& config);

// First M at which the curve reaches `level`, interpolated linearly between
// the bracketing sweep points.
double crossing(const std::vector<CurvePoint>& curve, double level);

// crossing(a) - crossing(b): positive when b needs fewer measurements.
double measurement_savings(const CurveTable& table, Method a, Method b, double level);

std::string to_csv(const CurveTable& table);
void emit_csv(const CurveTable& table, const std::string& path);
// Success probabilities are rebuilt exactly from trials * success_prob.
CurveTable parse_csv(const std::string& text);

}  // namespace gdcs

#endif  // GDCS_HARNESS_HPP_
