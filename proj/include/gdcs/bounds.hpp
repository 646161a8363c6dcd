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

#ifndef GDCS_BOUNDS_HPP_
#define GDCS_BOUNDS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gdcs/model.hpp"

namespace gdcs {

// Supports of every component of one structure; values are irrelevant to
// all counting.
class SupportProfile {
 public:
  SupportProfile(CorrelationStructure structure, std::vector<std::vector<int>> supports);
  static SupportProfile of(const SignalEnsemble& ensemble);

  const CorrelationStructure& structure() const { return structure_; }
  int sensor_count() const { return structure_.sensor_count; }
  int length() const { return structure_.length; }
  std::size_t component_count() const { return supports_.size(); }

  const std::vector<int>& support(std::size_t component) const { return supports_[component]; }
  int sparsity(std::size_t component) const;
  int sparsity(const ComponentKind& kind) const;
  bool has_index(std::size_t component, int n) const;
  // D: total joint sparsity.
  int total() const;

 private:
  CorrelationStructure structure_;
  std::vector<std::vector<int>> supports_;
  std::vector<std::vector<char>> member_;  // component x N indicator
};

// True iff some other component measured by sensor j has n in its support.
// Partial commons are not blocked by the full common: the full common's own
// collisions are charged to O_C, and only innovations and other partial
// commons cut a partial-common coefficient off from a sensor.
bool blocked_at(int n, int sensor, const ComponentKind& excluding, const SupportProfile& profile);

// O_C(Gamma, P); K_C for Gamma = all sensors, 0 for the empty set or when
// the structure has no full common component.
int overlap_full_common(const SensorSet& gamma, const SupportProfile& profile);

// O_{C_Pi}(Gamma, P): indices of z_{C_Pi} blocked at every sensor of
// Pi minus Gamma.
int overlap_partial_common(const SensorSet& pi, const SensorSet& gamma,
                           const SupportProfile& profile);

// Right-hand side of the subset condition for Gamma. With the unknown-P
// margin, |Gamma| is added.
int required_measurements(const SensorSet& gamma, const SupportProfile& profile,
                          bool unknown_p_margin = false);

struct SubsetCondition {
  SensorSet gamma;
  int required = 0;
  int available = 0;  // sum of M_j over Gamma
};

struct FeasibilityReport {
  bool feasible = true;
  bool unknown_p_margin = false;
  std::vector<SubsetCondition> violations;
  std::vector<SubsetCondition> table;  // every Gamma, in bitmask order
};

inline constexpr int kMaxEnumeratedSensors = 24;

// Evaluates the condition for all 2^J subsets.
FeasibilityReport check_tuple(std::span<const int> counts, const SupportProfile& profile,
                              bool unknown_p_margin = false);

// Smallest M with (M, ..., M) feasible.
int min_uniform_measurement(const SupportProfile& profile, bool unknown_p_margin = false);

// Phi P: the measurement operator restricted to the true stacked supports,
// shape (sum M_j) x D.
Eigen::MatrixXd located_operator(std::span<const Eigen::MatrixXd> matrices,
                                 const LocationMap& location);

// Smallest singular value of Phi P above 1e-9 times the largest.
bool rank_probe(std::span<const Eigen::MatrixXd> matrices, const LocationMap& location);

// Full column rank of the location matrix P itself.
bool location_full_rank(const LocationMap& location);

struct OracleRecovery {
  Eigen::VectorXd theta;
  std::vector<Eigen::VectorXd> signals;  // X = P theta, per sensor
  double residual = 0.0;
};

// Least squares on Y = Phi P theta. Rank deficiency raises
// kAmbiguousSolution; a residual above 1e-8 ||Y|| raises kSolverFailure.
OracleRecovery oracle_recover_known_P(const Eigen::VectorXd& observations,
                                      std::span<const Eigen::MatrixXd> matrices,
                                      const LocationMap& location);

}  // namespace gdcs

#endif  // GDCS_BOUNDS_HPP_
