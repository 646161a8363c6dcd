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

#ifndef GDCS_SEARCH_HPP_
#define GDCS_SEARCH_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gdcs/l1solver.hpp"
#include "gdcs/model.hpp"
#include "gdcs/sensing.hpp"

namespace gdcs {

// Recovery methods. The numeric ids are stable; they feed seed derivation.
enum class Method { kSeparate = 0, kDcs = 1, kGdcsOracle = 2, kGdcsSearch = 3 };

std::string to_string(Method method);
Method parse_method(const std::string& name);
int method_id(Method method);

// Reweighted l1 on an expanded operator. Without shared blocks the problem
// separates and is solved sensor by sensor.
L1Solution solve_expanded(const ExpandedMatrix& op, const Eigen::VectorXd& y,
                          const SolverSettings& settings);

// ||z2_j||_1 - ||z1_j||_1: small or negative when joint recovery inflated
// sensor j's innovation, i.e. j likely lies outside the shared group.
double exclusion_score(const Eigen::VectorXd& joint_slice, const Eigen::VectorXd& separate_slice);

// Argmin over the candidates; ties go to the smallest sensor index.
int select_exclusion(std::span<const double> scores, const SensorSet& candidates);

struct InnerIteration {
  SensorSet block;             // sensors active in the shared block
  int alpha = 0;               // approximate l0 of the joint solution
  std::vector<double> scores;  // per sensor; NaN outside the candidate pool
  int excluded = -1;           // sensor removed after this iteration
};

enum class InnerExit { kAlphaIncreased, kPoolExhausted, kSolverFailure };

struct InnerResult {
  std::optional<SharedBlock> frozen;  // empty on solver failure
  int alpha = 0;
  InnerExit exit = InnerExit::kAlphaIncreased;
  std::vector<InnerIteration> iterations;
  int separate_l0 = 0;  // approximate l0 of the base-only solution
};

// Starting from the all-sensor shared block, repeatedly solves the joint
// problem [block | base] and the base-only problem, then removes the sensor
// with the smallest exclusion score. Stops when alpha rises, returning the
// iterate before the rise, or when removing another sensor would leave
// fewer than two, returning the latest alpha-minimal iterate.
InnerResult inner_phase(const Eigen::VectorXd& y, const ExpandedMatrix& base,
                        const SolverSettings& settings);

// kBetaNotDecreased: the newest block left beta equal or higher; the update
// before it is returned.
// kRepeated: the inner phase froze a sensor set the operator already holds.
// That block spans no new columns, so every later round would repeat the
// same inner phase with the same beta until the round limit.
enum class OuterExit { kBetaNotDecreased, kRepeated, kRoundLimit, kInnerFailure, kZeroObservation };

struct SearchResult {
  std::vector<SensorSet> structure;  // accepted blocks, oldest first
  ExpandedMatrix update;             // operator for the final recovery
  std::vector<int> beta;
  std::vector<InnerResult> rounds;
  OuterExit exit = OuterExit::kBetaNotDecreased;
};

// Outer phase: every inner phase contributes one shared block to the update
// operator until beta rises; the operator from before the rise is kept.
// A repeated block ends the search with the operator it was found on.
// max_rounds <= 0 means J rounds.
SearchResult sequential_correlation_search(const Eigen::VectorXd& y,
                                           std::span<const Eigen::MatrixXd> matrices,
                                           const SolverSettings& settings, int max_rounds = 0);

struct RecoveryResult {
  Eigen::VectorXd z;                     // stacked solution on the final operator
  std::vector<Eigen::VectorXd> signals;  // recovered x_j
  std::vector<SensorSet> structure;      // shared groups used
  bool converged = false;
  int iterations = 0;
  std::optional<double> relative_error;
  std::optional<SearchResult> search;  // gdcs-search only
};

// ||X - Xhat|| / ||X||, or ||Xhat|| when X = 0.
double relative_error(std::span<const Eigen::VectorXd> truth,
                      std::span<const Eigen::VectorXd> estimate);

RecoveryResult final_recover(const Eigen::VectorXd& y, const ExpandedMatrix& update,
                             const SolverSettings& settings);

// Runs one method end to end. gdcs-oracle needs the true structure; an
// explicit hypothesis overrides it. When truth is given the relative error
// is filled in.
RecoveryResult recover(Method method, const MeasurementSet& measurements,
                       const SolverSettings& settings,
                       const std::optional<std::vector<SensorSet>>& hypothesis = std::nullopt,
                       std::span<const Eigen::VectorXd> truth = {});

}  // namespace gdcs

#endif  // GDCS_SEARCH_HPP_
