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

#ifndef GDCS_SENSING_HPP_
#define GDCS_SENSING_HPP_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gdcs/model.hpp"
#include "gdcs/rng.hpp"

namespace gdcs {

// Per-sensor Gaussian matrices and the stacked noiseless observations.
struct MeasurementSet {
  std::vector<Eigen::MatrixXd> matrices;  // Phi_j, M_j x N
  Eigen::VectorXd observations;           // Y = [y_0; y_1; ...]

  int sensor_count() const { return static_cast<int>(matrices.size()); }
  int length() const;
  std::vector<int> counts() const;
  int total_rows() const;
};

// Phi_j entries are i.i.d. N(0, 1/M_j).
std::vector<Eigen::MatrixXd> draw_measurement_matrices(int length, std::span<const int> counts,
                                                       Rng& rng);

Eigen::VectorXd compress(const SignalEnsemble& ensemble,
                         std::span<const Eigen::MatrixXd> matrices);

MeasurementSet measure(const SignalEnsemble& ensemble, std::vector<Eigen::MatrixXd> matrices);

// Row offset of each sensor's block in the stacked observation vector.
std::vector<int> row_offsets(std::span<const Eigen::MatrixXd> matrices);

// N shared columns of the expanded operator: Phi_j in the rows of every
// active sensor j, zero in the rows of every other sensor.
class SharedBlock {
 public:
  SharedBlock(std::span<const Eigen::MatrixXd> matrices, SensorSet active);

  const SensorSet& sensors() const { return active_; }
  const Eigen::MatrixXd& columns() const { return columns_; }

  friend SharedBlock zero_sensor_block(SharedBlock block, int sensor);

 private:
  SensorSet active_;
  Eigen::MatrixXd columns_;
  std::vector<int> offsets_;
};

// Zeroes sensor j's rows; j must still be active.
SharedBlock zero_sensor_block(SharedBlock block, int sensor);

// [shared blocks | blockdiag(Phi_0, ..., Phi_{J-1})]. Solutions are sliced
// through the block accessors, never by positional arithmetic at call sites.
class ExpandedMatrix {
 public:
  ExpandedMatrix(std::vector<Eigen::MatrixXd> matrices, std::vector<SharedBlock> shared);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const std::vector<Eigen::MatrixXd>& sensor_matrices() const { return sensors_; }
  const std::vector<SharedBlock>& shared_blocks() const { return shared_; }
  std::vector<SensorSet> shared_sets() const;

  int sensor_count() const { return static_cast<int>(sensors_.size()); }
  int length() const { return length_; }
  int shared_count() const { return static_cast<int>(shared_.size()); }
  Eigen::Index cols() const { return matrix_.cols(); }
  Eigen::Index rows() const { return matrix_.rows(); }

  Eigen::Index shared_offset(int block) const;
  Eigen::Index innovation_offset(int sensor) const;
  Eigen::VectorXd shared_slice(const Eigen::VectorXd& z, int block) const;
  Eigen::VectorXd innovation_slice(const Eigen::VectorXd& z, int sensor) const;

  // x_j = sum of shared slices active at j + innovation slice j.
  std::vector<Eigen::VectorXd> assemble(const Eigen::VectorXd& z) const;

  // A new operator with `block` placed in front of the existing shared blocks.
  ExpandedMatrix with_leading(SharedBlock block) const;

 private:
  std::vector<Eigen::MatrixXd> sensors_;
  std::vector<SharedBlock> shared_;
  int length_ = 0;
  Eigen::MatrixXd matrix_;
};

// One shared block per hypothesised sensor set, in the given order.
ExpandedMatrix build_expanded_matrix(std::span<const Eigen::MatrixXd> matrices,
                                     std::span<const SensorSet> hypothesis);

// Stacked coefficient vector matching build_expanded_matrix(matrices,
// partial/full sets of the ensemble's structure): shared values first, then
// innovations. Components whose group is absent from `hypothesis` are folded
// into the innovations of their sensors.
Eigen::VectorXd stacked_coefficients(const SignalEnsemble& ensemble,
                                     std::span<const SensorSet> hypothesis);

// Sensor sets of every non-innovation component, in structure order.
std::vector<SensorSet> oracle_hypothesis(const CorrelationStructure& structure);

}  // namespace gdcs

#endif  // GDCS_SENSING_HPP_
