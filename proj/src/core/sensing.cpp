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

#include "gdcs/sensing.hpp"

#include <algorithm>
#include <cmath>

#include "gdcs/error.hpp"

namespace gdcs {

int MeasurementSet::length() const {
  return matrices.empty() ? 0 : static_cast<int>(matrices.front().cols());
}

std::vector<int> MeasurementSet::counts() const {
  std::vector<int> out;
  for (const auto& phi : matrices) out.push_back(static_cast<int>(phi.rows()));
  return out;
}

int MeasurementSet::total_rows() const {
  int total = 0;
  for (const auto& phi : matrices) total += static_cast<int>(phi.rows());
  return total;
}

std::vector<Eigen::MatrixXd> draw_measurement_matrices(int length, std::span<const int> counts,
                                                       Rng& rng) {
  if (length < 1) fail(ErrorCode::kInvalidArgument, "signal length must be positive");
  std::vector<Eigen::MatrixXd> out;
  out.reserve(counts.size());
  for (int m : counts) {
    if (m < 1) fail(ErrorCode::kInvalidArgument, "each sensor needs at least one measurement");
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    Eigen::MatrixXd phi(m, length);
    // Row-major fill order keeps the stream independent of storage order.
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < length; ++c) phi(r, c) = scale * rng.normal();
    }
    out.push_back(std::move(phi));
  }
  return out;
}

std::vector<int> row_offsets(std::span<const Eigen::MatrixXd> matrices) {
  std::vector<int> offsets;
  int acc = 0;
  for (const auto& phi : matrices) {
    offsets.push_back(acc);
    acc += static_cast<int>(phi.rows());
  }
  offsets.push_back(acc);
  return offsets;
}

Eigen::VectorXd compress(const SignalEnsemble& ensemble,
                         std::span<const Eigen::MatrixXd> matrices) {
  const int J = ensemble.structure.sensor_count;
  if (static_cast<int>(matrices.size()) != J) {
    fail(ErrorCode::kShapeMismatch, "need one measurement matrix per sensor");
  }
  const auto offsets = row_offsets(matrices);
  Eigen::VectorXd y(offsets.back());
  for (int j = 0; j < J; ++j) {
    if (matrices[j].cols() != ensemble.structure.length) {
      fail(ErrorCode::kShapeMismatch, "measurement matrix width differs from signal length");
    }
    y.segment(offsets[j], matrices[j].rows()) = matrices[j] * ensemble.signals[j];
  }
  return y;
}

MeasurementSet measure(const SignalEnsemble& ensemble, std::vector<Eigen::MatrixXd> matrices) {
  Eigen::VectorXd y = compress(ensemble, matrices);
  return MeasurementSet{std::move(matrices), std::move(y)};
}

SharedBlock::SharedBlock(std::span<const Eigen::MatrixXd> matrices, SensorSet active)
    : active_(std::move(active)), offsets_(row_offsets(matrices)) {
  if (matrices.empty()) fail(ErrorCode::kInvalidArgument, "no measurement matrices");
  const int J = static_cast<int>(matrices.size());
  if (!active_.empty() && active_.members().back() >= J) {
    fail(ErrorCode::kInvalidArgument, "shared block sensor out of range");
  }
  const auto N = matrices.front().cols();
  columns_ = Eigen::MatrixXd::Zero(offsets_.back(), N);
  for (int j : active_) columns_.middleRows(offsets_[j], matrices[j].rows()) = matrices[j];
}

SharedBlock zero_sensor_block(SharedBlock block, int sensor) {
  if (!block.active_.contains(sensor)) {
    fail(ErrorCode::kInvalidArgument,
         "sensor " + std::to_string(sensor) + " is not active in this shared block");
  }
  block.columns_.middleRows(block.offsets_[sensor],
                            block.offsets_[sensor + 1] - block.offsets_[sensor])
      .setZero();
  block.active_ = block.active_.without(sensor);
  return block;
}

ExpandedMatrix::ExpandedMatrix(std::vector<Eigen::MatrixXd> matrices,
                               std::vector<SharedBlock> shared)
    : sensors_(std::move(matrices)), shared_(std::move(shared)) {
  if (sensors_.empty()) fail(ErrorCode::kInvalidArgument, "no measurement matrices");
  length_ = static_cast<int>(sensors_.front().cols());
  const auto offsets = row_offsets(sensors_);
  const Eigen::Index rows = offsets.back();
  const int J = sensor_count();
  const int h = shared_count();
  matrix_ = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(h + J) * length_);
  for (int k = 0; k < h; ++k) {
    if (shared_[k].columns().rows() != rows || shared_[k].columns().cols() != length_) {
      fail(ErrorCode::kShapeMismatch, "shared block shape does not match the matrices");
    }
    matrix_.middleCols(shared_offset(k), length_) = shared_[k].columns();
  }
  for (int j = 0; j < J; ++j) {
    if (sensors_[j].cols() != length_) {
      fail(ErrorCode::kShapeMismatch, "measurement matrices differ in width");
    }
    matrix_.block(offsets[j], innovation_offset(j), sensors_[j].rows(), length_) = sensors_[j];
  }
}

std::vector<SensorSet> ExpandedMatrix::shared_sets() const {
  std::vector<SensorSet> out;
  for (const auto& b : shared_) out.push_back(b.sensors());
  return out;
}

Eigen::Index ExpandedMatrix::shared_offset(int block) const {
  return static_cast<Eigen::Index>(block) * length_;
}

Eigen::Index ExpandedMatrix::innovation_offset(int sensor) const {
  return static_cast<Eigen::Index>(shared_count() + sensor) * length_;
}

Eigen::VectorXd ExpandedMatrix::shared_slice(const Eigen::VectorXd& z, int block) const {
  return z.segment(shared_offset(block), length_);
}

Eigen::VectorXd ExpandedMatrix::innovation_slice(const Eigen::VectorXd& z, int sensor) const {
  return z.segment(innovation_offset(sensor), length_);
}

std::vector<Eigen::VectorXd> ExpandedMatrix::assemble(const Eigen::VectorXd& z) const {
  if (z.size() != cols()) fail(ErrorCode::kShapeMismatch, "solution length mismatch");
  std::vector<Eigen::VectorXd> x;
  for (int j = 0; j < sensor_count(); ++j) {
    Eigen::VectorXd xj = innovation_slice(z, j);
    for (int k = 0; k < shared_count(); ++k) {
      if (shared_[k].sensors().contains(j)) xj += shared_slice(z, k);
    }
    x.push_back(std::move(xj));
  }
  return x;
}

ExpandedMatrix ExpandedMatrix::with_leading(SharedBlock block) const {
  std::vector<SharedBlock> shared;
  shared.reserve(shared_.size() + 1);
  shared.push_back(std::move(block));
  shared.insert(shared.end(), shared_.begin(), shared_.end());
  return ExpandedMatrix(sensors_, std::move(shared));
}

ExpandedMatrix build_expanded_matrix(std::span<const Eigen::MatrixXd> matrices,
                                     std::span<const SensorSet> hypothesis) {
  std::vector<SharedBlock> shared;
  for (const auto& set : hypothesis) {
    if (set.empty()) fail(ErrorCode::kInvalidArgument, "hypothesised sensor set is empty");
    shared.emplace_back(matrices, set);
  }
  return ExpandedMatrix(std::vector<Eigen::MatrixXd>(matrices.begin(), matrices.end()),
                        std::move(shared));
}

Eigen::VectorXd stacked_coefficients(const SignalEnsemble& ensemble,
                                     std::span<const SensorSet> hypothesis) {
  const int J = ensemble.structure.sensor_count;
  const int N = ensemble.structure.length;
  const auto h = static_cast<Eigen::Index>(hypothesis.size());
  Eigen::VectorXd z = Eigen::VectorXd::Zero((h + J) * N);
  for (const auto& comp : ensemble.components) {
    const SensorSet group = sensor_group(comp.kind, J);
    const bool innovation = std::holds_alternative<Innovation>(comp.kind);
    const auto it = std::find(hypothesis.begin(), hypothesis.end(), group);
    if (!innovation && it != hypothesis.end()) {
      const auto base = static_cast<Eigen::Index>(it - hypothesis.begin()) * N;
      for (std::size_t i = 0; i < comp.support.size(); ++i) z(base + comp.support[i]) += comp.values[i];
    } else {
      for (int j : group) {
        const auto base = (h + j) * N;
        for (std::size_t i = 0; i < comp.support.size(); ++i) z(base + comp.support[i]) += comp.values[i];
      }
    }
  }
  return z;
}

std::vector<SensorSet> oracle_hypothesis(const CorrelationStructure& structure) {
  std::vector<SensorSet> out;
  for (const auto& kind : structure.components) {
    if (!std::holds_alternative<Innovation>(kind)) {
      out.push_back(sensor_group(kind, structure.sensor_count));
    }
  }
  return out;
}

}  // namespace gdcs
