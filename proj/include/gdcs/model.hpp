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

#ifndef GDCS_MODEL_HPP_
#define GDCS_MODEL_HPP_

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gdcs/rng.hpp"

// Joint-sparse signal ensembles. Sensors are numbered 0..J-1 and signal
// indices 0..N-1 throughout the library and in every file format.
namespace gdcs {

// Sorted, duplicate-free set of sensor indices.
class SensorSet {
 public:
  SensorSet() = default;
  explicit SensorSet(std::vector<int> members);
  SensorSet(std::initializer_list<int> members);

  static SensorSet all(int sensor_count);

  const std::vector<int>& members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }

  bool contains(int sensor) const;
  bool is_subset_of(const SensorSet& other) const;
  SensorSet intersect(const SensorSet& other) const;
  SensorSet without(int sensor) const;
  SensorSet complement(int sensor_count) const;

  std::string to_string() const;

  friend bool operator==(const SensorSet&, const SensorSet&) = default;
  friend auto operator<=>(const SensorSet&, const SensorSet&) = default;

 private:
  std::vector<int> members_;
};

struct FullCommon {
  friend bool operator==(const FullCommon&, const FullCommon&) = default;
};
struct PartialCommon {
  SensorSet sensors;
  friend bool operator==(const PartialCommon&, const PartialCommon&) = default;
};
struct Innovation {
  int sensor = 0;
  friend bool operator==(const Innovation&, const Innovation&) = default;
};

using ComponentKind = std::variant<FullCommon, PartialCommon, Innovation>;

// The sensors that measure a component of the given kind.
SensorSet sensor_group(const ComponentKind& kind, int sensor_count);
std::string describe(const ComponentKind& kind);

struct ComponentSignal {
  ComponentKind kind;
  std::vector<int> support;   // sorted
  std::vector<double> values;  // aligned with support, all nonzero

  int sparsity() const { return static_cast<int>(support.size()); }
  bool has_index(int n) const;
};

// Canonical order: full common (if any), partial commons in declaration
// order, then one innovation per sensor in increasing sensor order.
struct CorrelationStructure {
  int sensor_count = 0;
  int length = 0;
  std::vector<ComponentKind> components;

  bool has_full_common() const;
  std::vector<SensorSet> partial_sets() const;
  std::optional<std::size_t> index_of(const ComponentKind& kind) const;
};

struct SignalEnsemble {
  CorrelationStructure structure;
  std::vector<ComponentSignal> components;  // aligned with structure.components
  std::vector<Eigen::VectorXd> signals;     // x_j, one per sensor

  // x_0, x_1, ... concatenated.
  Eigen::VectorXd stacked() const;
};

enum class GroupLabel { kOmega1, kOmega2, kOmega3 };

CorrelationStructure build_structure(int sensor_count, int length,
                                     std::span<const SensorSet> partial_sets,
                                     bool include_full_common);

// Checks the canonical-order and membership invariants; throws on violation.
void validate_structure(const CorrelationStructure& structure);

GroupLabel classify_component(const ComponentKind& kind, const SensorSet& gamma,
                              int sensor_count);

// Per-component sparsities aligned with structure.components.
std::vector<int> sparsity_profile(const CorrelationStructure& structure,
                                  int full_common, std::span<const int> partial,
                                  int innovation);

SignalEnsemble generate_ensemble(const CorrelationStructure& structure,
                                 std::span<const int> sparsities, Rng& rng);

// Builds an ensemble from explicitly chosen supports and values.
SignalEnsemble make_ensemble(const CorrelationStructure& structure,
                             std::vector<ComponentSignal> components);

std::vector<Eigen::VectorXd> assemble_signals(
    std::span<const ComponentSignal> components, int sensor_count, int length);

// One column of the location matrix P: the stacked rows j*N + n that a
// single support entry of one component feeds.
struct LocationColumn {
  std::size_t component = 0;
  int index = 0;
  std::vector<int> rows;
};

struct LocationMap {
  int sensor_count = 0;
  int length = 0;
  std::vector<LocationColumn> columns;

  int column_count() const { return static_cast<int>(columns.size()); }
  // The 0/1 matrix P of shape (J*N) x D.
  Eigen::MatrixXd dense() const;
};

LocationMap joint_location_map(const SignalEnsemble& ensemble);

// Theta: the component values in location-map column order.
Eigen::VectorXd value_vector(const SignalEnsemble& ensemble);

}  // namespace gdcs

#endif  // GDCS_MODEL_HPP_
