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

#include "gdcs/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gdcs/error.hpp"

namespace gdcs {

SensorSet::SensorSet(std::vector<int> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    fail(ErrorCode::kInvalidArgument, "duplicate sensor in set");
  }
  if (!members_.empty() && members_.front() < 0) {
    fail(ErrorCode::kInvalidArgument, "negative sensor index");
  }
}

SensorSet::SensorSet(std::initializer_list<int> members)
    : SensorSet(std::vector<int>(members)) {}

SensorSet SensorSet::all(int sensor_count) {
  std::vector<int> members(static_cast<std::size_t>(sensor_count));
  std::iota(members.begin(), members.end(), 0);
  return SensorSet(std::move(members));
}

bool SensorSet::contains(int sensor) const {
  return std::binary_search(members_.begin(), members_.end(), sensor);
}

bool SensorSet::is_subset_of(const SensorSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(),
                       members_.begin(), members_.end());
}

SensorSet SensorSet::intersect(const SensorSet& other) const {
  std::vector<int> out;
  std::set_intersection(members_.begin(), members_.end(), other.members_.begin(),
                        other.members_.end(), std::back_inserter(out));
  return SensorSet(std::move(out));
}

SensorSet SensorSet::without(int sensor) const {
  std::vector<int> out;
  std::copy_if(members_.begin(), members_.end(), std::back_inserter(out),
               [sensor](int j) { return j != sensor; });
  return SensorSet(std::move(out));
}

SensorSet SensorSet::complement(int sensor_count) const {
  std::vector<int> out;
  for (int j = 0; j < sensor_count; ++j) {
    if (!contains(j)) out.push_back(j);
  }
  return SensorSet(std::move(out));
}

std::string SensorSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) os << ',';
    os << members_[i];
  }
  os << '}';
  return os.str();
}

SensorSet sensor_group(const ComponentKind& kind, int sensor_count) {
  if (std::holds_alternative<FullCommon>(kind)) return SensorSet::all(sensor_count);
  if (const auto* p = std::get_if<PartialCommon>(&kind)) return p->sensors;
  return SensorSet{std::get<Innovation>(kind).sensor};
}

std::string describe(const ComponentKind& kind) {
  if (std::holds_alternative<FullCommon>(kind)) return "full_common";
  if (const auto* p = std::get_if<PartialCommon>(&kind)) {
    return "partial_common" + p->sensors.to_string();
  }
  return "innovation{" + std::to_string(std::get<Innovation>(kind).sensor) + "}";
}

bool ComponentSignal::has_index(int n) const {
  return std::binary_search(support.begin(), support.end(), n);
}

bool CorrelationStructure::has_full_common() const {
  return !components.empty() && std::holds_alternative<FullCommon>(components.front());
}

std::vector<SensorSet> CorrelationStructure::partial_sets() const {
  std::vector<SensorSet> out;
  for (const auto& kind : components) {
    if (const auto* p = std::get_if<PartialCommon>(&kind)) out.push_back(p->sensors);
  }
  return out;
}

std::optional<std::size_t> CorrelationStructure::index_of(
    const ComponentKind& kind) const {
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (components[i] == kind) return i;
  }
  return std::nullopt;
}

Eigen::VectorXd SignalEnsemble::stacked() const {
  const int J = structure.sensor_count;
  const int N = structure.length;
  Eigen::VectorXd out(static_cast<Eigen::Index>(J) * N);
  for (int j = 0; j < J; ++j) out.segment(static_cast<Eigen::Index>(j) * N, N) = signals[j];
  return out;
}

CorrelationStructure build_structure(int sensor_count, int length,
                                     std::span<const SensorSet> partial_sets,
                                     bool include_full_common) {
  if (sensor_count < 2) fail(ErrorCode::kInvalidArgument, "need at least 2 sensors");
  if (length < 1) fail(ErrorCode::kInvalidArgument, "signal length must be positive");
  CorrelationStructure s{sensor_count, length, {}};
  if (include_full_common) s.components.emplace_back(FullCommon{});
  for (const auto& pi : partial_sets) s.components.emplace_back(PartialCommon{pi});
  for (int j = 0; j < sensor_count; ++j) s.components.emplace_back(Innovation{j});
  validate_structure(s);
  return s;
}

void validate_structure(const CorrelationStructure& s) {
  const int J = s.sensor_count;
  if (J < 2) fail(ErrorCode::kInvalidArgument, "need at least 2 sensors");
  if (s.length < 1) fail(ErrorCode::kInvalidArgument, "signal length must be positive");
  std::size_t pos = 0;
  if (pos < s.components.size() && std::holds_alternative<FullCommon>(s.components[pos])) {
    ++pos;
  }
  std::vector<SensorSet> seen;
  for (; pos < s.components.size(); ++pos) {
    const auto* p = std::get_if<PartialCommon>(&s.components[pos]);
    if (p == nullptr) break;
    const int size = p->sensors.size();
    if (size <= 1 || size >= J) {
      fail(ErrorCode::kInvalidArgument,
           "partial common set " + p->sensors.to_string() +
               " must satisfy 1 < |set| < J");
    }
    if (p->sensors.members().back() >= J) {
      fail(ErrorCode::kInvalidArgument, "sensor index out of range in " + p->sensors.to_string());
    }
    if (std::find(seen.begin(), seen.end(), p->sensors) != seen.end()) {
      fail(ErrorCode::kInvalidArgument, "duplicate partial common set " + p->sensors.to_string());
    }
    seen.push_back(p->sensors);
  }
  for (int j = 0; j < J; ++j, ++pos) {
    if (pos >= s.components.size() || !(s.components[pos] == ComponentKind{Innovation{j}})) {
      fail(ErrorCode::kInvalidArgument,
           "components must end with one innovation per sensor in order");
    }
  }
  if (pos != s.components.size()) {
    fail(ErrorCode::kInvalidArgument, "unexpected component after innovations");
  }
}

GroupLabel classify_component(const ComponentKind& kind, const SensorSet& gamma,
                              int sensor_count) {
  const SensorSet group = sensor_group(kind, sensor_count);
  const SensorSet common = group.intersect(gamma);
  if (common.empty()) return GroupLabel::kOmega3;
  if (common == group) return GroupLabel::kOmega1;
  return GroupLabel::kOmega2;
}

std::vector<int> sparsity_profile(const CorrelationStructure& structure,
                                  int full_common, std::span<const int> partial,
                                  int innovation) {
  std::vector<int> out;
  std::size_t k = 0;
  for (const auto& kind : structure.components) {
    if (std::holds_alternative<FullCommon>(kind)) {
      out.push_back(full_common);
    } else if (std::holds_alternative<PartialCommon>(kind)) {
      if (k >= partial.size()) {
        fail(ErrorCode::kInvalidArgument, "missing partial common sparsity");
      }
      out.push_back(partial[k++]);
    } else {
      out.push_back(innovation);
    }
  }
  if (k != partial.size()) fail(ErrorCode::kInvalidArgument, "too many partial common sparsities");
  return out;
}

SignalEnsemble generate_ensemble(const CorrelationStructure& structure,
                                 std::span<const int> sparsities, Rng& rng) {
  validate_structure(structure);
  if (sparsities.size() != structure.components.size()) {
    fail(ErrorCode::kInvalidArgument, "one sparsity per component required");
  }
  const int N = structure.length;
  std::vector<ComponentSignal> components;
  components.reserve(structure.components.size());
  std::vector<int> pool(static_cast<std::size_t>(N));
  for (std::size_t c = 0; c < structure.components.size(); ++c) {
    const int k = sparsities[c];
    if (k < 0 || k > N) {
      fail(ErrorCode::kInvalidArgument,
           "sparsity " + std::to_string(k) + " out of range for length " + std::to_string(N));
    }
    // Partial Fisher-Yates: the first k slots become a uniform k-subset.
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
      const auto pick = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(N - i)));
      std::swap(pool[i], pool[pick]);
    }
    ComponentSignal signal{structure.components[c],
                           std::vector<int>(pool.begin(), pool.begin() + k), {}};
    std::sort(signal.support.begin(), signal.support.end());
    signal.values.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      double v;
      do {
        v = rng.normal();
      } while (std::abs(v) < 1e-12);
      signal.values.push_back(v);
    }
    components.push_back(std::move(signal));
  }
  return make_ensemble(structure, std::move(components));
}

SignalEnsemble make_ensemble(const CorrelationStructure& structure,
                             std::vector<ComponentSignal> components) {
  validate_structure(structure);
  if (components.size() != structure.components.size()) {
    fail(ErrorCode::kInvalidArgument, "one component signal per structure component required");
  }
  const int N = structure.length;
  for (std::size_t c = 0; c < components.size(); ++c) {
    auto& comp = components[c];
    if (!(comp.kind == structure.components[c])) {
      fail(ErrorCode::kInvalidArgument, "component kind does not match structure order");
    }
    if (comp.support.size() != comp.values.size()) {
      fail(ErrorCode::kInvalidArgument, "support and values differ in length");
    }
    // Sort support and values together.
    std::vector<std::size_t> order(comp.support.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return comp.support[a] < comp.support[b]; });
    std::vector<int> support;
    std::vector<double> values;
    for (auto i : order) {
      support.push_back(comp.support[i]);
      values.push_back(comp.values[i]);
    }
    if (std::adjacent_find(support.begin(), support.end()) != support.end()) {
      fail(ErrorCode::kInvalidArgument, "duplicate support index in " + describe(comp.kind));
    }
    if (!support.empty() && (support.front() < 0 || support.back() >= N)) {
      fail(ErrorCode::kInvalidArgument, "support index out of range in " + describe(comp.kind));
    }
    for (double v : values) {
      if (!(std::abs(v) > 0.0) || !std::isfinite(v)) {
        fail(ErrorCode::kInvalidArgument, "component values must be finite and nonzero");
      }
    }
    comp.support = std::move(support);
    comp.values = std::move(values);
  }
  SignalEnsemble ensemble{structure, std::move(components), {}};
  ensemble.signals = assemble_signals(ensemble.components, structure.sensor_count, N);
  return ensemble;
}

std::vector<Eigen::VectorXd> assemble_signals(std::span<const ComponentSignal> components,
                                              int sensor_count, int length) {
  std::vector<Eigen::VectorXd> signals(static_cast<std::size_t>(sensor_count),
                                       Eigen::VectorXd::Zero(length));
  for (const auto& comp : components) {
    for (int j : sensor_group(comp.kind, sensor_count)) {
      for (std::size_t i = 0; i < comp.support.size(); ++i) {
        signals[j](comp.support[i]) += comp.values[i];
      }
    }
  }
  return signals;
}

LocationMap joint_location_map(const SignalEnsemble& ensemble) {
  const int J = ensemble.structure.sensor_count;
  const int N = ensemble.structure.length;
  LocationMap map{J, N, {}};
  for (std::size_t c = 0; c < ensemble.components.size(); ++c) {
    const auto& comp = ensemble.components[c];
    const SensorSet group = sensor_group(comp.kind, J);
    for (int n : comp.support) {
      LocationColumn column{c, n, {}};
      for (int j : group) column.rows.push_back(j * N + n);
      map.columns.push_back(std::move(column));
    }
  }
  return map;
}

Eigen::MatrixXd LocationMap::dense() const {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sensor_count) * length,
                                            column_count());
  for (int d = 0; d < column_count(); ++d) {
    for (int row : columns[d].rows) p(row, d) = 1.0;
  }
  return p;
}

Eigen::VectorXd value_vector(const SignalEnsemble& ensemble) {
  std::vector<double> theta;
  for (const auto& comp : ensemble.components) {
    theta.insert(theta.end(), comp.values.begin(), comp.values.end());
  }
  return Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size()));
}

}  // namespace gdcs
