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

#include "gdcs/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>

#include "gdcs/error.hpp"

namespace gdcs {
namespace {

using Mask = std::uint32_t;

Mask mask_of(const SensorSet& set) {
  Mask m = 0;
  for (int j : set) m |= Mask{1} << j;
  return m;
}

bool is_full_common(const ComponentKind& kind) {
  return std::holds_alternative<FullCommon>(kind);
}

bool may_block(const ComponentKind& blocker, const ComponentKind& blocked) {
  if (blocker == blocked) return false;
  return !(is_full_common(blocker) && std::holds_alternative<PartialCommon>(blocked));
}

// Per component: its sensor mask and, for every support entry, the mask of
// sensors at which that entry is blocked.
class OverlapTable {
 public:
  explicit OverlapTable(const SupportProfile& profile) : profile_(profile) {
    const auto& structure = profile.structure();
    const int J = structure.sensor_count;
    groups_.reserve(profile.component_count());
    for (const auto& kind : structure.components) groups_.push_back(mask_of(sensor_group(kind, J)));
    blocked_.resize(profile.component_count());
    for (std::size_t c = 0; c < profile.component_count(); ++c) {
      for (int n : profile.support(c)) {
        Mask m = 0;
        for (std::size_t o = 0; o < profile.component_count(); ++o) {
          if (o != c && may_block(structure.components[o], structure.components[c]) &&
              profile.has_index(o, n)) {
            m |= groups_[o];
          }
        }
        blocked_[c].push_back(m);
      }
    }
  }

  // Support entries of c blocked at every sensor of `relevant`.
  int count_blocked(std::size_t c, Mask relevant) const {
    int count = 0;
    for (Mask m : blocked_[c]) count += (relevant & ~m) == 0 ? 1 : 0;
    return count;
  }

  int required(Mask gamma, bool margin) const {
    const auto& structure = profile_.structure();
    const int J = structure.sensor_count;
    const Mask all = (Mask{1} << J) - 1;
    const Mask outside = all & ~gamma;
    int total = 0;
    for (std::size_t c = 0; c < groups_.size(); ++c) {
      const Mask group = groups_[c];
      const Mask inside = group & gamma;
      if (inside == 0) continue;  // unrelated
      if (inside == group) {
        total += profile_.sparsity(c);  // exclusive
      } else if (!std::holds_alternative<Innovation>(structure.components[c])) {
        total += count_blocked(c, group & outside);  // shared
      }
    }
    if (margin) total += std::popcount(gamma);
    return total;
  }

  int overlap(std::size_t c, Mask gamma) const {
    const Mask group = groups_[c];
    const Mask all = (Mask{1} << profile_.sensor_count()) - 1;
    if (gamma == all) return profile_.sparsity(c);
    if (gamma == 0) return 0;
    return count_blocked(c, group & ~gamma);
  }

 private:
  const SupportProfile& profile_;
  std::vector<Mask> groups_;
  std::vector<std::vector<Mask>> blocked_;
};

void check_sensor_limit(int sensor_count) {
  if (sensor_count > kMaxEnumeratedSensors) {
    fail(ErrorCode::kInvalidArgument, "subset enumeration supports at most " +
                                          std::to_string(kMaxEnumeratedSensors) + " sensors");
  }
}

void check_gamma(const SensorSet& gamma, int sensor_count) {
  if (!gamma.empty() && gamma.members().back() >= sensor_count) {
    fail(ErrorCode::kInvalidArgument, "subset " + gamma.to_string() + " exceeds sensor range");
  }
}

}  // namespace

SupportProfile::SupportProfile(CorrelationStructure structure,
                               std::vector<std::vector<int>> supports)
    : structure_(std::move(structure)), supports_(std::move(supports)) {
  validate_structure(structure_);
  check_sensor_limit(structure_.sensor_count);
  if (supports_.size() != structure_.components.size()) {
    fail(ErrorCode::kShapeMismatch, "one support per component required");
  }
  member_.assign(supports_.size(), std::vector<char>(static_cast<std::size_t>(structure_.length), 0));
  for (std::size_t c = 0; c < supports_.size(); ++c) {
    auto& s = supports_[c];
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      fail(ErrorCode::kInvalidArgument, "duplicate support index");
    }
    for (int n : s) {
      if (n < 0 || n >= structure_.length) fail(ErrorCode::kInvalidArgument, "support index out of range");
      member_[c][static_cast<std::size_t>(n)] = 1;
    }
  }
}

SupportProfile SupportProfile::of(const SignalEnsemble& ensemble) {
  std::vector<std::vector<int>> supports;
  supports.reserve(ensemble.components.size());
  for (const auto& c : ensemble.components) supports.push_back(c.support);
  return SupportProfile(ensemble.structure, std::move(supports));
}

int SupportProfile::sparsity(std::size_t component) const {
  return static_cast<int>(supports_.at(component).size());
}

int SupportProfile::sparsity(const ComponentKind& kind) const {
  const auto c = structure_.index_of(kind);
  if (!c) fail(ErrorCode::kInvalidArgument, "component " + describe(kind) + " not in structure");
  return sparsity(*c);
}

bool SupportProfile::has_index(std::size_t component, int n) const {
  return n >= 0 && n < structure_.length && member_[component][static_cast<std::size_t>(n)] != 0;
}

int SupportProfile::total() const {
  int d = 0;
  for (const auto& s : supports_) d += static_cast<int>(s.size());
  return d;
}

bool blocked_at(int n, int sensor, const ComponentKind& excluding, const SupportProfile& profile) {
  const auto& structure = profile.structure();
  if (sensor < 0 || sensor >= structure.sensor_count) {
    fail(ErrorCode::kInvalidArgument, "sensor out of range");
  }
  for (std::size_t c = 0; c < structure.components.size(); ++c) {
    const auto& kind = structure.components[c];
    if (!may_block(kind, excluding)) continue;
    if (sensor_group(kind, structure.sensor_count).contains(sensor) && profile.has_index(c, n)) {
      return true;
    }
  }
  return false;
}

int overlap_full_common(const SensorSet& gamma, const SupportProfile& profile) {
  check_gamma(gamma, profile.sensor_count());
  const auto c = profile.structure().index_of(FullCommon{});
  if (!c) return 0;
  return OverlapTable(profile).overlap(*c, mask_of(gamma));
}

int overlap_partial_common(const SensorSet& pi, const SensorSet& gamma,
                           const SupportProfile& profile) {
  check_gamma(gamma, profile.sensor_count());
  const auto c = profile.structure().index_of(PartialCommon{pi});
  if (!c) fail(ErrorCode::kInvalidArgument, "partial common " + pi.to_string() + " not in structure");
  return OverlapTable(profile).overlap(*c, mask_of(gamma));
}

int required_measurements(const SensorSet& gamma, const SupportProfile& profile,
                          bool unknown_p_margin) {
  check_gamma(gamma, profile.sensor_count());
  return OverlapTable(profile).required(mask_of(gamma), unknown_p_margin);
}

FeasibilityReport check_tuple(std::span<const int> counts, const SupportProfile& profile,
                              bool unknown_p_margin) {
  const int J = profile.sensor_count();
  check_sensor_limit(J);
  if (static_cast<int>(counts.size()) != J) {
    fail(ErrorCode::kShapeMismatch, "measurement tuple length differs from sensor count");
  }
  for (int m : counts) {
    if (m < 0) fail(ErrorCode::kInvalidArgument, "negative measurement count");
  }
  const OverlapTable table(profile);
  FeasibilityReport report;
  report.unknown_p_margin = unknown_p_margin;
  const Mask subsets = Mask{1} << J;
  report.table.reserve(subsets);
  for (Mask gamma = 0; gamma < subsets; ++gamma) {
    SubsetCondition row;
    std::vector<int> members;
    for (int j = 0; j < J; ++j) {
      if (gamma & (Mask{1} << j)) {
        members.push_back(j);
        row.available += counts[static_cast<std::size_t>(j)];
      }
    }
    row.gamma = SensorSet(std::move(members));
    row.required = table.required(gamma, unknown_p_margin);
    if (row.available < row.required) report.violations.push_back(row);
    report.table.push_back(std::move(row));
  }
  report.feasible = report.violations.empty();
  return report;
}

int min_uniform_measurement(const SupportProfile& profile, bool unknown_p_margin) {
  const int J = profile.sensor_count();
  const auto feasible = [&](int m) {
    const std::vector<int> counts(static_cast<std::size_t>(J), m);
    return check_tuple(counts, profile, unknown_p_margin).feasible;
  };
  // Every singleton requirement is at most D (+1), so that value is feasible.
  int lo = 0;
  int hi = profile.total() + (unknown_p_margin ? 1 : 0);
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

Eigen::MatrixXd located_operator(std::span<const Eigen::MatrixXd> matrices,
                                 const LocationMap& location) {
  const int J = location.sensor_count;
  const int N = location.length;
  if (static_cast<int>(matrices.size()) != J) fail(ErrorCode::kShapeMismatch, "one matrix per sensor required");
  std::vector<Eigen::Index> offsets(static_cast<std::size_t>(J) + 1, 0);
  for (int j = 0; j < J; ++j) {
    if (matrices[j].cols() != N) fail(ErrorCode::kShapeMismatch, "matrix width differs from N");
    offsets[j + 1] = offsets[j] + matrices[j].rows();
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(offsets[J], location.column_count());
  for (int d = 0; d < location.column_count(); ++d) {
    for (int row : location.columns[d].rows) {
      const int j = row / N;
      const int n = row % N;
      out.col(d).segment(offsets[j], matrices[j].rows()) = matrices[j].col(n);
    }
  }
  return out;
}

namespace {

bool singular_values_full_rank(const Eigen::MatrixXd& m) {
  if (m.cols() == 0) return true;
  if (m.rows() < m.cols()) return false;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return s(0) > 0.0 && s(s.size() - 1) > 1e-9 * s(0);
}

}  // namespace

bool rank_probe(std::span<const Eigen::MatrixXd> matrices, const LocationMap& location) {
  return singular_values_full_rank(located_operator(matrices, location));
}

bool location_full_rank(const LocationMap& location) {
  return singular_values_full_rank(location.dense());
}

OracleRecovery oracle_recover_known_P(const Eigen::VectorXd& observations,
                                      std::span<const Eigen::MatrixXd> matrices,
                                      const LocationMap& location) {
  const Eigen::MatrixXd a = located_operator(matrices, location);
  if (a.rows() != observations.size()) fail(ErrorCode::kShapeMismatch, "observation length mismatch");
  const Eigen::Index d = a.cols();
  if (a.rows() < d) {
    fail(ErrorCode::kAmbiguousSolution, "fewer equations (" + std::to_string(a.rows()) +
                                            ") than unknowns (" + std::to_string(d) + ")");
  }
  if (!singular_values_full_rank(a)) {
    fail(ErrorCode::kAmbiguousSolution, "Phi P is rank deficient");
  }
  OracleRecovery out;
  out.theta = d == 0 ? Eigen::VectorXd() : Eigen::VectorXd(a.colPivHouseholderQr().solve(observations));
  out.residual = d == 0 ? observations.norm() : (a * out.theta - observations).norm();
  if (out.residual > 1e-8 * observations.norm()) {
    fail(ErrorCode::kSolverFailure, "observations are inconsistent with the location map");
  }
  const int N = location.length;
  out.signals.assign(static_cast<std::size_t>(location.sensor_count), Eigen::VectorXd::Zero(N));
  for (int c = 0; c < location.column_count(); ++c) {
    for (int row : location.columns[c].rows) out.signals[row / N](row % N) += out.theta(c);
  }
  return out;
}

}  // namespace gdcs
