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

#include "gdcs/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "gdcs/error.hpp"

namespace gdcs {

std::string to_string(Method method) {
  switch (method) {
    case Method::kSeparate:
      return "separate";
    case Method::kDcs:
      return "dcs";
    case Method::kGdcsOracle:
      return "gdcs-oracle";
    case Method::kGdcsSearch:
      return "gdcs-search";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::kSeparate, Method::kDcs, Method::kGdcsOracle, Method::kGdcsSearch}) {
    if (to_string(m) == name) return m;
  }
  fail(ErrorCode::kInvalidArgument, "unknown method '" + name + "'");
}

int method_id(Method method) { return static_cast<int>(method); }

namespace {

// Shared blocks whose columns repeat an earlier block or an innovation block.
// kept[b] is the block carrying b's coefficients, or -1 for a single-sensor
// block, which duplicates that sensor's innovation columns.
std::vector<int> duplicate_owners(const ExpandedMatrix& op, bool& any) {
  const auto sets = op.shared_sets();
  std::vector<int> owner(sets.size());
  any = false;
  for (std::size_t b = 0; b < sets.size(); ++b) {
    owner[b] = static_cast<int>(b);
    if (sets[b].size() == 1) {
      owner[b] = -1;
    } else {
      for (std::size_t a = 0; a < b; ++a) {
        if (owner[a] == static_cast<int>(a) && sets[a] == sets[b]) {
          owner[b] = static_cast<int>(a);
          break;
        }
      }
    }
    any = any || owner[b] != static_cast<int>(b);
  }
  return owner;
}

}  // namespace

L1Solution solve_expanded(const ExpandedMatrix& op, const Eigen::VectorXd& y,
                          const SolverSettings& settings) {
  if (y.size() != op.rows()) fail(ErrorCode::kShapeMismatch, "observation length mismatch");
  bool duplicates = false;
  const std::vector<int> owner = duplicate_owners(op, duplicates);
  if (duplicates) {
    // Identical columns tie exactly and only split one coefficient between
    // copies; solve with one copy and leave the others at zero.
    std::vector<SharedBlock> unique;
    std::vector<int> slot(owner.size(), -1);
    for (std::size_t b = 0; b < owner.size(); ++b) {
      if (owner[b] == static_cast<int>(b)) {
        slot[b] = static_cast<int>(unique.size());
        unique.push_back(op.shared_blocks()[b]);
      }
    }
    const ExpandedMatrix reduced(op.sensor_matrices(), std::move(unique));
    L1Solution part = solve_expanded(reduced, y, settings);
    L1Solution out = part;
    out.z = Eigen::VectorXd::Zero(op.cols());
    const int N = op.length();
    for (std::size_t b = 0; b < owner.size(); ++b) {
      if (slot[b] >= 0) {
        out.z.segment(op.shared_offset(static_cast<int>(b)), N) =
            part.z.segment(reduced.shared_offset(slot[b]), N);
      }
    }
    for (int j = 0; j < op.sensor_count(); ++j) {
      out.z.segment(op.innovation_offset(j), N) = part.z.segment(reduced.innovation_offset(j), N);
    }
    return out;
  }
  if (op.shared_count() > 0) return L1Solver(op.matrix(), settings).solve_reweighted(y);

  const auto& matrices = op.sensor_matrices();
  const auto offsets = row_offsets(matrices);
  const int N = op.length();
  L1Solution out;
  out.z = Eigen::VectorXd::Zero(op.cols());
  out.converged = true;
  double residual2 = 0.0;
  for (int j = 0; j < op.sensor_count(); ++j) {
    const Eigen::VectorXd yj = y.segment(offsets[j], matrices[j].rows());
    const L1Solution part = L1Solver(matrices[j], settings).solve_reweighted(yj);
    out.z.segment(op.innovation_offset(j), N) = part.z;
    out.converged = out.converged && part.converged;
    out.iterations += part.iterations;
    residual2 += part.residual * part.residual;
  }
  out.residual = std::sqrt(residual2);
  return out;
}

double exclusion_score(const Eigen::VectorXd& joint_slice, const Eigen::VectorXd& separate_slice) {
  if (joint_slice.size() != separate_slice.size()) {
    fail(ErrorCode::kShapeMismatch, "solution slices differ in length");
  }
  return separate_slice.lpNorm<1>() - joint_slice.lpNorm<1>();
}

int select_exclusion(std::span<const double> scores, const SensorSet& candidates) {
  if (candidates.empty()) fail(ErrorCode::kInvalidArgument, "no candidate sensors");
  int best = -1;
  for (int j : candidates) {
    if (j >= static_cast<int>(scores.size())) fail(ErrorCode::kShapeMismatch, "missing score");
    if (best < 0 || scores[j] < scores[best]) best = j;
  }
  return best;
}

namespace {

// Latest iterate attaining the minimal alpha.
std::size_t latest_minimum(const std::vector<InnerIteration>& its) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < its.size(); ++i) {
    if (its[i].alpha <= its[best].alpha) best = i;
  }
  return best;
}

}  // namespace

InnerResult inner_phase(const Eigen::VectorXd& y, const ExpandedMatrix& base,
                        const SolverSettings& settings) {
  const int J = base.sensor_count();
  InnerResult result;
  const L1Solution separate = solve_expanded(base, y, settings);
  if (!separate.converged) {
    result.exit = InnerExit::kSolverFailure;
    return result;
  }
  result.separate_l0 = approx_l0(separate.z, settings.zero_threshold);

  std::vector<SharedBlock> blocks;
  blocks.emplace_back(base.sensor_matrices(), SensorSet::all(J));
  for (;;) {
    const ExpandedMatrix joint_op = base.with_leading(blocks.back());
    const L1Solution joint = solve_expanded(joint_op, y, settings);
    if (!joint.converged) {
      result.exit = InnerExit::kSolverFailure;
      return result;
    }
    InnerIteration it;
    it.block = blocks.back().sensors();
    it.alpha = approx_l0(joint.z, settings.zero_threshold);
    result.iterations.push_back(it);

    const std::size_t count = result.iterations.size();
    if (count > 1 && result.iterations[count - 2].alpha < result.iterations[count - 1].alpha) {
      result.exit = InnerExit::kAlphaIncreased;
      result.frozen = blocks[count - 2];
      result.alpha = result.iterations[count - 2].alpha;
      return result;
    }
    const SensorSet& pool = blocks.back().sensors();
    if (pool.size() <= 2) {
      const std::size_t best = latest_minimum(result.iterations);
      result.exit = InnerExit::kPoolExhausted;
      result.frozen = blocks[best];
      result.alpha = result.iterations[best].alpha;
      return result;
    }

    std::vector<double> scores(static_cast<std::size_t>(J), std::numeric_limits<double>::quiet_NaN());
    for (int j : pool) {
      scores[j] = exclusion_score(joint_op.innovation_slice(joint.z, j),
                                  base.innovation_slice(separate.z, j));
    }
    const int excluded = select_exclusion(scores, pool);
    result.iterations.back().scores = std::move(scores);
    result.iterations.back().excluded = excluded;
    blocks.push_back(zero_sensor_block(blocks.back(), excluded));
  }
}

namespace {

ExpandedMatrix separate_operator(std::span<const Eigen::MatrixXd> matrices) {
  return ExpandedMatrix(std::vector<Eigen::MatrixXd>(matrices.begin(), matrices.end()), {});
}

std::vector<SensorSet> oldest_first(const ExpandedMatrix& op) {
  auto sets = op.shared_sets();
  std::reverse(sets.begin(), sets.end());
  return sets;
}

}  // namespace

SearchResult sequential_correlation_search(const Eigen::VectorXd& y,
                                           std::span<const Eigen::MatrixXd> matrices,
                                           const SolverSettings& settings, int max_rounds) {
  if (matrices.empty()) fail(ErrorCode::kInvalidArgument, "no measurement matrices");
  const int J = static_cast<int>(matrices.size());
  if (max_rounds <= 0) max_rounds = J;

  // updates[k] is the operator after k accepted blocks.
  std::vector<ExpandedMatrix> updates{separate_operator(matrices)};
  std::vector<int> beta;
  std::vector<InnerResult> rounds;
  const auto finish = [&](std::size_t pick, OuterExit exit) {
    SearchResult out{oldest_first(updates[pick]), std::move(updates[pick]), std::move(beta),
                     std::move(rounds), exit};
    return out;
  };

  if (y.size() > 0 && y.cwiseAbs().maxCoeff() == 0.0) return finish(0, OuterExit::kZeroObservation);

  while (static_cast<int>(beta.size()) < max_rounds) {
    InnerResult inner = inner_phase(y, updates.back(), settings);
    if (!inner.frozen) {
      rounds.push_back(std::move(inner));
      return finish(updates.size() - 1, OuterExit::kInnerFailure);
    }
    const auto held = updates.back().shared_sets();
    const bool repeated =
        std::find(held.begin(), held.end(), inner.frozen->sensors()) != held.end();
    beta.push_back(inner.alpha);
    updates.push_back(updates.back().with_leading(*inner.frozen));
    rounds.push_back(std::move(inner));
    const std::size_t i1 = beta.size();
    // A block that does not lower beta is not kept, so ties stop the search too.
    if (i1 > 1 && beta[i1 - 2] <= beta[i1 - 1]) return finish(i1 - 1, OuterExit::kBetaNotDecreased);
    if (repeated) return finish(i1 - 1, OuterExit::kRepeated);
  }
  // Round limit: keep the latest beta-minimal operator.
  std::size_t best = 0;
  for (std::size_t k = 1; k < beta.size(); ++k) {
    if (beta[k] <= beta[best]) best = k;
  }
  return finish(best + 1, OuterExit::kRoundLimit);
}

double relative_error(std::span<const Eigen::VectorXd> truth,
                      std::span<const Eigen::VectorXd> estimate) {
  if (truth.size() != estimate.size()) fail(ErrorCode::kShapeMismatch, "sensor count mismatch");
  double diff2 = 0.0;
  double norm2 = 0.0;
  for (std::size_t j = 0; j < truth.size(); ++j) {
    if (truth[j].size() != estimate[j].size()) fail(ErrorCode::kShapeMismatch, "signal length mismatch");
    diff2 += (truth[j] - estimate[j]).squaredNorm();
    norm2 += truth[j].squaredNorm();
  }
  return norm2 > 0.0 ? std::sqrt(diff2 / norm2) : std::sqrt(diff2);
}

RecoveryResult final_recover(const Eigen::VectorXd& y, const ExpandedMatrix& update,
                             const SolverSettings& settings) {
  const L1Solution sol = solve_expanded(update, y, settings);
  RecoveryResult out;
  out.z = sol.z;
  out.signals = update.assemble(sol.z);
  out.structure = oldest_first(update);
  out.converged = sol.converged;
  out.iterations = sol.iterations;
  return out;
}

RecoveryResult recover(Method method, const MeasurementSet& measurements,
                       const SolverSettings& settings,
                       const std::optional<std::vector<SensorSet>>& hypothesis,
                       std::span<const Eigen::VectorXd> truth) {
  const auto& matrices = measurements.matrices;
  const auto& y = measurements.observations;
  if (matrices.empty()) fail(ErrorCode::kInvalidArgument, "no measurement matrices");
  const int J = measurements.sensor_count();
  RecoveryResult out;
  switch (method) {
    case Method::kSeparate:
      out = final_recover(y, separate_operator(matrices), settings);
      break;
    case Method::kDcs: {
      const std::vector<SensorSet> full{SensorSet::all(J)};
      out = final_recover(y, build_expanded_matrix(matrices, full), settings);
      break;
    }
    case Method::kGdcsOracle:
      if (!hypothesis) fail(ErrorCode::kInvalidArgument, "gdcs-oracle needs a correlation structure");
      out = final_recover(y, build_expanded_matrix(matrices, *hypothesis), settings);
      break;
    case Method::kGdcsSearch: {
      SearchResult search = sequential_correlation_search(y, matrices, settings);
      out = final_recover(y, search.update, settings);
      out.search = std::move(search);
      break;
    }
  }
  if (!truth.empty()) out.relative_error = relative_error(truth, out.signals);
  return out;
}

}  // namespace gdcs
