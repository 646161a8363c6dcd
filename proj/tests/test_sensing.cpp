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

#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "gdcs/error.hpp"
#include "gdcs/model.hpp"
#include "gdcs/sensing.hpp"
#include "oracles.hpp"

using namespace gdcs;

namespace {

std::vector<Eigen::MatrixXd> draw(int length, std::vector<int> counts, std::uint64_t seed) {
  Rng rng(seed);
  return draw_measurement_matrices(length, counts, rng);
}

}  // namespace

TEST_CASE("entry variance is close to one over M") {
  const auto phi = draw(50, {30}, 1);
  const auto& a = phi[0];
  const double mean = a.mean();
  const double var = (a.array() - mean).square().sum() / static_cast<double>(a.size() - 1);
  CHECK(a.size() == 1500);
  CHECK(std::abs(var - 1.0 / 30.0) < 0.2 / 30.0);
}

TEST_CASE("matrices are reproducible per seed") {
  CHECK(draw(20, {5, 6}, 3)[1] == draw(20, {5, 6}, 3)[1]);
  CHECK(draw(20, {5, 6}, 3)[0] != draw(20, {5, 6}, 4)[0]);
}

TEST_CASE("nine sensors at 25 measurements stack to 225 rows") {
  const auto phi = draw(50, std::vector<int>(9, 25), 2);
  const auto offsets = row_offsets(phi);
  CHECK(offsets.back() == 225);
  CHECK(static_cast<int>(offsets.size()) == 10);
}

TEST_CASE("compressing the zero ensemble gives zero") {
  const auto s = build_structure(3, 10, std::span<const SensorSet>{}, true);
  Rng rng(0);
  const auto e = generate_ensemble(s, std::vector<int>(4, 0), rng);
  CHECK(compress(e, draw(10, {4, 4, 4}, 1)).isZero(0.0));
}

TEST_CASE("a basis vector picks out one column") {
  const auto s = build_structure(2, 8, std::span<const SensorSet>{}, false);
  const auto e = make_ensemble(s, {{Innovation{0}, {5}, {1.0}}, {Innovation{1}, {}, {}}});
  const auto phi = draw(8, {3, 3}, 6);
  const auto y = compress(e, phi);
  CHECK(y.head(3) == phi[0].col(5));
  CHECK(y.tail(3).isZero(0.0));
}

TEST_CASE("compression matches the dense block-diagonal product") {
  Rng rng(12);
  const auto s = testing::random_structure(4, 16, 0.5, rng);
  const auto e = testing::random_overlapping_ensemble(s, 4, 16, rng);
  const auto phi = draw(16, {5, 7, 6, 9}, 13);
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(27, 64);
  int row = 0;
  for (int j = 0; j < 4; ++j) {
    big.block(row, 16 * j, phi[j].rows(), 16) = phi[j];
    row += static_cast<int>(phi[j].rows());
  }
  CHECK((compress(e, phi) - big * e.stacked()).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("the full hypothesis gives the common-plus-innovation matrix") {
  const auto phi = draw(6, {3, 4, 2}, 8);
  const std::array<SensorSet, 1> h{SensorSet::all(3)};
  const auto op = build_expanded_matrix(phi, h);
  CHECK(op.cols() == 24);
  CHECK(op.rows() == 9);
  const auto& a = op.matrix();
  CHECK(a.block(0, 0, 3, 6) == phi[0]);
  CHECK(a.block(3, 0, 4, 6) == phi[1]);
  CHECK(a.block(7, 0, 2, 6) == phi[2]);
  CHECK(a.block(0, 6, 3, 6) == phi[0]);
  CHECK(a.block(3, 12, 4, 6) == phi[1]);
  CHECK(a.block(7, 18, 2, 6) == phi[2]);
  CHECK(a.block(0, 12, 3, 12).isZero(0.0));
  CHECK(a.block(3, 6, 4, 6).isZero(0.0));
}

TEST_CASE("a partial hypothesis zeroes the excluded sensors' rows") {
  const auto phi = draw(5, {2, 2, 2, 2, 2}, 4);
  const std::array<SensorSet, 1> h{SensorSet{3, 4}};
  const auto op = build_expanded_matrix(phi, h);
  CHECK(op.matrix().block(0, 0, 6, 5).isZero(0.0));
  CHECK(op.matrix().block(6, 0, 2, 5) == phi[3]);
  CHECK(op.matrix().block(8, 0, 2, 5) == phi[4]);
}

TEST_CASE("the empty hypothesis is block diagonal") {
  const auto phi = draw(4, {2, 3}, 5);
  const auto op = build_expanded_matrix(phi, std::span<const SensorSet>{});
  CHECK(op.cols() == 8);
  CHECK(op.shared_count() == 0);
  CHECK(op.matrix().block(0, 0, 2, 4) == phi[0]);
  CHECK(op.matrix().block(2, 4, 3, 4) == phi[1]);
  CHECK(op.matrix().block(0, 4, 2, 4).isZero(0.0));
  CHECK(op.matrix().block(2, 0, 3, 4).isZero(0.0));
}

TEST_CASE("zeroing one sensor matches the smaller hypothesis") {
  const auto phi = draw(6, {3, 3, 3, 3}, 9);
  const SharedBlock full(phi, SensorSet::all(4));
  const auto zeroed = zero_sensor_block(full, 0);
  const SharedBlock direct(phi, SensorSet{1, 2, 3});
  CHECK(zeroed.sensors() == SensorSet{1, 2, 3});
  CHECK(zeroed.columns() == direct.columns());
}

TEST_CASE("zeroing every sensor empties the block and zeroing twice is an error") {
  const auto phi = draw(4, {2, 2, 2}, 10);
  SharedBlock b(phi, SensorSet::all(3));
  CHECK_THROWS_AS(zero_sensor_block(zero_sensor_block(b, 1), 1), Error);
  for (int j = 0; j < 3; ++j) b = zero_sensor_block(b, j);
  CHECK(b.sensors().empty());
  CHECK(b.columns().isZero(0.0));
}

TEST_CASE("stacked true coefficients reproduce the observations") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = testing::random_structure(4, 12, 0.4, rng);
    const auto e = testing::random_overlapping_ensemble(s, 3, 12, rng);
    const auto phi = draw(12, {6, 5, 7, 4}, 100 + trial);
    const auto y = compress(e, phi);
    // True hypothesis and also a partial one: components outside it are
    // folded into the innovations.
    std::vector<std::vector<SensorSet>> hypotheses{oracle_hypothesis(s), {}};
    if (!hypotheses[0].empty()) hypotheses.push_back({hypotheses[0].back()});
    for (const auto& h : hypotheses) {
      const auto op = build_expanded_matrix(phi, h);
      const auto z = stacked_coefficients(e, h);
      CHECK((op.matrix() * z - y).norm() <= 1e-10 * std::max(1.0, y.norm()));
      const auto x = op.assemble(z);
      for (int j = 0; j < 4; ++j) CHECK((x[j] - e.signals[j]).norm() < 1e-12);
    }
  }
}

TEST_CASE("slices and assembly round trip through the operator") {
  const auto phi = draw(5, {3, 4, 3}, 30);
  const std::array<SensorSet, 2> h{SensorSet{0, 1}, SensorSet::all(3)};
  const auto op = build_expanded_matrix(phi, h);
  Rng rng(31);
  Eigen::VectorXd z(op.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  CHECK(op.shared_slice(z, 1) == z.segment(op.shared_offset(1), 5));
  CHECK(op.innovation_slice(z, 2) == z.segment(op.innovation_offset(2), 5));
  const auto x = op.assemble(z);
  Eigen::VectorXd y(10);
  const auto offsets = row_offsets(phi);
  for (int j = 0; j < 3; ++j) y.segment(offsets[j], phi[j].rows()) = phi[j] * x[j];
  CHECK((op.matrix() * z - y).norm() < 1e-12);
}

TEST_CASE("with_leading places the new block first") {
  const auto phi = draw(4, {2, 2, 2}, 40);
  const std::array<SensorSet, 1> h{SensorSet{1, 2}};
  const auto op = build_expanded_matrix(phi, h).with_leading(SharedBlock(phi, SensorSet{0, 1}));
  CHECK(op.shared_sets() == std::vector<SensorSet>{SensorSet{0, 1}, SensorSet{1, 2}});
  // After k accepted blocks the operator has (k + J) * N columns.
  CHECK(op.cols() == (2 + 3) * 4);
}
