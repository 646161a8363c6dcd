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
#include <vector>

#include "gdcs/error.hpp"
#include "gdcs/model.hpp"
#include "gdcs/rng.hpp"
#include "oracles.hpp"

using namespace gdcs;

namespace {

// Three sensors with every pairwise partial and a full common component.
CorrelationStructure venn_structure(int length = 50) {
  const std::array<SensorSet, 3> pairs{SensorSet{0, 1}, SensorSet{1, 2}, SensorSet{0, 2}};
  return build_structure(3, length, pairs, true);
}

int l0(const Eigen::VectorXd& x) { return static_cast<int>((x.array() != 0.0).count()); }

}  // namespace

TEST_CASE("sensor sets are sorted and support set algebra") {
  const SensorSet s{3, 1, 2};
  CHECK(s.members() == std::vector<int>{1, 2, 3});
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(0));
  CHECK(SensorSet{1, 3}.is_subset_of(s));
  CHECK(s.intersect(SensorSet{0, 3}) == SensorSet{3});
  CHECK(s.without(2) == SensorSet{1, 3});
  CHECK(s.complement(5) == SensorSet{0, 4});
  CHECK(SensorSet::all(3) == SensorSet{0, 1, 2});
  CHECK_THROWS_AS(SensorSet({1, 1}), Error);
  CHECK_THROWS_AS(SensorSet({-1}), Error);
}

TEST_CASE("three-sensor Venn structure has seven components") {
  const auto s = venn_structure();
  CHECK(s.components.size() == 7);
  CHECK(s.has_full_common());
  CHECK(std::holds_alternative<FullCommon>(s.components[0]));
  CHECK(std::get<PartialCommon>(s.components[1]).sensors == SensorSet{0, 1});
  CHECK(std::get<Innovation>(s.components[6]).sensor == 2);
  CHECK(s.partial_sets().size() == 3);
}

TEST_CASE("nine sensors with one partial of size six has ten components") {
  const std::array<SensorSet, 1> pi{SensorSet{0, 1, 2, 3, 4, 5}};
  const auto s = build_structure(9, 50, pi, false);
  CHECK(s.components.size() == 10);
  CHECK_FALSE(s.has_full_common());
}

TEST_CASE("a partial set covering every sensor is rejected") {
  const std::array<SensorSet, 1> all{SensorSet{0, 1}};
  CHECK_THROWS_AS(build_structure(2, 10, all, false), Error);
  const std::array<SensorSet, 1> single{SensorSet{1}};
  CHECK_THROWS_AS(build_structure(3, 10, single, false), Error);
  const std::array<SensorSet, 2> dup{SensorSet{0, 1}, SensorSet{0, 1}};
  CHECK_THROWS_AS(build_structure(3, 10, dup, false), Error);
}

TEST_CASE("classification in the three-sensor example") {
  const auto s = venn_structure();
  for (const auto& kind : s.components) {
    CHECK(classify_component(kind, SensorSet::all(3), 3) == GroupLabel::kOmega1);
    CHECK(classify_component(kind, SensorSet{}, 3) == GroupLabel::kOmega3);
  }
  const SensorSet gamma{0, 1};
  CHECK(classify_component(PartialCommon{{0, 1}}, gamma, 3) == GroupLabel::kOmega1);
  CHECK(classify_component(Innovation{0}, gamma, 3) == GroupLabel::kOmega1);
  CHECK(classify_component(Innovation{1}, gamma, 3) == GroupLabel::kOmega1);
  CHECK(classify_component(FullCommon{}, gamma, 3) == GroupLabel::kOmega2);
  CHECK(classify_component(PartialCommon{{1, 2}}, gamma, 3) == GroupLabel::kOmega2);
  CHECK(classify_component(PartialCommon{{0, 2}}, gamma, 3) == GroupLabel::kOmega2);
  CHECK(classify_component(Innovation{2}, gamma, 3) == GroupLabel::kOmega3);
}

TEST_CASE("every component lands in exactly one group for every subset") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = testing::random_structure(4, 8, 0.5, rng);
    for (const auto& gamma : testing::all_subsets(4)) {
      for (const auto& kind : s.components) {
        const SensorSet group = sensor_group(kind, 4);
        const auto label = classify_component(kind, gamma, 4);
        const int inside = group.intersect(gamma).size();
        CHECK((label == GroupLabel::kOmega1) == (inside == group.size()));
        CHECK((label == GroupLabel::kOmega3) == (inside == 0));
      }
    }
  }
}

TEST_CASE("generated supports respect per-sensor sparsity bounds") {
  const std::array<SensorSet, 1> pi{SensorSet{0, 1, 2, 3, 4, 5}};
  const auto s = build_structure(9, 50, pi, false);
  const std::array<int, 1> partial{6};
  const auto k = sparsity_profile(s, 0, partial, 4);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto e = generate_ensemble(s, k, rng);
    for (int j = 0; j < 9; ++j) CHECK(l0(e.signals[j]) <= (j < 6 ? 10 : 4));
    for (const auto& c : e.components) {
      CHECK(std::is_sorted(c.support.begin(), c.support.end()));
      for (double v : c.values) CHECK(std::abs(v) >= 1e-12);
    }
  }
}

TEST_CASE("zero sparsities give the zero ensemble") {
  const auto s = venn_structure();
  Rng rng(1);
  const auto e = generate_ensemble(s, std::vector<int>(7, 0), rng);
  for (const auto& x : e.signals) CHECK(x.isZero(0.0));
}

TEST_CASE("generation is deterministic per seed") {
  const auto s = venn_structure();
  const std::vector<int> k{3, 2, 2, 2, 4, 4, 4};
  Rng a(42), b(42), c(43);
  const auto ea = generate_ensemble(s, k, a);
  const auto eb = generate_ensemble(s, k, b);
  const auto ec = generate_ensemble(s, k, c);
  CHECK(ea.stacked() == eb.stacked());
  CHECK(ea.stacked() != ec.stacked());
}

TEST_CASE("sensor zero sums its full, pairwise and innovation parts") {
  const auto s = venn_structure(12);
  Rng rng(5);
  const auto e = generate_ensemble(s, std::vector<int>{2, 2, 2, 2, 3, 3, 3}, rng);
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(12);
  for (const auto& c : e.components) {
    const bool at_zero = sensor_group(c.kind, 3).contains(0);
    for (std::size_t i = 0; i < c.support.size(); ++i) {
      if (at_zero) expected(c.support[i]) += c.values[i];
    }
  }
  CHECK(e.signals[0] == expected);
  // Components seen by sensor 0: full, {0,1}, {0,2}, innovation 0.
  const auto* p12 = &e.components[2];
  CHECK(std::get<PartialCommon>(p12->kind).sensors == SensorSet{1, 2});
}

TEST_CASE("an innovation alone only touches its sensor") {
  const std::vector<ComponentSignal> comps{{Innovation{1}, {2, 5}, {1.5, -2.0}}};
  const auto x = assemble_signals(comps, 3, 8);
  CHECK(x[0].isZero(0.0));
  CHECK(x[2].isZero(0.0));
  CHECK(x[1](2) == 1.5);
  CHECK(x[1](5) == -2.0);
}

TEST_CASE("opposite values at a shared index cancel") {
  const std::vector<ComponentSignal> comps{{FullCommon{}, {3}, {0.75}}, {Innovation{0}, {3}, {-0.75}}};
  const auto x = assemble_signals(comps, 2, 6);
  CHECK(x[0](3) == 0.0);
  CHECK(x[1](3) == 0.75);
}

TEST_CASE("assembly is additive in components") {
  Rng rng(17);
  const auto s = venn_structure(10);
  const auto e1 = testing::random_overlapping_ensemble(s, 3, 10, rng);
  const auto e2 = testing::random_overlapping_ensemble(s, 3, 10, rng);
  std::vector<ComponentSignal> both = e1.components;
  both.insert(both.end(), e2.components.begin(), e2.components.end());
  const auto sum = assemble_signals(both, 3, 10);
  for (int j = 0; j < 3; ++j) CHECK((sum[j] - e1.signals[j] - e2.signals[j]).norm() < 1e-14);
}

TEST_CASE("disjoint supports reach the sparsity bound exactly") {
  const auto s = venn_structure(30);
  std::vector<ComponentSignal> comps;
  int next = 0;
  for (const auto& kind : s.components) {
    comps.push_back({kind, {next, next + 1}, {1.0, -1.0}});
    next += 2;
  }
  const auto e = make_ensemble(s, comps);
  for (int j = 0; j < 3; ++j) CHECK(l0(e.signals[j]) == 8);
}

TEST_CASE("location map has one column per nonzero component entry") {
  const auto s = venn_structure(20);
  Rng rng(3);
  const std::vector<int> k{2, 1, 3, 2, 4, 1, 2};
  const auto e = generate_ensemble(s, k, rng);
  const auto p = joint_location_map(e);
  CHECK(p.column_count() == 15);
  const Eigen::MatrixXd dense = p.dense();
  CHECK(dense.rows() == 60);
  // X = P theta.
  CHECK((dense * value_vector(e) - e.stacked()).norm() < 1e-14);
}

TEST_CASE("innovation-only location map is block diagonal") {
  const auto s = build_structure(3, 6, std::span<const SensorSet>{}, false);
  Rng rng(9);
  const auto e = generate_ensemble(s, std::vector<int>{2, 2, 2}, rng);
  const auto p = joint_location_map(e);
  for (const auto& col : p.columns) {
    REQUIRE(col.rows.size() == 1);
    CHECK(col.rows[0] / 6 == static_cast<int>(col.component));
  }
}

TEST_CASE("nested partials leave excluded sensor rows empty") {
  // Two partials: all but sensor 0, and all but sensors 0 and 1.
  const std::array<SensorSet, 2> pis{SensorSet{1, 2, 3}, SensorSet{2, 3}};
  const auto s = build_structure(4, 5, pis, false);
  std::vector<ComponentSignal> comps{{PartialCommon{{1, 2, 3}}, {0}, {1.0}},
                                     {PartialCommon{{2, 3}}, {1}, {2.0}}};
  for (int j = 0; j < 4; ++j) comps.push_back({Innovation{j}, {}, {}});
  const auto p = joint_location_map(make_ensemble(s, comps)).dense();
  CHECK(p.rows() == 20);
  CHECK(p.col(0).segment(0, 5).isZero(0.0));
  CHECK(p.col(1).segment(0, 10).isZero(0.0));
  CHECK(p(5 + 0, 0) == 1.0);
  CHECK(p(10 + 1, 1) == 1.0);
}

TEST_CASE("make_ensemble validates its input") {
  const auto s = build_structure(2, 4, std::span<const SensorSet>{}, true);
  const auto good = [] {
    return std::vector<ComponentSignal>{{FullCommon{}, {1}, {1.0}}, {Innovation{0}, {}, {}}, {Innovation{1}, {}, {}}};
  };
  CHECK_NOTHROW(make_ensemble(s, good()));
  auto bad = good();
  bad[0].support = {5};
  CHECK_THROWS_AS(make_ensemble(s, bad), Error);
  bad = good();
  bad[0].values = {0.0};
  CHECK_THROWS_AS(make_ensemble(s, bad), Error);
  bad = good();
  std::swap(bad[1], bad[2]);
  CHECK_THROWS_AS(make_ensemble(s, bad), Error);
}

TEST_CASE("derived seeds are stable and spread") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
  CHECK(mix64(0) != 0);
  Rng rng(8);
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double v = rng.normal();
    sum += v;
    sq += v * v;
  }
  CHECK(std::abs(sum / 20000) < 0.05);
  CHECK(std::abs(sq / 20000 - 1.0) < 0.05);
  for (int i = 0; i < 1000; ++i) CHECK(rng.below(7) < 7);
}
