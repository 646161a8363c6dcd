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

// Acceptance run. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Thresholds are fixed here and are not tunable.
//
//   gdcs_acceptance [--out DIR] [--cli PATH] [--only N,...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdcs/bounds.hpp"
#include "gdcs/error.hpp"
#include "gdcs/fixtures.hpp"
#include "gdcs/gdcs.h"
#include "gdcs/harness.hpp"
#include "gdcs/l1solver.hpp"
#include "gdcs/plot.hpp"
#include "gdcs/search.hpp"
#include "gdcs/sensing.hpp"
#include "oracles.hpp"

using namespace gdcs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Options {
  fs::path out = ".";
  std::string cli;
  std::set<int> only;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Difference of two independent binomial proportions: the trials of
// different methods use different derived seeds.
double two_sigma(const CurvePoint& a, const CurvePoint& b) {
  const double pa = a.success_prob();
  const double pb = b.success_prob();
  return 2.0 * std::sqrt(pa * (1.0 - pa) / a.trials + pb * (1.0 - pb) / b.trials);
}

std::vector<int> range(int from, int to, int step) {
  std::vector<int> out;
  for (int m = from; m <= to; m += step) out.push_back(m);
  return out;
}

// 1. Overlap counters against literal set enumeration.
Outcome overlap_oracle() {
  const auto t0 = Clock::now();
  Rng rng(derive_seed(2026, 1));
  long comparisons = 0;
  long mismatches = 0;
  const int instances = 1000;
  for (int i = 0; i < instances; ++i) {
    const int J = 2 + static_cast<int>(rng.below(3));
    const int N = 1 + static_cast<int>(rng.below(12));
    const auto s = testing::random_structure(J, N, 0.5, rng);
    const auto p = SupportProfile::of(testing::random_overlapping_ensemble(s, 4, std::min(N, 6), rng));
    for (const auto& gamma : testing::all_subsets(J)) {
      if (s.has_full_common()) {
        ++comparisons;
        mismatches += overlap_full_common(gamma, p) != testing::literal_full_overlap(gamma, p);
      }
      for (const auto& pi : s.partial_sets()) {
        ++comparisons;
        mismatches += overlap_partial_common(pi, gamma, p) != testing::literal_partial_overlap(pi, gamma, p);
        if (J == 3 && pi.intersect(gamma).size() == 1) {
          ++comparisons;
          mismatches += overlap_partial_common(pi, gamma, p) !=
                        testing::literal_partial_overlap_three(pi, gamma, p);
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 30.0,
          std::to_string(instances) + " instances, " + std::to_string(comparisons) + " comparisons, " +
              std::to_string(mismatches) + " mismatches, " + fmt("%.2f s", secs) + " (limit 30 s)"};
}

// 2. Without partial components the bound is the common/innovation one.
Outcome dcs_reduction() {
  Rng rng(derive_seed(2026, 2));
  long comparisons = 0;
  long mismatches = 0;
  const int instances = 500;
  for (int i = 0; i < instances; ++i) {
    const int J = 2 + static_cast<int>(rng.below(5));
    const int N = 4 + static_cast<int>(rng.below(13));
    const auto s = build_structure(J, N, std::span<const SensorSet>{}, true);
    const auto p = SupportProfile::of(testing::random_overlapping_ensemble(s, 6, std::min(N, 8), rng));
    for (const auto& gamma : testing::all_subsets(J)) {
      ++comparisons;
      mismatches += required_measurements(gamma, p) != testing::theorem1_requirement(gamma, p);
    }
  }
  return {mismatches == 0, std::to_string(instances) + " instances, " + std::to_string(comparisons) +
                               " subsets, " + std::to_string(mismatches) + " mismatches"};
}

// Lower a feasible tuple one measurement at a time, in random sensor order,
// until no single decrement stays feasible.
std::vector<int> minimal_tuple(const SupportProfile& p, Rng& rng) {
  const int J = p.sensor_count();
  std::vector<int> m(static_cast<std::size_t>(J), p.total());
  for (;;) {
    std::vector<int> order(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) order[j] = j;
    for (int j = J - 1; j > 0; --j) std::swap(order[j], order[rng.below(static_cast<std::uint64_t>(j) + 1)]);
    bool lowered = false;
    for (int j : order) {
      if (m[j] == 0) continue;
      --m[j];
      if (check_tuple(m, p).feasible) {
        lowered = true;
        break;
      }
      ++m[j];
    }
    if (!lowered) return m;
  }
}

// 3. Feasible tuples give full-rank systems and exact recovery.
Outcome achievability() {
  Rng rng(derive_seed(2026, 3));
  const int J = 3;
  const int N = 20;
  const int draws = 200;
  int passed = 0;
  int skipped = 0;
  int tuples = 0;
  for (int d = 0; d < draws;) {
    const auto s = testing::random_structure(J, N, 0.6, rng);
    // Indices drawn from a pool of 8 so that supports collide often.
    const auto e = testing::random_overlapping_ensemble(s, 3, 8, rng);
    const auto loc = joint_location_map(e);
    if (loc.column_count() == 0) continue;
    // Achievability holds for full-rank location matrices only.
    if (!location_full_rank(loc)) {
      ++skipped;
      continue;
    }
    const auto p = SupportProfile::of(e);
    const std::vector<std::vector<int>> candidates{minimal_tuple(p, rng),
                                                   std::vector<int>(J, min_uniform_measurement(p))};
    bool ok = true;
    for (auto counts : candidates) {
      if (!check_tuple(counts, p).feasible) {
        ok = false;
        continue;
      }
      for (auto& c : counts) c = std::max(c, 1);  // a sensor needs a measurement row to exist
      ++tuples;
      const auto phi = draw_measurement_matrices(N, counts, rng);
      if (!rank_probe(phi, loc)) {
        ok = false;
        continue;
      }
      try {
        const auto rec = oracle_recover_known_P(compress(e, phi), phi, loc);
        ok = ok && relative_error(e.signals, rec.signals) < 1e-6;
      } catch (const Error&) {
        ok = false;
      }
    }
    passed += ok ? 1 : 0;
    ++d;
  }
  const double rate = static_cast<double>(passed) / draws;
  return {rate >= 0.99, std::to_string(passed) + "/" + std::to_string(draws) + " draws (" +
                            std::to_string(tuples) + " feasible tuples) exact, need >= 99%; " +
                            std::to_string(skipped) + " rank-deficient location maps redrawn"};
}

// 4. Basis pursuit sanity and the unit-weight reduction.
Outcome solver_sanity() {
  const auto t0 = Clock::now();
  int exact = 0;
  int matched = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(derive_seed(derive_seed(2026, 4), static_cast<std::uint64_t>(t)));
    const auto x = testing::sparse_vector(50, 4, rng);
    const auto a = testing::gaussian_matrix(25, 50, rng);
    const Eigen::VectorXd y = a * x;
    const auto bp = basis_pursuit(a, y);
    exact += (bp.z - x).norm() / x.norm() < 1e-4 ? 1 : 0;
    const auto wl = weighted_l1(a, y, Eigen::VectorXd::Ones(50));
    const double gap = (wl.z - bp.z).norm() / std::max(bp.z.norm(), 1e-300);
    worst = std::max(worst, gap);
    matched += gap <= 1e-6 ? 1 : 0;
  }
  const double secs = seconds_since(t0);
  return {exact >= 95 && matched == 100 && secs < 120.0,
          std::to_string(exact) + "/100 exact (need 95), " + std::to_string(matched) +
              "/100 unit-weight matches (worst " + fmt("%.1e", worst) + "), " + fmt("%.2f s", secs)};
}

ExperimentConfig single_partial_config() {
  ExperimentConfig c;
  c.length = 50;
  c.sensor_count = 9;
  c.innovation = 4;
  c.partials = {{6, 6, std::nullopt}};
  c.sweep = range(18, 36, 1);
  c.trials = 100;
  c.seed = 20260001;
  c.threads = 0;
  return c;
}

ExperimentConfig multi_correlation_config() {
  ExperimentConfig c;
  c.length = 50;
  c.sensor_count = 9;
  c.innovation = 4;
  c.full_common = 5;
  c.partials = {{7, 3, std::nullopt}, {6, 3, std::nullopt}};
  c.sweep = range(16, 40, 2);
  c.trials = 100;
  c.methods = {Method::kDcs, Method::kGdcsOracle, Method::kGdcsSearch};
  c.seed = 20260002;
  c.threads = 0;
  return c;
}

struct SweepRun {
  CurveTable table;
  double seconds = 0.0;
  int failures = 0;
};

SweepRun run_sweep(const ExperimentConfig& config, const fs::path& out, const std::string& name,
                   const std::string& title) {
  const auto t0 = Clock::now();
  const auto result = sweep(config);
  SweepRun run{result.table, seconds_since(t0), 0};
  for (const auto& t : result.trials) run.failures += t.failure.empty() ? 0 : 1;
  emit_csv(run.table, (out / (name + ".csv")).string());
  emit_plot(run.table, (out / (name + ".svg")).string(), {title, 640, 440});
  write_text_file((out / (name + ".json")).string(), dump_config(config) + "\n");
  std::cout << "  " << name << ": " << config.sweep.size() << " points x " << config.trials
            << " trials x " << config.methods.size() << " methods in " << fmt("%.0f s", run.seconds)
            << ", " << run.failures << " solver failures\n";
  std::cout << "  M   ";
  for (auto m : config.methods) std::cout << " " << to_string(m);
  std::cout << "\n";
  for (int M : config.sweep) {
    std::cout << "  " << M;
    for (auto m : config.methods) {
      const auto* p = run.table.find(m, M);
      std::cout << " " << fmt("%.2f", p ? p->success_prob() : -1.0);
    }
    std::cout << "\n";
  }
  return run;
}

std::string savings_text(const CurveTable& t, Method a, Method b, double& value) {
  try {
    value = measurement_savings(t, a, b, 0.9);
    return fmt("%.2f", value);
  } catch (const Error& e) {
    value = std::nan("");
    return std::string("not bracketed (") + e.what() + ")";
  }
}

// 5 and 6 share one sweep.
std::pair<Outcome, Outcome> single_partial_criteria(const fs::path& out) {
  const auto config = single_partial_config();
  const auto run = run_sweep(config, out, "single_partial", "Single partial common component");
  const auto& t = run.table;
  int violations = 0;
  std::string where;
  for (int M : config.sweep) {
    const auto& sep = *t.find(Method::kSeparate, M);
    const auto& dcs = *t.find(Method::kDcs, M);
    const auto& orc = *t.find(Method::kGdcsOracle, M);
    if (sep.success_prob() > dcs.success_prob() + two_sigma(sep, dcs)) {
      ++violations;
      where += " sep>dcs@" + std::to_string(M);
    }
    if (dcs.success_prob() > orc.success_prob() + two_sigma(dcs, orc)) {
      ++violations;
      where += " dcs>oracle@" + std::to_string(M);
    }
  }
  double saved = 0.0;
  const auto saved_text = savings_text(t, Method::kDcs, Method::kGdcsOracle, saved);
  Outcome five{violations == 0 && saved >= 3.0,
               "ordering violations " + std::to_string(violations) + where +
                   "; savings(dcs, oracle, 0.9) = " + saved_text + " (need >= 3); " +
                   fmt("%.0f s", run.seconds)};
  double gap = 0.0;
  const auto gap_text = savings_text(t, Method::kGdcsSearch, Method::kGdcsOracle, gap);
  Outcome six{gap <= 3.0, "savings(search, oracle, 0.9) = " + gap_text + " (need <= 3)"};
  // Non-degradation where DCS first reaches 50% success; reported, not graded.
  for (int M : config.sweep) {
    const double dcs = t.find(Method::kDcs, M)->success_prob();
    if (dcs < 0.5) continue;
    const double search = t.find(Method::kGdcsSearch, M)->success_prob();
    std::cout << "  at the dcs 50% point M = " << M << ": search " << fmt("%.2f", search)
              << (search >= dcs ? " >= " : " < ") << "dcs " << fmt("%.2f", dcs) << "\n";
    break;
  }
  return {five, six};
}

// 7. Several correlations: search does not degrade, oracle gains >= 2.
Outcome multi_correlation_criterion(const fs::path& out) {
  const auto config = multi_correlation_config();
  const auto run = run_sweep(config, out, "multi_correlation", "Full common and two partial common components");
  const auto& t = run.table;
  int violations = 0;
  std::string where;
  for (int M : config.sweep) {
    const auto& dcs = *t.find(Method::kDcs, M);
    const auto& search = *t.find(Method::kGdcsSearch, M);
    if (search.success_prob() < dcs.success_prob() - two_sigma(search, dcs)) {
      ++violations;
      where += " @" + std::to_string(M);
    }
  }
  double saved = 0.0;
  const auto saved_text = savings_text(t, Method::kDcs, Method::kGdcsOracle, saved);
  return {violations == 0 && saved >= 2.0,
          "search below dcs - 2 sigma at " + std::to_string(violations) + " points" + where +
              "; savings(dcs, oracle, 0.9) = " + saved_text + " (need >= 2); " + fmt("%.0f s", run.seconds)};
}

// 8. Oracle with {all} is DCS and with {} is separate, bit for bit.
Outcome reductions() {
  int cases = 0;
  int equal = 0;
  for (const auto& config : {single_partial_config(), multi_correlation_config()}) {
    for (int M : {18, 26, 34}) {
      for (int t = 0; t < 10; ++t) {
        Rng rng(derive_seed(derive_seed(2026, 8), static_cast<std::uint64_t>(cases)));
        const auto e = draw_trial_ensemble(config, rng);
        const auto ms = measure(e, draw_measurement_matrices(config.length,
                                                             std::vector<int>(config.sensor_count, M), rng));
        const auto dcs = recover(Method::kDcs, ms, config.solver);
        const auto as_dcs = recover(Method::kGdcsOracle, ms, config.solver,
                                    std::vector<SensorSet>{SensorSet::all(config.sensor_count)});
        const auto sep = recover(Method::kSeparate, ms, config.solver);
        const auto as_sep = recover(Method::kGdcsOracle, ms, config.solver, std::vector<SensorSet>{});
        bool same = dcs.z == as_dcs.z && sep.z == as_sep.z;
        for (int j = 0; j < config.sensor_count; ++j) {
          same = same && dcs.signals[j] == as_dcs.signals[j] && sep.signals[j] == as_sep.signals[j];
        }
        equal += same ? 1 : 0;
        ++cases;
      }
    }
  }
  return {equal == cases, std::to_string(equal) + "/" + std::to_string(cases) + " instances identical"};
}

std::string run_api(const std::string& config) {
  char* csv = nullptr;
  if (gdcs_experiment_run(config.c_str(), &csv) != GDCS_OK) {
    return std::string("error: ") + gdcs_last_error();
  }
  std::string out(csv);
  gdcs_string_free(csv);
  return out;
}

// 9. Same config and seed give byte-identical CSV.
Outcome determinism(const Options& opt) {
  auto config = nlohmann::json::parse(dump_config(single_partial_config()));
  config["sweep"] = {20, 26, 32};
  config["trials"] = 5;
  config.erase("seed");
  const fs::path file = opt.out / "determinism.json";
  write_text_file(file.string(), config.dump(2) + "\n");
  config["seed"] = 99;
  const auto a = run_api(config.dump());
  const auto b = run_api(config.dump());
  bool ok = a == b && a.rfind("method,", 0) == 0;
  std::string detail = std::string("C API runs ") + (a == b ? "identical" : "differ");
  if (!opt.cli.empty()) {
    std::string runs[2];
    for (int r = 0; r < 2; ++r) {
      const fs::path csv = opt.out / ("determinism_" + std::to_string(r) + ".csv");
      const std::string cmd = "\"" + opt.cli + "\" experiment --config \"" + file.string() +
                              "\" --seed 99 --out \"" + csv.string() + "\"";
      if (std::system(cmd.c_str()) != 0) {
        runs[r] = "failed";
        continue;
      }
      runs[r] = read_text_file(csv.string());
    }
    const bool same = runs[0] == runs[1] && runs[0] != "failed" && runs[0] == a;
    ok = ok && same;
    detail += std::string(", CLI runs ") + (same ? "identical and equal to the C API" : "differ");
  }
  return {ok, detail};
}

// Copies everything written to one stream buffer into a second one.
class TeeBuffer : public std::streambuf {
 public:
  TeeBuffer(std::streambuf* a, std::streambuf* b) : a_(a), b_(b) {}

 protected:
  int overflow(int c) override {
    if (c == traits_type::eof()) return traits_type::not_eof(c);
    const auto ch = traits_type::to_char_type(c);
    const bool ok = a_->sputc(ch) != traits_type::eof() && b_->sputc(ch) != traits_type::eof();
    return ok ? c : traits_type::eof();
  }
  int sync() override { return a_->pubsync() == 0 && b_->pubsync() == 0 ? 0 : -1; }

 private:
  std::streambuf* a_;
  std::streambuf* b_;
};

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--out" && i + 1 < argc) {
      opt.out = argv[++i];
    } else if (arg == "--cli" && i + 1 < argc) {
      opt.cli = argv[++i];
    } else if (arg == "--only" && i + 1 < argc) {
      std::stringstream in(argv[++i]);
      std::string item;
      while (std::getline(in, item, ',')) opt.only.insert(std::stoi(item));
    } else {
      std::cerr << "usage: gdcs_acceptance [--out DIR] [--cli PATH] [--only N,...]\n";
      return 2;
    }
  }
  fs::create_directories(opt.out);
  // The report also lands in summary.txt next to the sweep outputs.
  std::ofstream summary(opt.out / "summary.txt");
  TeeBuffer tee(std::cout.rdbuf(), summary.rdbuf());
  std::streambuf* const console = std::cout.rdbuf(&tee);
  const auto wanted = [&](int n) { return opt.only.empty() || opt.only.count(n) > 0; };

  int failed = 0;
  const auto report = [&](int n, const Outcome& o) {
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
    failed += o.pass ? 0 : 1;
  };
  const auto guarded = [&](int n, const std::function<Outcome()>& f) {
    if (!wanted(n)) return;
    try {
      report(n, f());
    } catch (const std::exception& e) {
      report(n, {false, std::string("exception: ") + e.what()});
    }
  };

  guarded(1, overlap_oracle);
  guarded(2, dcs_reduction);
  guarded(3, achievability);
  guarded(4, solver_sanity);
  if (wanted(5) || wanted(6)) {
    try {
      const auto [five, six] = single_partial_criteria(opt.out);
      if (wanted(5)) report(5, five);
      if (wanted(6)) report(6, six);
    } catch (const std::exception& e) {
      if (wanted(5)) report(5, {false, std::string("exception: ") + e.what()});
      if (wanted(6)) report(6, {false, std::string("exception: ") + e.what()});
    }
  }
  guarded(7, [&] { return multi_correlation_criterion(opt.out); });
  guarded(8, reductions);
  guarded(9, [&] { return determinism(opt); });
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  std::cout.rdbuf(console);
  return failed == 0 ? 0 : 1;
}
