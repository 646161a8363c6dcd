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

#include "gdcs/gdcs.h"

#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdcs/bounds.hpp"
#include "gdcs/error.hpp"
#include "gdcs/fixtures.hpp"
#include "gdcs/harness.hpp"
#include "gdcs/plot.hpp"
#include "gdcs/search.hpp"
#include "gdcs/sensing.hpp"

struct gdcs_ensemble {
  gdcs::SignalEnsemble value;
};

struct gdcs_measurements {
  gdcs::MeasurementSet value;
};

namespace {

using nlohmann::json;

thread_local std::string last_error;

gdcs_status status_of(gdcs::ErrorCode code) {
  switch (code) {
    case gdcs::ErrorCode::kInvalidArgument: return GDCS_INVALID_ARGUMENT;
    case gdcs::ErrorCode::kShapeMismatch: return GDCS_SHAPE_MISMATCH;
    case gdcs::ErrorCode::kAmbiguousSolution: return GDCS_AMBIGUOUS_SOLUTION;
    case gdcs::ErrorCode::kNotBracketed: return GDCS_NOT_BRACKETED;
    case gdcs::ErrorCode::kSolverFailure: return GDCS_SOLVER_FAILURE;
    case gdcs::ErrorCode::kParse: return GDCS_PARSE_ERROR;
    case gdcs::ErrorCode::kIo: return GDCS_IO_ERROR;
  }
  return GDCS_INTERNAL_ERROR;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
gdcs_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return GDCS_OK;
  } catch (const gdcs::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    last_error = e.what();
    return GDCS_PARSE_ERROR;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GDCS_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GDCS_INTERNAL_ERROR;
  }
}

void require(bool ok, const char* what) {
  if (!ok) gdcs::fail(gdcs::ErrorCode::kInvalidArgument, what);
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json sets_json(const std::vector<gdcs::SensorSet>& sets) {
  json out = json::array();
  for (const auto& s : sets) out.push_back(s.members());
  return out;
}

json condition_json(const gdcs::SubsetCondition& c) {
  return {{"gamma", c.gamma.members()}, {"required", c.required}, {"available", c.available}};
}

const char* inner_exit_name(gdcs::InnerExit e) {
  switch (e) {
    case gdcs::InnerExit::kAlphaIncreased: return "alpha-increased";
    case gdcs::InnerExit::kPoolExhausted: return "pool-exhausted";
    case gdcs::InnerExit::kSolverFailure: return "solver-failure";
  }
  return "unknown";
}

const char* outer_exit_name(gdcs::OuterExit e) {
  switch (e) {
    case gdcs::OuterExit::kBetaNotDecreased: return "beta-not-decreased";
    case gdcs::OuterExit::kRepeated: return "repeated-block";
    case gdcs::OuterExit::kRoundLimit: return "round-limit";
    case gdcs::OuterExit::kInnerFailure: return "inner-failure";
    case gdcs::OuterExit::kZeroObservation: return "zero-observation";
  }
  return "unknown";
}

json trace_json(const gdcs::SearchResult& search) {
  json rounds = json::array();
  for (const auto& r : search.rounds) {
    json its = json::array();
    for (const auto& it : r.iterations) {
      json e{{"block", it.block.members()}, {"alpha", it.alpha}};
      if (it.excluded >= 0) e["excluded"] = it.excluded;
      its.push_back(std::move(e));
    }
    json e{{"exit", inner_exit_name(r.exit)}, {"iterations", std::move(its)},
           {"separate_l0", r.separate_l0}};
    if (r.frozen) e["frozen"] = r.frozen->sensors().members();
    rounds.push_back(std::move(e));
  }
  return {{"beta", search.beta}, {"exit", outer_exit_name(search.exit)}, {"rounds", rounds}};
}

gdcs::ExperimentConfig signal_config(const char* config_json) {
  json j = json::parse(config_json);
  if (!j.is_object()) gdcs::fail(gdcs::ErrorCode::kParse, "config must be an object");
  if (!j.contains("sweep")) j["sweep"] = json::array({1});
  return gdcs::parse_config(j.dump());
}

}  // namespace

extern "C" {

const char* gdcs_version(void) { return "0.1.0"; }

const char* gdcs_last_error(void) { return last_error.c_str(); }

const char* gdcs_status_name(gdcs_status status) {
  switch (status) {
    case GDCS_OK: return "ok";
    case GDCS_INVALID_ARGUMENT: return "invalid argument";
    case GDCS_SHAPE_MISMATCH: return "shape mismatch";
    case GDCS_AMBIGUOUS_SOLUTION: return "ambiguous solution";
    case GDCS_NOT_BRACKETED: return "not bracketed";
    case GDCS_SOLVER_FAILURE: return "solver failure";
    case GDCS_PARSE_ERROR: return "parse error";
    case GDCS_IO_ERROR: return "io error";
    case GDCS_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

void gdcs_string_free(char* s) { delete[] s; }

gdcs_status gdcs_ensemble_generate(const char* config_json, uint64_t seed, gdcs_ensemble** out) {
  return guarded([&] {
    require(config_json != nullptr && out != nullptr, "null argument");
    const auto config = signal_config(config_json);
    gdcs::Rng rng(seed);
    *out = new gdcs_ensemble{gdcs::draw_trial_ensemble(config, rng)};
  });
}

gdcs_status gdcs_ensemble_from_json(const char* text, gdcs_ensemble** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new gdcs_ensemble{gdcs::ensemble_from_json(text)};
  });
}

gdcs_status gdcs_ensemble_to_json(const gdcs_ensemble* ensemble, char** out) {
  return guarded([&] {
    require(ensemble != nullptr && out != nullptr, "null argument");
    *out = copy_string(gdcs::ensemble_to_json(ensemble->value));
  });
}

gdcs_status gdcs_ensemble_shape(const gdcs_ensemble* ensemble, int* sensors, int* length) {
  return guarded([&] {
    require(ensemble != nullptr, "null ensemble");
    if (sensors) *sensors = ensemble->value.structure.sensor_count;
    if (length) *length = ensemble->value.structure.length;
  });
}

gdcs_status gdcs_ensemble_signal(const gdcs_ensemble* ensemble, int sensor, double* out,
                                 size_t capacity) {
  return guarded([&] {
    require(ensemble != nullptr && out != nullptr, "null argument");
    const auto& signals = ensemble->value.signals;
    require(sensor >= 0 && sensor < static_cast<int>(signals.size()), "sensor out of range");
    const auto& x = signals[static_cast<std::size_t>(sensor)];
    if (capacity < static_cast<size_t>(x.size())) {
      gdcs::fail(gdcs::ErrorCode::kShapeMismatch, "output buffer too small");
    }
    std::copy(x.data(), x.data() + x.size(), out);
  });
}

void gdcs_ensemble_free(gdcs_ensemble* ensemble) { delete ensemble; }

gdcs_status gdcs_sense(const gdcs_ensemble* ensemble, const int* counts, size_t sensors,
                       uint64_t seed, gdcs_measurements** out) {
  return guarded([&] {
    require(ensemble != nullptr && counts != nullptr && out != nullptr, "null argument");
    const auto& e = ensemble->value;
    if (sensors != static_cast<size_t>(e.structure.sensor_count)) {
      gdcs::fail(gdcs::ErrorCode::kShapeMismatch, "one measurement count per sensor required");
    }
    gdcs::Rng rng(seed);
    const std::vector<int> m(counts, counts + sensors);
    auto matrices = gdcs::draw_measurement_matrices(e.structure.length, m, rng);
    *out = new gdcs_measurements{gdcs::measure(e, std::move(matrices))};
  });
}

gdcs_status gdcs_measurements_from_json(const char* text, gdcs_measurements** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new gdcs_measurements{gdcs::measurements_from_json(text)};
  });
}

gdcs_status gdcs_measurements_to_json(const gdcs_measurements* measurements, char** out) {
  return guarded([&] {
    require(measurements != nullptr && out != nullptr, "null argument");
    *out = copy_string(gdcs::measurements_to_json(measurements->value));
  });
}

gdcs_status gdcs_measurements_counts(const gdcs_measurements* measurements, int* counts,
                                     size_t capacity, size_t* sensors) {
  return guarded([&] {
    require(measurements != nullptr, "null measurements");
    const auto m = measurements->value.counts();
    if (sensors) *sensors = m.size();
    if (counts) {
      if (capacity < m.size()) gdcs::fail(gdcs::ErrorCode::kShapeMismatch, "output buffer too small");
      std::copy(m.begin(), m.end(), counts);
    }
  });
}

void gdcs_measurements_free(gdcs_measurements* measurements) { delete measurements; }

gdcs_status gdcs_bound_report(const gdcs_ensemble* ensemble, const int* counts, size_t sensors,
                              int unknown_p_margin, char** out_json) {
  return guarded([&] {
    require(ensemble != nullptr && out_json != nullptr, "null argument");
    const auto profile = gdcs::SupportProfile::of(ensemble->value);
    const bool margin = unknown_p_margin != 0;
    const int J = profile.sensor_count();
    const int uniform = gdcs::min_uniform_measurement(profile, margin);
    std::vector<int> m;
    if (counts != nullptr) {
      if (sensors != static_cast<size_t>(J)) {
        gdcs::fail(gdcs::ErrorCode::kShapeMismatch, "one measurement count per sensor required");
      }
      m.assign(counts, counts + sensors);
    } else {
      m.assign(static_cast<std::size_t>(J), uniform);
    }
    const auto report = gdcs::check_tuple(m, profile, margin);
    json j{{"counts", m},
           {"feasible", report.feasible},
           {"unknown_p_margin", report.unknown_p_margin},
           {"min_uniform", uniform},
           {"total_sparsity", profile.total()}};
    j["violations"] = json::array();
    for (const auto& v : report.violations) j["violations"].push_back(condition_json(v));
    j["table"] = json::array();
    for (const auto& c : report.table) j["table"].push_back(condition_json(c));
    *out_json = copy_string(j.dump(1) + "\n");
  });
}

gdcs_status gdcs_recover(const gdcs_measurements* measurements, const char* mode,
                         const char* options_json, const gdcs_ensemble* truth, char** out_json) {
  return guarded([&] {
    require(measurements != nullptr && mode != nullptr && out_json != nullptr, "null argument");
    const gdcs::Method method = gdcs::parse_method(mode);
    gdcs::SolverSettings settings;
    std::optional<std::vector<gdcs::SensorSet>> hypothesis;
    if (options_json != nullptr) {
      const json opts = json::parse(options_json);
      if (!opts.is_object()) gdcs::fail(gdcs::ErrorCode::kParse, "options must be an object");
      for (const auto& [key, value] : opts.items()) {
        if (key != "solver" && key != "structure") {
          gdcs::fail(gdcs::ErrorCode::kParse, "unknown option '" + key + "'");
        }
      }
      if (opts.contains("solver")) {
        json wrapper{{"sweep", {1}}, {"solver", opts.at("solver")}};
        settings = gdcs::parse_config(wrapper.dump()).solver;
      }
      if (opts.contains("structure")) {
        hypothesis.emplace();
        for (const auto& s : opts.at("structure")) {
          hypothesis->emplace_back(s.get<std::vector<int>>());
        }
      }
    }
    const auto& ms = measurements->value;
    std::vector<Eigen::VectorXd> reference;
    if (truth != nullptr) {
      const auto& e = truth->value;
      if (e.structure.sensor_count != ms.sensor_count() || e.structure.length != ms.length()) {
        gdcs::fail(gdcs::ErrorCode::kShapeMismatch, "truth does not match the measurements");
      }
      reference = e.signals;
      if (!hypothesis && method == gdcs::Method::kGdcsOracle) {
        hypothesis = gdcs::oracle_hypothesis(e.structure);
      }
    }
    const auto result = gdcs::recover(method, ms, settings, hypothesis, reference);
    json j{{"mode", gdcs::to_string(method)},
           {"converged", result.converged},
           {"iterations", result.iterations},
           {"structure", sets_json(result.structure)}};
    j["signals"] = json::array();
    for (const auto& x : result.signals) {
      j["signals"].push_back(std::vector<double>(x.data(), x.data() + x.size()));
    }
    if (result.relative_error) j["relative_error"] = *result.relative_error;
    if (result.search) j["trace"] = trace_json(*result.search);
    *out_json = copy_string(j.dump(1) + "\n");
  });
}

gdcs_status gdcs_experiment_run(const char* config_json, char** out_csv) {
  return guarded([&] {
    require(config_json != nullptr && out_csv != nullptr, "null argument");
    const json j = json::parse(config_json);
    if (!j.is_object() || !j.contains("seed")) {
      gdcs::fail(gdcs::ErrorCode::kInvalidArgument, "experiment config must carry a seed");
    }
    const auto config = gdcs::parse_config(config_json);
    *out_csv = copy_string(gdcs::to_csv(gdcs::sweep(config).table));
  });
}

gdcs_status gdcs_experiment_config(const char* config_json, char** out_json) {
  return guarded([&] {
    require(config_json != nullptr && out_json != nullptr, "null argument");
    *out_json = copy_string(gdcs::dump_config(gdcs::parse_config(config_json)));
  });
}

gdcs_status gdcs_plot_svg(const char* csv, const char* title, char** out_svg) {
  return guarded([&] {
    require(csv != nullptr && out_svg != nullptr, "null argument");
    gdcs::PlotOptions options;
    if (title != nullptr) options.title = title;
    *out_svg = copy_string(gdcs::render_svg(gdcs::parse_csv(csv), options));
  });
}

}  // extern "C"
