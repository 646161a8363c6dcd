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

// gdcs command line front end. Everything goes through the C interface.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdcs/gdcs.h"

namespace {

using nlohmann::json;

struct CliError {
  int code;
  std::string message;
};

void check(gdcs_status status, const std::string& context) {
  if (status != GDCS_OK) {
    throw CliError{static_cast<int>(status),
                   context + ": " + gdcs_status_name(status) + ": " + gdcs_last_error()};
  }
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream out;
    out << std::cin.rdbuf();
    return out.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CliError{GDCS_IO_ERROR, "cannot open " + path};
  std::ostringstream out;
  out << f.rdbuf();
  return out.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CliError{GDCS_IO_ERROR, "cannot open " + path + " for writing"};
  f << text;
}

// Owns a string returned by the library.
std::string take(char* s) {
  std::string out(s);
  gdcs_string_free(s);
  return out;
}

struct Ensemble {
  gdcs_ensemble* ptr = nullptr;
  Ensemble() = default;
  Ensemble(const Ensemble&) = delete;
  Ensemble& operator=(const Ensemble&) = delete;
  ~Ensemble() { gdcs_ensemble_free(ptr); }
};

struct Measurements {
  gdcs_measurements* ptr = nullptr;
  Measurements() = default;
  Measurements(const Measurements&) = delete;
  Measurements& operator=(const Measurements&) = delete;
  ~Measurements() { gdcs_measurements_free(ptr); }
};

std::vector<int> parse_int_list(const std::string& text, char sep = ',') {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CliError{GDCS_INVALID_ARGUMENT, "bad integer '" + item + "' in '" + text + "'"};
    }
  }
  return out;
}

// "18:36" or "18:36:2" or "18,20,24".
json parse_sweep(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    const auto parts = parse_int_list(text, ':');
    if (parts.size() < 2 || parts.size() > 3) {
      throw CliError{GDCS_INVALID_ARGUMENT, "sweep range must be FROM:TO[:STEP]"};
    }
    return {{"from", parts[0]}, {"to", parts[1]}, {"step", parts.size() == 3 ? parts[2] : 1}};
  }
  return parse_int_list(text);
}

// "SIZE:SPARSITY" draws the sensors per trial, "0,1,2:SPARSITY" fixes them.
json parse_partial(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) {
    throw CliError{GDCS_INVALID_ARGUMENT, "partial must be SIZE:SPARSITY or SENSORS:SPARSITY"};
  }
  const std::string head = text.substr(0, colon);
  const auto sparsity = parse_int_list(text.substr(colon + 1));
  if (sparsity.size() != 1) throw CliError{GDCS_INVALID_ARGUMENT, "bad partial sparsity"};
  json p{{"sparsity", sparsity[0]}};
  if (head.find(',') != std::string::npos) {
    p["sensors"] = parse_int_list(head);
  } else {
    const auto size = parse_int_list(head);
    if (size.size() != 1) throw CliError{GDCS_INVALID_ARGUMENT, "bad partial size"};
    p["size"] = size[0];
  }
  return p;
}

// "0,1,2;3,4" -> [[0,1,2],[3,4]]; an empty string is the empty structure.
json parse_structure(const std::string& text) {
  json out = json::array();
  std::stringstream in(text);
  std::string group;
  while (std::getline(in, group, ';')) {
    if (!group.empty()) out.push_back(parse_int_list(group));
  }
  return out;
}

// Flags shared by commands that describe the signal model.
struct SignalFlags {
  std::optional<int> length, sensors, full_common, innovation;
  std::vector<std::string> partials;

  void add(CLI::App* app) {
    app->add_option("--length", length, "Signal length N");
    app->add_option("--sensors", sensors, "Number of sensors J");
    app->add_option("--full-common", full_common, "Sparsity of the full common component (0 for none)");
    app->add_option("--partial", partials,
                    "Partial common component, SIZE:SPARSITY or SENSORS:SPARSITY (repeatable)");
    app->add_option("--innovation", innovation, "Innovation sparsity per sensor");
  }

  void apply(json& config) const {
    if (length) config["length"] = *length;
    if (sensors) config["sensors"] = *sensors;
    if (full_common) config["full_common"] = *full_common;
    if (innovation) config["innovation"] = *innovation;
    if (!partials.empty()) {
      config["partials"] = json::array();
      for (const auto& p : partials) config["partials"].push_back(parse_partial(p));
    }
  }
};

struct SolverFlags {
  std::optional<std::string> method;
  std::optional<double> primal_tolerance, dual_tolerance, step, reweight_epsilon, zero_threshold;
  std::optional<int> max_iterations, reweight_rounds;

  void add(CLI::App* app) {
    app->add_option("--solver", method, "Weighted l1 solver: homotopy or admm");
    app->add_option("--primal-tolerance", primal_tolerance, "Relative feasibility tolerance");
    app->add_option("--dual-tolerance", dual_tolerance, "Relative optimality tolerance");
    app->add_option("--max-iterations", max_iterations, "Iteration cap per solve");
    app->add_option("--step", step, "Initial ADMM penalty");
    app->add_option("--reweight-rounds", reweight_rounds, "Reweighted l1 rounds");
    app->add_option("--reweight-epsilon", reweight_epsilon, "Reweighting epsilon");
    app->add_option("--zero-threshold", zero_threshold, "Approximate l0 threshold");
  }

  void apply(json& solver) const {
    if (!solver.is_object()) solver = json::object();
    if (method) solver["method"] = *method;
    if (primal_tolerance) solver["primal_tolerance"] = *primal_tolerance;
    if (dual_tolerance) solver["dual_tolerance"] = *dual_tolerance;
    if (max_iterations) solver["max_iterations"] = *max_iterations;
    if (step) solver["step"] = *step;
    if (reweight_rounds) solver["reweight_rounds"] = *reweight_rounds;
    if (reweight_epsilon) solver["reweight_epsilon"] = *reweight_epsilon;
    if (zero_threshold) solver["zero_threshold"] = *zero_threshold;
  }
};

json load_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw CliError{GDCS_PARSE_ERROR, path + ": " + e.what()};
  }
}

std::vector<int> counts_for(const std::string& counts, std::optional<int> uniform, int sensors) {
  if (!counts.empty()) return parse_int_list(counts);
  if (uniform) return std::vector<int>(static_cast<std::size_t>(sensors), *uniform);
  throw CliError{GDCS_INVALID_ARGUMENT, "give --measurements M or --counts M0,M1,..."};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized distributed compressive sensing"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Draw a signal ensemble and write it as JSON");
  std::string gen_config, gen_out;
  std::uint64_t gen_seed = 0;
  SignalFlags gen_signal;
  gen->add_option("--config", gen_config, "Experiment config supplying the signal model");
  gen->add_option("--seed", gen_seed, "Random seed")->required();
  gen->add_option("-o,--out", gen_out, "Output file (default stdout)");
  gen_signal.add(gen);

  // sense
  auto* sense = app.add_subcommand("sense", "Draw Gaussian measurements of an ensemble");
  std::string sense_ensemble, sense_counts, sense_out;
  std::optional<int> sense_m;
  std::uint64_t sense_seed = 0;
  sense->add_option("--ensemble", sense_ensemble, "Ensemble JSON")->required();
  sense->add_option("-m,--measurements", sense_m, "Measurements per sensor");
  sense->add_option("--counts", sense_counts, "Per-sensor counts M0,M1,...");
  sense->add_option("--seed", sense_seed, "Random seed")->required();
  sense->add_option("-o,--out", sense_out, "Output file (default stdout)");

  // bound
  auto* bound = app.add_subcommand("bound", "Feasibility table of the subset conditions");
  std::string bound_ensemble, bound_counts, bound_out;
  std::optional<int> bound_m;
  bool bound_margin = false;
  bound->add_option("--ensemble", bound_ensemble, "Ensemble JSON")->required();
  bound->add_option("-m,--measurements", bound_m, "Measurements per sensor");
  bound->add_option("--counts", bound_counts, "Per-sensor counts M0,M1,...");
  bound->add_flag("--unknown-p-margin", bound_margin, "Add |Gamma| for an unknown location matrix");
  bound->add_option("-o,--out", bound_out, "Output file (default stdout)");

  // recover
  auto* rec = app.add_subcommand("recover", "Recover one instance");
  std::string rec_measurements, rec_mode = "gdcs-search", rec_truth, rec_out;
  std::optional<std::string> rec_structure;
  SolverFlags rec_solver;
  rec->add_option("--measurements", rec_measurements, "Measurements JSON")->required();
  rec->add_option("--mode", rec_mode, "separate, dcs, gdcs-oracle or gdcs-search")
      ->check(CLI::IsMember({"separate", "dcs", "gdcs-oracle", "gdcs-search"}));
  rec->add_option("--truth", rec_truth, "Ensemble JSON for the error and the oracle structure");
  rec->add_option("--structure", rec_structure, "Shared sensor sets for gdcs-oracle, e.g. 0,1,2;3,4");
  rec->add_option("-o,--out", rec_out, "Output file (default stdout)");
  rec_solver.add(rec);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Monte Carlo sweep from a config file");
  std::string exp_config, exp_out, exp_plot, exp_sweep, exp_methods, exp_dump;
  std::optional<std::uint64_t> exp_seed;
  std::optional<int> exp_trials, exp_threads;
  std::optional<double> exp_resolution;
  bool exp_timing = false;
  SignalFlags exp_signal;
  SolverFlags exp_solver;
  exp->add_option("--config", exp_config, "Experiment config JSON")->required();
  exp->add_option("--seed", exp_seed, "Master seed")->required();
  exp->add_option("-o,--out", exp_out, "CSV output (default stdout)");
  exp->add_option("--plot", exp_plot, "Also write an SVG plot");
  exp->add_option("--sweep", exp_sweep, "Measurement sweep, FROM:TO[:STEP] or a list");
  exp->add_option("--methods", exp_methods, "Comma separated methods");
  exp->add_option("--trials", exp_trials, "Trials per point");
  exp->add_option("--threads", exp_threads, "Worker threads (0 for all cores)");
  exp->add_option("--resolution", exp_resolution, "Success threshold on the relative error");
  exp->add_flag("--timing", exp_timing, "Record wall-clock seconds (output no longer reproducible)");
  exp->add_option("--dump-config", exp_dump, "Write the effective config to this file");
  exp_signal.add(exp);
  exp_solver.add(exp);

  // plot
  auto* plot = app.add_subcommand("plot", "Render a result CSV as SVG");
  std::string plot_csv, plot_out, plot_title;
  plot->add_option("--csv", plot_csv, "Result CSV")->required();
  plot->add_option("-o,--out", plot_out, "SVG output (default stdout)");
  plot->add_option("--title", plot_title, "Plot title");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      json config = gen_config.empty() ? json::object() : load_json(gen_config);
      config.erase("seed");
      gen_signal.apply(config);
      Ensemble e;
      check(gdcs_ensemble_generate(config.dump().c_str(), gen_seed, &e.ptr), "gen");
      char* text = nullptr;
      check(gdcs_ensemble_to_json(e.ptr, &text), "gen");
      write_output(gen_out, take(text));
    } else if (sense->parsed()) {
      Ensemble e;
      check(gdcs_ensemble_from_json(read_file(sense_ensemble).c_str(), &e.ptr), sense_ensemble);
      int sensors = 0;
      check(gdcs_ensemble_shape(e.ptr, &sensors, nullptr), "sense");
      const auto counts = counts_for(sense_counts, sense_m, sensors);
      Measurements m;
      check(gdcs_sense(e.ptr, counts.data(), counts.size(), sense_seed, &m.ptr), "sense");
      char* text = nullptr;
      check(gdcs_measurements_to_json(m.ptr, &text), "sense");
      write_output(sense_out, take(text));
    } else if (bound->parsed()) {
      Ensemble e;
      check(gdcs_ensemble_from_json(read_file(bound_ensemble).c_str(), &e.ptr), bound_ensemble);
      int sensors = 0;
      check(gdcs_ensemble_shape(e.ptr, &sensors, nullptr), "bound");
      std::vector<int> counts;
      if (!bound_counts.empty() || bound_m) counts = counts_for(bound_counts, bound_m, sensors);
      char* text = nullptr;
      check(gdcs_bound_report(e.ptr, counts.empty() ? nullptr : counts.data(), counts.size(),
                              bound_margin ? 1 : 0, &text),
            "bound");
      write_output(bound_out, take(text));
    } else if (rec->parsed()) {
      Measurements m;
      check(gdcs_measurements_from_json(read_file(rec_measurements).c_str(), &m.ptr),
            rec_measurements);
      Ensemble truth;
      if (!rec_truth.empty()) {
        check(gdcs_ensemble_from_json(read_file(rec_truth).c_str(), &truth.ptr), rec_truth);
      }
      json options = json::object();
      json solver = json::object();
      rec_solver.apply(solver);
      if (!solver.empty()) options["solver"] = solver;
      if (rec_structure) options["structure"] = parse_structure(*rec_structure);
      char* text = nullptr;
      check(gdcs_recover(m.ptr, rec_mode.c_str(), options.dump().c_str(), truth.ptr, &text),
            "recover");
      write_output(rec_out, take(text));
    } else if (exp->parsed()) {
      json config = load_json(exp_config);
      if (!config.is_object()) throw CliError{GDCS_PARSE_ERROR, exp_config + ": not an object"};
      config["seed"] = *exp_seed;
      exp_signal.apply(config);
      json solver = config.value("solver", json::object());
      exp_solver.apply(solver);
      if (!solver.empty()) config["solver"] = solver;
      if (!exp_sweep.empty()) config["sweep"] = parse_sweep(exp_sweep);
      if (!exp_methods.empty()) {
        json methods = json::array();
        std::stringstream in(exp_methods);
        std::string item;
        while (std::getline(in, item, ',')) {
          if (!item.empty()) methods.push_back(item);
        }
        config["methods"] = methods;
      }
      if (exp_trials) config["trials"] = *exp_trials;
      if (exp_threads) config["threads"] = *exp_threads;
      if (exp_resolution) config["resolution"] = *exp_resolution;
      if (exp_timing) config["timing"] = true;
      if (!exp_dump.empty()) {
        char* effective = nullptr;
        check(gdcs_experiment_config(config.dump().c_str(), &effective), "experiment");
        write_output(exp_dump, json::parse(take(effective)).dump(2) + "\n");
      }
      char* csv = nullptr;
      check(gdcs_experiment_run(config.dump().c_str(), &csv), "experiment");
      const std::string table = take(csv);
      write_output(exp_out, table);
      if (!exp_plot.empty()) {
        char* svg = nullptr;
        check(gdcs_plot_svg(table.c_str(), nullptr, &svg), "plot");
        write_output(exp_plot, take(svg));
      }
    } else if (plot->parsed()) {
      char* svg = nullptr;
      check(gdcs_plot_svg(read_file(plot_csv).c_str(), plot_title.empty() ? nullptr : plot_title.c_str(),
                          &svg),
            "plot");
      write_output(plot_out, take(svg));
    }
  } catch (const CliError& e) {
    std::cerr << "gdcs: " << e.message << "\n";
    return e.code == 0 ? 1 : 2;
  }
  return 0;
}
