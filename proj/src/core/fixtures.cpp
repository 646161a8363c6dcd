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

#include "gdcs/fixtures.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "gdcs/error.hpp"

namespace gdcs {

using nlohmann::json;

namespace {

json kind_to_json(const ComponentKind& kind) {
  if (std::holds_alternative<FullCommon>(kind)) return {{"kind", "full"}};
  if (const auto* p = std::get_if<PartialCommon>(&kind)) {
    return {{"kind", "partial"}, {"sensors", p->sensors.members()}};
  }
  return {{"kind", "innovation"}, {"sensor", std::get<Innovation>(kind).sensor}};
}

ComponentKind kind_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "full") return FullCommon{};
  if (kind == "partial") return PartialCommon{SensorSet(j.at("sensors").get<std::vector<int>>())};
  if (kind == "innovation") return Innovation{j.at("sensor").get<int>()};
  fail(ErrorCode::kParse, "unknown component kind '" + kind + "'");
}

template <typename F>
auto parse_guarded(const std::string& what, F&& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, what + ": " + e.what());
  }
}

}  // namespace

std::string ensemble_to_json(const SignalEnsemble& ensemble) {
  json j;
  j["sensors"] = ensemble.structure.sensor_count;
  j["length"] = ensemble.structure.length;
  j["components"] = json::array();
  for (const auto& c : ensemble.components) {
    json e = kind_to_json(c.kind);
    e["support"] = c.support;
    e["values"] = c.values;
    j["components"].push_back(std::move(e));
  }
  return j.dump(1) + "\n";
}

SignalEnsemble ensemble_from_json(const std::string& text) {
  return parse_guarded("ensemble", [&] {
    const json j = json::parse(text);
    CorrelationStructure s;
    s.sensor_count = j.at("sensors").get<int>();
    s.length = j.at("length").get<int>();
    std::vector<ComponentSignal> components;
    for (const auto& e : j.at("components")) {
      ComponentSignal c;
      c.kind = kind_from_json(e);
      c.support = e.at("support").get<std::vector<int>>();
      c.values = e.at("values").get<std::vector<double>>();
      s.components.push_back(c.kind);
      components.push_back(std::move(c));
    }
    return make_ensemble(s, std::move(components));
  });
}

std::string measurements_to_json(const MeasurementSet& ms) {
  json j;
  j["length"] = ms.length();
  j["matrices"] = json::array();
  for (const auto& a : ms.matrices) {
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(a.size()));
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      for (Eigen::Index c = 0; c < a.cols(); ++c) data.push_back(a(r, c));
    }
    j["matrices"].push_back({{"rows", a.rows()}, {"data", std::move(data)}});
  }
  j["observations"] = std::vector<double>(ms.observations.data(),
                                          ms.observations.data() + ms.observations.size());
  return j.dump() + "\n";
}

MeasurementSet measurements_from_json(const std::string& text) {
  return parse_guarded("measurements", [&] {
    const json j = json::parse(text);
    const int N = j.at("length").get<int>();
    if (N < 1) fail(ErrorCode::kParse, "measurements: length must be positive");
    MeasurementSet ms;
    for (const auto& e : j.at("matrices")) {
      const int rows = e.at("rows").get<int>();
      const auto data = e.at("data").get<std::vector<double>>();
      if (rows < 0 || data.size() != static_cast<std::size_t>(rows) * N) {
        fail(ErrorCode::kParse, "measurements: matrix data does not match rows x length");
      }
      Eigen::MatrixXd a(rows, N);
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < N; ++c) a(r, c) = data[static_cast<std::size_t>(r) * N + c];
      }
      ms.matrices.push_back(std::move(a));
    }
    const auto y = j.at("observations").get<std::vector<double>>();
    if (static_cast<int>(y.size()) != ms.total_rows()) {
      fail(ErrorCode::kParse, "measurements: observation length does not match the matrices");
    }
    ms.observations = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
    return ms;
  });
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream out;
  out << f.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  f << text;
  if (!f) fail(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace gdcs
