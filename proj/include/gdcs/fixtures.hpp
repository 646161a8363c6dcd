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

#ifndef GDCS_FIXTURES_HPP_
#define GDCS_FIXTURES_HPP_

#include <string>

#include "gdcs/model.hpp"
#include "gdcs/sensing.hpp"

namespace gdcs {

// JSON documents for ensembles and measurement sets. Doubles are written
// with enough digits to round-trip exactly.
std::string ensemble_to_json(const SignalEnsemble& ensemble);
SignalEnsemble ensemble_from_json(const std::string& text);

std::string measurements_to_json(const MeasurementSet& measurements);
MeasurementSet measurements_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gdcs

#endif  // GDCS_FIXTURES_HPP_
