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

#ifndef GDCS_PLOT_HPP_
#define GDCS_PLOT_HPP_

#include <string>

#include "gdcs/harness.hpp"

namespace gdcs {

struct PlotOptions {
  std::string title = "Success probability";
  int width = 640;
  int height = 440;
};

// Self-contained SVG: success probability against per-sensor M, one series
// per method in the table.
std::string render_svg(const CurveTable& table, const PlotOptions& options = {});
void emit_plot(const CurveTable& table, const std::string& path, const PlotOptions& options = {});

}  // namespace gdcs

#endif  // GDCS_PLOT_HPP_
