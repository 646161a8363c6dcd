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

#include "gdcs/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <string_view>

#include "gdcs/error.hpp"
#include "gdcs/fixtures.hpp"

namespace gdcs {

namespace {

struct Style {
  const char* color;
  const char* dash;
  const char* label;
};

Style style_of(Method m) {
  switch (m) {
    case Method::kSeparate:
      return {"#7f7f7f", "6,3", "Separate"};
    case Method::kDcs:
      return {"#1f77b4", "", "DCS"};
    case Method::kGdcsOracle:
      return {"#d62728", "2,2", "Oracle GDCS"};
    case Method::kGdcsSearch:
      return {"#2ca02c", "", "GDCS (search)"};
  }
  return {"#000000", "", "?"};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Roughly five ticks at a 1, 2 or 5 step.
int tick_step(int span) {
  for (int step : {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000}) {
    if (span / step <= 6) return step;
  }
  return std::max(1, span / 5);
}

}  // namespace

std::string render_svg(const CurveTable& table, const PlotOptions& options) {
  if (table.points.empty()) fail(ErrorCode::kInvalidArgument, "empty curve table");
  if (options.width < 200 || options.height < 160) fail(ErrorCode::kInvalidArgument, "plot too small");
  int lo = table.points.front().M;
  int hi = lo;
  std::set<int> methods;
  for (const auto& p : table.points) {
    lo = std::min(lo, p.M);
    hi = std::max(hi, p.M);
    methods.insert(method_id(p.method));
  }
  if (hi == lo) {
    --lo;
    ++hi;
  }

  const double left = 60, right = 20, top = 40, bottom = 50;
  const double w = options.width - left - right;
  const double h = options.height - top - bottom;
  const auto px = [&](double m) { return left + (m - lo) / (hi - lo) * w; };
  const auto py = [&](double p) { return top + (1.0 - p) * h; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) +
       "\" height=\"" + std::to_string(options.height) + "\" viewBox=\"0 0 " +
       std::to_string(options.width) + " " + std::to_string(options.height) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(left + w / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
       escape(options.title) + "</text>\n";

  // Grid and ticks.
  for (int k = 0; k <= 5; ++k) {
    const double p = k / 5.0;
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(py(p)) + "\" x2=\"" + num(left + w) +
         "\" y2=\"" + num(py(p)) + "\" stroke=\"#dddddd\"/>\n";
    s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(p) + 4) + "\" text-anchor=\"end\">" +
         num(p).substr(0, 3) + "</text>\n";
  }
  const int step = tick_step(hi - lo);
  for (int m = (lo + step - 1) / step * step; m <= hi; m += step) {
    s += "<line x1=\"" + num(px(m)) + "\" y1=\"" + num(top) + "\" x2=\"" + num(px(m)) +
         "\" y2=\"" + num(top + h) + "\" stroke=\"#eeeeee\"/>\n";
    s += "<text x=\"" + num(px(m)) + "\" y=\"" + num(top + h + 16) + "\" text-anchor=\"middle\">" +
         std::to_string(m) + "</text>\n";
  }
  s += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(w) + "\" height=\"" +
       num(h) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + num(left + w / 2) + "\" y=\"" + num(options.height - 12.0) +
       "\" text-anchor=\"middle\">Measurements per sensor M</text>\n";
  s += "<text transform=\"translate(16 " + num(top + h / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">Success probability</text>\n";

  int row = 0;
  for (int id : methods) {
    const Method m = static_cast<Method>(id);
    const Style st = style_of(m);
    const auto curve = table.curve(m);
    std::string pts;
    for (const auto& p : curve) pts += num(px(p.M)) + "," + num(py(p.success_prob())) + " ";
    pts.pop_back();
    s += "<polyline fill=\"none\" stroke=\"" + std::string(st.color) + "\" stroke-width=\"1.8\"";
    if (*st.dash) s += " stroke-dasharray=\"" + std::string(st.dash) + "\"";
    s += " points=\"" + pts + "\"/>\n";
    for (const auto& p : curve) {
      s += "<circle cx=\"" + num(px(p.M)) + "\" cy=\"" + num(py(p.success_prob())) +
           "\" r=\"2.5\" fill=\"" + st.color + "\"/>\n";
    }
    const double ly = top + h - 14.0 * (static_cast<double>(methods.size()) - row) - 4;
    const double lx = left + w - 130;
    s += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 22) + "\" y2=\"" +
         num(ly) + "\" stroke=\"" + st.color + "\" stroke-width=\"1.8\"";
    if (*st.dash) s += " stroke-dasharray=\"" + std::string(st.dash) + "\"";
    s += "/>\n<text x=\"" + num(lx + 28) + "\" y=\"" + num(ly + 4) + "\">" + st.label + "</text>\n";
    ++row;
  }
  s += "</svg>\n";
  return s;
}

void emit_plot(const CurveTable& table, const std::string& path, const PlotOptions& options) {
  write_text_file(path, render_svg(table, options));
}

}  // namespace gdcs
