// Copyright 2026 The hybridrl Authors
//
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

#include "hybridrl/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <limits>

#include "hybridrl/text_format.hpp"

namespace hybridrl::report {

namespace {

using text::format_double;

void mean_std(const std::vector<double>& v, double& mean, double& std) {
  mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  std = std::sqrt(var / static_cast<double>(v.size()));
}

std::string escape_xml(std::string_view s) {
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

// Short fixed-precision label for axis ticks.
std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string trajectory_csv(const analysis::Trajectory& traj, std::string_view header) {
  std::string out(header);
  out += "t";
  for (const auto& n : envs::state_names(traj.kind)) out += "," + n;
  for (const auto& n : envs::obs_names(traj.kind)) out += "," + n;
  out += ",u,reward\n";
  for (std::size_t t = 0; t < traj.u.size(); ++t) {
    out += std::to_string(t);
    const StateVec& s = traj.states[t];
    for (Eigen::Index i = 0; i < s.size(); ++i) out += "," + format_double(s[i]);
    const ObsVec& o = traj.obs[t];
    for (Eigen::Index i = 0; i < o.size(); ++i) out += "," + format_double(o[i]);
    out += "," + format_double(traj.u[t]) + "," + format_double(traj.reward[t]) + "\n";
  }
  return out;
}

std::string train_csv(const trainer::TrainReport& report, std::string_view header) {
  std::string out(header);
  out += "iter,best_return,mean_return,sim_time_s\n";
  for (const auto& it : report.iterations) {
    out += std::to_string(it.iter) + "," + format_double(it.best_return) + "," +
           format_double(it.mean_return) + "," + format_double(it.sim_time_s) + "\n";
  }
  return out;
}

std::string metrics_row(std::string_view env, std::string_view controller,
                        std::span<const analysis::ResponseMetrics> runs) {
  std::vector<double> sse, over, settle;
  bool any_crossed = false;
  bool all_settled = true;
  for (const auto& m : runs) {
    sse.push_back(m.steady_state_error);
    over.push_back(m.overshoot);
    settle.push_back(m.settling_time);
    any_crossed = any_crossed || m.crossed_target;
    all_settled = all_settled && m.settled && !m.diverged;
  }
  double a = 0, b = 0;
  std::string row = std::string(env) + "," + std::string(controller);
  mean_std(sse, a, b);
  row += "," + format_double(a) + "," + format_double(b);
  mean_std(over, a, b);
  if (any_crossed || a != 0.0) {
    row += "," + format_double(a) + "," + format_double(b);
  } else {
    bool moved = std::any_of(runs.begin(), runs.end(),
                             [](const analysis::ResponseMetrics& m) { return m.settling_time > 0; });
    row += moved ? "," + std::string(kMonotoneMarker) + "," : ",0,0";
  }
  mean_std(settle, a, b);
  if (all_settled) {
    row += "," + format_double(a) + "," + format_double(b);
  } else {
    row += ",did not settle,";
  }
  return row;
}

std::string metrics_csv(std::span<const std::string> rows, std::string_view header) {
  std::string out(header);
  out += "env,controller,sse_mean,sse_std,overshoot_mean,overshoot_std,settle_mean,settle_std\n";
  for (const auto& r : rows) out += r + "\n";
  return out;
}

std::string curve_csv(const analysis::RobustnessCurve& curve, std::string_view header) {
  std::string out(header);
  out += "# parameter=" + curve.parameter + " seeds=" + std::to_string(curve.seeds) + "\n";
  out += "factor,mean_reward,std_reward\n";
  for (std::size_t i = 0; i < curve.factors.size(); ++i) {
    out += format_double(curve.factors[i]) + "," + format_double(curve.mean_reward[i]) + "," +
           format_double(curve.std_reward[i]) + "\n";
  }
  return out;
}

std::string matrix_csv(const Eigen::MatrixXd& m, std::string_view header) {
  std::string out(header);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string svg_line_chart(std::string_view title, std::string_view x_label,
                           std::string_view y_label, std::span<const Series> series) {
  constexpr double kWidth = 640, kHeight = 400;
  constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
  constexpr std::array<const char*, 6> kColors = {"#1f77b4", "#d62728", "#2ca02c",
                                                  "#ff7f0e", "#9467bd", "#8c564b"};
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      const double e = i < s.spread.size() && std::isfinite(s.spread[i]) ? s.spread[i] : 0.0;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i] - e);
      y1 = std::max(y1, s.y[i] + e);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y0 -= 1, y1 += 1;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
                    "font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + coord(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape_xml(title) + "</text>\n";
  out += "<rect x=\"" + coord(kLeft) + "\" y=\"" + coord(kTop) + "\" width=\"" + coord(pw) +
         "\" height=\"" + coord(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    out += "<text x=\"" + coord(px(xv)) + "\" y=\"" + coord(kTop + ph + 16) +
           "\" text-anchor=\"middle\">" + tick_label(xv) + "</text>\n";
    out += "<text x=\"" + coord(kLeft - 6) + "\" y=\"" + coord(py(yv) + 4) +
           "\" text-anchor=\"end\">" + tick_label(yv) + "</text>\n";
  }
  out += "<text x=\"" + coord(kLeft + pw / 2) + "\" y=\"" + coord(kHeight - 10) +
         "\" text-anchor=\"middle\">" + escape_xml(x_label) + "</text>\n";
  out += "<text transform=\"translate(16," + coord(kTop + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape_xml(y_label) + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kColors[k % kColors.size()];
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (!s.spread.empty()) {
      std::string upper, lower;
      for (std::size_t i = 0; i < n && i < s.spread.size(); ++i) {
        if (!std::isfinite(s.y[i]) || !std::isfinite(s.spread[i])) continue;
        upper += coord(px(s.x[i])) + "," + coord(py(s.y[i] + s.spread[i])) + " ";
        lower = coord(px(s.x[i])) + "," + coord(py(s.y[i] - s.spread[i])) + " " + lower;
      }
      out += "<polygon points=\"" + upper + lower + "\" fill=\"" + color +
             "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    }
    std::string points;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      points += coord(px(s.x[i])) + "," + coord(py(s.y[i])) + " ";
    }
    out += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
    const double ly = kTop + 14 + 18.0 * static_cast<double>(k);
    out += "<line x1=\"" + coord(kLeft + pw + 10) + "\" y1=\"" + coord(ly - 4) + "\" x2=\"" +
           coord(kLeft + pw + 30) + "\" y2=\"" + coord(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + coord(kLeft + pw + 34) + "\" y=\"" + coord(ly) + "\">" +
           escape_xml(s.name) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace hybridrl::report
