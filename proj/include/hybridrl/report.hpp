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

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hybridrl/analysis.hpp"
#include "hybridrl/trainer.hpp"

namespace hybridrl::report {

// Every writer takes a `header` of `#` comment lines that is emitted verbatim
// ahead of the column row.

// t,<state names>,<obs names>,u,reward. One row per applied control; u is the
// saturated command and excludes the disturbance.
std::string trajectory_csv(const analysis::Trajectory& traj, std::string_view header);

std::string train_csv(const trainer::TrainReport& report, std::string_view header);

// Marker written instead of an overshoot for responses that never cross the
// target.
inline constexpr std::string_view kMonotoneMarker = "not defined: monotone approach";

// Aggregates one or more responses of the same controller into the row
// env,controller,sse_mean,sse_std,overshoot_mean,overshoot_std,settle_mean,settle_std.
std::string metrics_row(std::string_view env, std::string_view controller,
                        std::span<const analysis::ResponseMetrics> runs);
std::string metrics_csv(std::span<const std::string> rows, std::string_view header);

std::string curve_csv(const analysis::RobustnessCurve& curve, std::string_view header);

std::string matrix_csv(const Eigen::MatrixXd& m, std::string_view header);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> spread;  // optional +- band around y
};

// Static line chart; non-finite points are skipped.
std::string svg_line_chart(std::string_view title, std::string_view x_label,
                           std::string_view y_label, std::span<const Series> series);

}  // namespace hybridrl::report
