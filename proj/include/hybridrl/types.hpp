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

#include <initializer_list>
#include <utility>

#include <Eigen/Dense>

namespace hybridrl {

// A dense vector that cannot be silently mixed with a vector of another
// role. Physical states and policy observations live in different spaces
// (angles vs. their cos/sin embedding), so they get distinct types.
template <typename Tag>
class TaggedVector {
 public:
  TaggedVector() = default;
  explicit TaggedVector(Eigen::VectorXd values) : values_(std::move(values)) {}
  TaggedVector(std::initializer_list<double> init) : values_(static_cast<Eigen::Index>(init.size())) {
    Eigen::Index i = 0;
    for (double v : init) values_[i++] = v;
  }

  const Eigen::VectorXd& vec() const { return values_; }
  Eigen::VectorXd& vec() { return values_; }

  Eigen::Index size() const { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }
  double& operator[](Eigen::Index i) { return values_[i]; }

  bool all_finite() const { return values_.allFinite(); }

  friend bool operator==(const TaggedVector& a, const TaggedVector& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  Eigen::VectorXd values_;
};

struct StateTag;
struct ObsTag;

// Physical simulator state (angles wrapped to (-pi, pi]).
using StateVec = TaggedVector<StateTag>;
// Observation fed to policies (angles replaced by cos/sin).
using ObsVec = TaggedVector<ObsTag>;

// Continuous-time linear model xdot = A x + B u.
struct LinearSystem {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;

  Eigen::Index states() const { return A.rows(); }
  Eigen::Index inputs() const { return B.cols(); }
};

}  // namespace hybridrl
