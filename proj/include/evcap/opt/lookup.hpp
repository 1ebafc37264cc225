// Copyright 2026 The evcap Authors
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

#include <optional>
#include <vector>

namespace evcap::opt {

// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson
// slopes, same end conditions as SciPy's PchipInterpolator). Monotone data
// yields a monotone interpolant.
class Pchip {
 public:
  // `x` strictly increasing, at least two points.
  Pchip(std::vector<double> x, std::vector<double> y);

  double operator()(double at) const;
  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
};

// Fleet-mean inconvenience measured by simulation at a handful of battery
// capacities over a horizon of `horizon_days`.
class SimulatedLookup {
 public:
  SimulatedLookup(std::vector<double> battery_kwh, std::vector<double> tau_e_hours,
                  double horizon_days);

  // Inconvenience hours per year at capacity `b`, or nullopt outside the
  // sampled capacity range.
  std::optional<double> annual_tau_e(double b) const;

  double horizon_days() const { return horizon_days_; }
  double min_capacity() const { return curve_.lo(); }
  double max_capacity() const { return curve_.hi(); }

 private:
  Pchip curve_;
  double horizon_days_;
};

}  // namespace evcap::opt
