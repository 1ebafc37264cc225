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

#include <span>
#include <vector>

namespace evcap::util {

// Linear-interpolation quantile on a sample (R type 7 / numpy "linear").
// p in [0, 1]. Throws InvalidParameter on an empty sample.
double quantile(std::span<const double> values, double p);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double iqr() const { return q3 - q1; }
};

Quartiles quartiles(std::span<const double> values);

double mean(std::span<const double> values);

// Spearman rank correlation with average ranks for ties. Returns NaN when
// either side has zero rank variance.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace evcap::util
