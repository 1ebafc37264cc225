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

#include <string>
#include <string_view>
#include <vector>

#include "evcap/opt/solver.hpp"

namespace evcap::opt {

struct DriverOutcome {
  bool ok = false;
  std::string error;          // set when !ok
  OptimizationResult result;  // valid when ok
};

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

struct PopulationResult {
  std::vector<DriverOutcome> per_driver;  // input order
  std::size_t n_ok = 0;
  double mean_b = 0.0;  // over successful drivers; NaN if none
  double iqr_b = 0.0;
  std::vector<HistogramBin> histogram;
};

inline constexpr double kHistogramBinKwh = 5.0;

// Optimizes each driver independently. Failures are recorded per driver,
// not propagated.
PopulationResult population_optimize(const std::vector<ObjectiveSpec>& specs,
                                     const SolverOptions& options = {}, unsigned workers = 0);

// Histogram of capacities with bins [k*width, (k+1)*width), spanning the
// lowest through the highest occupied bin.
std::vector<HistogramBin> histogram(const std::vector<double>& values, double width);

enum class WhatIfAxis { rho, power, policy };

WhatIfAxis parse_whatif_axis(std::string_view name);
std::string_view to_string(WhatIfAxis axis);

struct WhatIfPoint {
  double value = 0.0;
  bool ok = false;
  std::string error;
  OptimizationResult result;
};

// Re-optimizes `spec` once per value of one lever: station density,
// charger power, or a flat policy amount (EUR). Utilization is held fixed.
std::vector<WhatIfPoint> whatif_sweep(const ObjectiveSpec& spec, WhatIfAxis axis,
                                      const std::vector<double>& values,
                                      const SolverOptions& options = {}, unsigned workers = 0);

struct WhatIfCell {
  double rho = 0.0;
  double power = 0.0;
  std::size_t policy_index = 0;
  bool ok = false;
  std::string error;
  OptimizationResult result;
};

// Full (rho x power x policy) grid, row-major in that order.
std::vector<WhatIfCell> whatif_grid(const ObjectiveSpec& spec, const std::vector<double>& rhos,
                                    const std::vector<double>& powers,
                                    const std::vector<cost::PolicySchedule>& policies,
                                    const SolverOptions& options = {}, unsigned workers = 0);

}  // namespace evcap::opt
