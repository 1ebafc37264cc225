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

#include <cstddef>

#include "evcap/opt/objective.hpp"

namespace evcap::opt {

struct OptimizationResult {
  double b_opt = 0.0;       // kWh
  double total_cost = 0.0;  // EUR/yr, equals c_p + c_e
  double c_p = 0.0;
  double c_e = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
};

struct SolverOptions {
  double coarse_step = 1.0;   // kWh, bracketing scan
  double tolerance = 0.01;    // kWh, final bracket width
  std::size_t max_iterations = 200;
};

// Evaluates the objective at lo, lo+step, ... <= hi and returns the argmin.
// Ties go to the smaller capacity. Throws AllInfeasible.
OptimizationResult brute_force_scan(const Objective& objective, double lo, double hi, double step);
OptimizationResult brute_force_scan(const ObjectiveSpec& spec, double step);

// Coarse scan to pick a bracket around the best grid point, then
// golden-section search inside it. Throws AllInfeasible.
OptimizationResult optimize_battery(const Objective& objective, double lo, double hi,
                                    const SolverOptions& options = {});
OptimizationResult optimize_battery(const ObjectiveSpec& spec, const SolverOptions& options = {});

}  // namespace evcap::opt
