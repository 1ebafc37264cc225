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
#include <utility>
#include <vector>

#include "evcap/analytic/inconvenience.hpp"

namespace evcap::analytic {

enum class SweepParameter { battery, distance, eta, sigma, speed, rho, xi, power };

// Accepts "B"/"battery", "d"/"distance", "eta", "sigma", "v"/"speed", "rho",
// "xi", "P"/"power". Throws InvalidParameter on anything else.
SweepParameter parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter p);

struct SensitivityBase {
  double battery_kwh = 20.0;
  DriverProfile driver;
  ChargingEnvironment env;
};

// Constants of the reference sensitivity study (B=20 kWh, d=10000 km,
// eta=0.2, sigma=0.6, v=10 km/h, xi=0.1, rho=1, P=50 kW).
SensitivityBase reference_constants();

// Range that the reference study sweeps each parameter over.
std::pair<double, double> reference_range(SweepParameter p);

struct SweepPoint {
  double value = 0.0;
  double tau_e = 0.0;  // NaN when infeasible
  bool feasible = true;
  std::string note;    // reason when infeasible
};

enum class Trend { increasing, decreasing, constant, non_monotone, insufficient };
std::string_view to_string(Trend t);

struct SensitivitySweep {
  SweepParameter parameter = SweepParameter::battery;
  std::vector<SweepPoint> points;
  Trend trend = Trend::insufficient;  // over feasible points only
};

// Evaluates tau_e at `steps` evenly spaced values in [lo, hi]. Points outside
// the model's validity domain are kept and flagged.
SensitivitySweep sensitivity_sweep(const SensitivityBase& base, SweepParameter parameter,
                                   double lo, double hi, std::size_t steps);

}  // namespace evcap::analytic
