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

#include "evcap/analytic/sensitivity.hpp"

#include <cmath>
#include <limits>

#include "evcap/errors.hpp"

namespace evcap::analytic {

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "B" || name == "battery") return SweepParameter::battery;
  if (name == "d" || name == "distance") return SweepParameter::distance;
  if (name == "eta") return SweepParameter::eta;
  if (name == "sigma") return SweepParameter::sigma;
  if (name == "v" || name == "speed") return SweepParameter::speed;
  if (name == "rho") return SweepParameter::rho;
  if (name == "xi") return SweepParameter::xi;
  if (name == "P" || name == "power") return SweepParameter::power;
  throw InvalidParameter("unknown sweep parameter '" + std::string(name) + "'");
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::battery: return "B";
    case SweepParameter::distance: return "d";
    case SweepParameter::eta: return "eta";
    case SweepParameter::sigma: return "sigma";
    case SweepParameter::speed: return "v";
    case SweepParameter::rho: return "rho";
    case SweepParameter::xi: return "xi";
    case SweepParameter::power: return "P";
  }
  return "?";
}

std::string_view to_string(Trend t) {
  switch (t) {
    case Trend::increasing: return "increasing";
    case Trend::decreasing: return "decreasing";
    case Trend::constant: return "constant";
    case Trend::non_monotone: return "non_monotone";
    case Trend::insufficient: return "insufficient";
  }
  return "?";
}

SensitivityBase reference_constants() {
  SensitivityBase base;
  base.battery_kwh = 20.0;
  base.driver = DriverProfile{.distance = 10000.0, .eta = 0.2, .sigma = 0.6, .speed = 10.0};
  base.env = ChargingEnvironment{.rho = 1.0, .xi = 0.1, .power = 50.0};
  return base;
}

std::pair<double, double> reference_range(SweepParameter p) {
  switch (p) {
    case SweepParameter::battery: return {5.0, 150.0};
    case SweepParameter::distance: return {1000.0, 50000.0};
    case SweepParameter::eta: return {0.1, 1.0};
    case SweepParameter::sigma: return {0.1, 1.0};
    case SweepParameter::speed: return {1.0, 50.0};
    case SweepParameter::rho: return {0.1, 5.0};
    case SweepParameter::xi: return {0.1, 0.9};
    case SweepParameter::power: return {3.0, 150.0};
  }
  return {0.0, 0.0};
}

SensitivitySweep sensitivity_sweep(const SensitivityBase& base, SweepParameter parameter,
                                   double lo, double hi, std::size_t steps) {
  if (steps == 0) throw InvalidParameter("sweep needs at least one step");
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
    throw InvalidParameter("sweep range must satisfy lo <= hi");
  }
  SensitivitySweep sweep;
  sweep.parameter = parameter;
  sweep.points.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double value =
        steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    SensitivityBase at = base;
    switch (parameter) {
      case SweepParameter::battery: at.battery_kwh = value; break;
      case SweepParameter::distance: at.driver.distance = value; break;
      case SweepParameter::eta: at.driver.eta = value; break;
      case SweepParameter::sigma: at.driver.sigma = value; break;
      case SweepParameter::speed: at.driver.speed = value; break;
      case SweepParameter::rho: at.env.rho = value; break;
      case SweepParameter::xi: at.env.xi = value; break;
      case SweepParameter::power: at.env.power = value; break;
    }
    SweepPoint point;
    point.value = value;
    try {
      point.tau_e = inconvenience_closed_form(at.battery_kwh, at.driver, at.env);
    } catch (const Error& e) {
      point.feasible = false;
      point.tau_e = std::numeric_limits<double>::quiet_NaN();
      point.note = e.what();
    }
    sweep.points.push_back(std::move(point));
  }

  std::vector<double> tau;
  for (const auto& p : sweep.points) {
    if (p.feasible) tau.push_back(p.tau_e);
  }
  if (tau.size() < 2) {
    sweep.trend = Trend::insufficient;
    return sweep;
  }
  bool inc = true, dec = true, flat = true;
  for (std::size_t i = 1; i < tau.size(); ++i) {
    inc = inc && tau[i] > tau[i - 1];
    dec = dec && tau[i] < tau[i - 1];
    flat = flat && tau[i] == tau[i - 1];
  }
  sweep.trend = inc ? Trend::increasing
              : dec ? Trend::decreasing
              : flat ? Trend::constant
                     : Trend::non_monotone;
  return sweep;
}

}  // namespace evcap::analytic
