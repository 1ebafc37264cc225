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

#include "evcap/opt/objective.hpp"

#include <cmath>
#include <string>

#include "evcap/errors.hpp"

namespace evcap::opt {

CostSource parse_cost_source(std::string_view name) {
  if (name == "analytic") return CostSource::analytic;
  if (name == "simulated-lookup" || name == "simulated_lookup") return CostSource::simulated_lookup;
  throw InvalidParameter("unknown cost source '" + std::string(name) + "'");
}

std::string_view to_string(CostSource source) {
  return source == CostSource::analytic ? "analytic" : "simulated-lookup";
}

double ObjectiveSpec::feasibility_boundary() const {
  if (source == CostSource::simulated_lookup) {
    return lookup ? lookup->min_capacity() / cost.health_factor : 0.0;
  }
  const double d_sk = analytic::expected_detour_distance(env);
  return driver.eta * d_sk / (driver.sigma * cost.health_factor);
}

void ObjectiveSpec::validate() const {
  driver.validate();
  env.validate();
  cost.validate();
  schedule.validate();
  if (!(b_min > 0.0) || !(b_max >= b_min) || !std::isfinite(b_max)) {
    throw InvalidParameter("search range must satisfy 0 < B_min <= B_max");
  }
  if (b_max > 200.0) throw InvalidParameter("B_max must be <= 200 kWh");
  if (source == CostSource::simulated_lookup && !lookup) {
    throw InvalidParameter("simulated-lookup source requires a lookup table");
  }
}

CostBreakdown objective_eval(const ObjectiveSpec& spec, double battery_kwh) {
  CostBreakdown out;
  out.c_p = cost::annualized_purchase_cost(spec.model, spec.cost, spec.schedule, battery_kwh);
  const double effective = spec.cost.health_factor * battery_kwh;
  double tau_e = 0.0;
  if (spec.source == CostSource::analytic) {
    tau_e = analytic::inconvenience_closed_form(effective, spec.driver, spec.env);
  } else {
    if (!spec.lookup) throw InvalidParameter("simulated-lookup source requires a lookup table");
    const auto tau = spec.lookup->annual_tau_e(effective);
    if (!tau) {
      throw InfeasibleBattery("effective capacity " + std::to_string(effective) +
                              " kWh is outside the simulated lookup range");
    }
    tau_e = *tau;
  }
  out.c_e = analytic::inconvenience_cost(tau_e, spec.cost.mu);
  out.total = out.c_p + out.c_e;
  return out;
}

Objective make_objective(const ObjectiveSpec& spec) {
  spec.validate();
  return [spec](double b) -> std::optional<CostBreakdown> {
    try {
      return objective_eval(spec, b);
    } catch (const InfeasibleBattery&) {
      return std::nullopt;
    }
  };
}

}  // namespace evcap::opt
