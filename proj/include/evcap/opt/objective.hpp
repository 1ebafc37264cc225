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

#include <functional>
#include <memory>
#include <optional>
#include <string_view>

#include "evcap/analytic/inconvenience.hpp"
#include "evcap/cost/policy.hpp"
#include "evcap/cost/price_model.hpp"
#include "evcap/opt/lookup.hpp"

namespace evcap::opt {

enum class CostSource { analytic, simulated_lookup };

CostSource parse_cost_source(std::string_view name);
std::string_view to_string(CostSource source);

// Everything needed to price one driver's battery choice. The driver's
// distance is annual.
struct ObjectiveSpec {
  analytic::DriverProfile driver;
  analytic::ChargingEnvironment env;
  cost::CostParams cost;
  cost::PolicySchedule schedule;
  cost::PriceModel model = cost::PriceModel::market_default();
  double b_min = 1.0;
  double b_max = 150.0;
  CostSource source = CostSource::analytic;
  std::shared_ptr<const SimulatedLookup> lookup;

  // Smallest capacity for which the analytic inconvenience is defined once
  // the health factor is applied.
  double feasibility_boundary() const;
  void validate() const;
};

struct CostBreakdown {
  double total = 0.0;  // EUR/yr
  double c_p = 0.0;    // annualized purchase cost
  double c_e = 0.0;    // inconvenience cost
};

// Scalar objective over capacity; nullopt marks an infeasible capacity.
using Objective = std::function<std::optional<CostBreakdown>(double)>;

// c_p(B) + mu * tau_e(h * B). Throws InfeasibleBattery where tau_e is undefined.
CostBreakdown objective_eval(const ObjectiveSpec& spec, double battery_kwh);

// Wraps objective_eval, mapping InfeasibleBattery to nullopt. Validates once.
Objective make_objective(const ObjectiveSpec& spec);

}  // namespace evcap::opt
