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

#include "evcap/cost/policy.hpp"

#include <cmath>
#include <string>

#include "evcap/errors.hpp"

namespace evcap::cost {

PolicyKind parse_policy_kind(std::string_view name) {
  if (name == "flat") return PolicyKind::flat;
  if (name == "capacity_threshold") return PolicyKind::capacity_threshold;
  if (name == "linear_externality") return PolicyKind::linear_externality;
  throw InvalidParameter("unknown policy kind '" + std::string(name) + "'");
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::flat: return "flat";
    case PolicyKind::capacity_threshold: return "capacity_threshold";
    case PolicyKind::linear_externality: return "linear_externality";
  }
  return "?";
}

void PolicySchedule::validate() const {
  const bool finite = std::isfinite(flat_value) && std::isfinite(threshold_kwh) &&
                      std::isfinite(tax_above) && std::isfinite(subsidy_below) &&
                      std::isfinite(externality_slope) && std::isfinite(externality_intercept);
  if (!finite) throw InvalidParameter("policy schedule values must be finite");
  if (kind == PolicyKind::capacity_threshold && !(threshold_kwh > 0.0)) {
    throw InvalidParameter("policy threshold_kwh must be > 0");
  }
}

double apply_policy(const PolicySchedule& schedule, double battery_kwh) {
  switch (schedule.kind) {
    case PolicyKind::flat:
      return schedule.flat_value;
    case PolicyKind::capacity_threshold:
      return battery_kwh > schedule.threshold_kwh ? schedule.tax_above : -schedule.subsidy_below;
    case PolicyKind::linear_externality:
      return schedule.externality_slope * battery_kwh + schedule.externality_intercept;
  }
  return 0.0;
}

void CostParams::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw InvalidParameter("beta must be in [0, 1]");
  if (!(lifetime_years > 0.0) || !std::isfinite(lifetime_years)) {
    throw InvalidParameter("lifetime_years must be > 0");
  }
  if (!std::isfinite(policy_value)) throw InvalidParameter("policy_value must be finite");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidParameter("mu must be >= 0");
  if (!(health_factor > 0.0 && health_factor <= 1.0)) {
    throw InvalidParameter("health_factor must be in (0, 1]");
  }
}

double annualized_purchase_cost(const PriceModel& model, const CostParams& params,
                                const PolicySchedule& schedule, double battery_kwh) {
  params.validate();
  schedule.validate();
  const double p = params.policy_value + apply_policy(schedule, battery_kwh);
  return (1.0 - params.beta) * (base_price(model, battery_kwh) + p) / params.lifetime_years;
}

}  // namespace evcap::cost
