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

#include <string_view>

#include "evcap/cost/price_model.hpp"

namespace evcap::cost {

enum class PolicyKind { flat, capacity_threshold, linear_externality };

PolicyKind parse_policy_kind(std::string_view name);
std::string_view to_string(PolicyKind kind);

// Tax/incentive (or externality) amount added to the purchase price as a
// function of capacity. Positive values are taxes, negative are subsidies.
struct PolicySchedule {
  PolicyKind kind = PolicyKind::flat;
  double flat_value = 0.0;
  double threshold_kwh = 40.0;
  double tax_above = 0.0;
  double subsidy_below = 0.0;
  double externality_slope = 0.0;
  double externality_intercept = 0.0;

  static PolicySchedule flat(double value) {
    PolicySchedule s;
    s.flat_value = value;
    return s;
  }
  static PolicySchedule capacity_threshold(double threshold_kwh, double tax_above,
                                           double subsidy_below) {
    PolicySchedule s;
    s.kind = PolicyKind::capacity_threshold;
    s.threshold_kwh = threshold_kwh;
    s.tax_above = tax_above;
    s.subsidy_below = subsidy_below;
    return s;
  }
  static PolicySchedule linear_externality(double slope, double intercept) {
    PolicySchedule s;
    s.kind = PolicyKind::linear_externality;
    s.externality_slope = slope;
    s.externality_intercept = intercept;
    return s;
  }

  void validate() const;
};

// Capacities strictly above the threshold pay the tax; at or below it they
// receive the subsidy.
double apply_policy(const PolicySchedule& schedule, double battery_kwh);

struct CostParams {
  double beta = 0.25;          // residual value fraction at end of life
  double lifetime_years = 10.0;
  double policy_value = 0.0;   // extra signed amount added on top of the schedule, EUR
  double mu = 16.65;           // value of time, EUR/h
  double health_factor = 0.7;  // usable capacity fraction at end of life

  void validate() const;
};

// (1 - beta) * (base_price(B) + p(B)) / T, EUR per year.
double annualized_purchase_cost(const PriceModel& model, const CostParams& params,
                                const PolicySchedule& schedule, double battery_kwh);

}  // namespace evcap::cost
