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

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace evcap::cost {

struct PriceRecord {
  double battery_kwh = 0.0;
  double price_eur = 0.0;
};

// Base vehicle price as a quadratic in battery capacity.
struct PriceModel {
  double a2 = 0.0;  // EUR/kWh^2
  double a1 = 0.0;  // EUR/kWh
  double a0 = 0.0;  // EUR

  // Regression on the European market dataset (277 models after filtering).
  static constexpr PriceModel market_default() { return {5.113, 84.871, 26316.599}; }

  // Throws InvalidParameter unless the price stays positive on [lo, hi].
  void validate(double lo = 1.0, double hi = 150.0) const;
};

// Throws InvalidParameter for B <= 0.
double base_price(const PriceModel& model, double battery_kwh);

struct FilterResult {
  std::vector<PriceRecord> kept;
  std::vector<PriceRecord> removed;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
};

// Tukey fences on price: drops records outside [Q1 - 1.5 IQR, Q3 + 1.5 IQR]
// with linear-interpolation quartiles. Input order is preserved in both
// outputs. Throws EmptyDataset.
FilterResult iqr_filter(const std::vector<PriceRecord>& records);

struct PriceFit {
  PriceModel model;
  int degree = 2;
  std::size_t n = 0;
  double rss = 0.0;
  // Standard errors of (a2, a1, a0); NaN when the fit has no residual
  // degrees of freedom. a2's entry is 0 for a linear fit.
  std::array<double, 3> std_errors{};
};

// Ordinary least squares of price on capacity, degree 1 or 2. Throws
// DegenerateDesign with fewer than degree+1 distinct capacities.
PriceFit fit_price_model(const std::vector<PriceRecord>& records, int degree);

// CSV with header `battery_kwh,price_eur`. Throws ParseError naming the row,
// EmptyDataset when no data rows are present.
std::vector<PriceRecord> read_price_csv(std::istream& in, std::string_view source_name);
std::vector<PriceRecord> read_price_csv(const std::filesystem::path& path);

}  // namespace evcap::cost
