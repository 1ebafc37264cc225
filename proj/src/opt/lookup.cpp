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

#include "evcap/opt/lookup.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "evcap/errors.hpp"

namespace evcap::opt {
namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

double end_slope(double h0, double h1, double m0, double m1) {
  const double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
  if (sign(d) != sign(m0)) return 0.0;
  if (sign(m0) != sign(m1) && std::abs(d) > std::abs(3.0 * m0)) return 3.0 * m0;
  return d;
}

}  // namespace

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size() || x_.size() < 2) {
    throw InvalidParameter("interpolation needs at least two (x, y) samples");
  }
  for (std::size_t i = 1; i < x_.size(); ++i) {
    if (!(x_[i] > x_[i - 1])) throw InvalidParameter("interpolation abscissae must increase strictly");
  }
  const std::size_t n = x_.size();
  std::vector<double> h(n - 1), m(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    m[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  slope_.assign(n, 0.0);
  if (n == 2) {
    slope_[0] = slope_[1] = m[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (m[k - 1] * m[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    slope_[k] = (w1 + w2) / (w1 / m[k - 1] + w2 / m[k]);
  }
  slope_[0] = end_slope(h[0], h[1], m[0], m[1]);
  slope_[n - 1] = end_slope(h[n - 2], h[n - 3], m[n - 2], m[n - 3]);
}

double Pchip::operator()(double at) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), at);
  std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  k = std::min(k, x_.size() - 2);
  const double h = x_[k + 1] - x_[k];
  const double t = (at - x_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[k] + h10 * h * slope_[k] + h01 * y_[k + 1] + h11 * h * slope_[k + 1];
}

namespace {

// Sorts by capacity and averages duplicate capacities.
std::pair<std::vector<double>, std::vector<double>> normalize(const std::vector<double>& b,
                                                              const std::vector<double>& tau) {
  if (b.size() != tau.size()) throw InvalidParameter("lookup columns differ in length");
  std::map<double, std::pair<double, int>> acc;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(b[i] > 0.0) || !(tau[i] >= 0.0) || !std::isfinite(tau[i])) {
      throw InvalidParameter("lookup samples need B > 0 and finite tau_e >= 0");
    }
    auto& slot = acc[b[i]];
    slot.first += tau[i];
    slot.second += 1;
  }
  std::vector<double> xs, ys;
  for (const auto& [x, s] : acc) {
    xs.push_back(x);
    ys.push_back(s.first / s.second);
  }
  return {xs, ys};
}

}  // namespace

SimulatedLookup::SimulatedLookup(std::vector<double> battery_kwh, std::vector<double> tau_e_hours,
                                 double horizon_days)
    : curve_([&] {
        auto [x, y] = normalize(battery_kwh, tau_e_hours);
        return Pchip(std::move(x), std::move(y));
      }()),
      horizon_days_(horizon_days) {
  if (!(horizon_days_ > 0.0)) throw InvalidParameter("lookup horizon must be > 0 days");
}

std::optional<double> SimulatedLookup::annual_tau_e(double b) const {
  if (b < curve_.lo() || b > curve_.hi()) return std::nullopt;
  return std::max(0.0, curve_(b)) * 365.0 / horizon_days_;
}

}  // namespace evcap::opt
