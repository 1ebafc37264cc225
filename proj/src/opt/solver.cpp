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

#include "evcap/opt/solver.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "evcap/errors.hpp"

namespace evcap::opt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Counts evaluations and remembers the best feasible point seen.
class Tracker {
 public:
  explicit Tracker(const Objective& f) : f_(f) {}

  double operator()(double b) {
    ++evaluations_;
    const auto r = f_(b);
    if (!r) return kInf;
    if (!best_ || r->total < best_cost_.total ||
        (r->total == best_cost_.total && b < best_b_)) {
      best_ = true;
      best_b_ = b;
      best_cost_ = *r;
    }
    return r->total;
  }

  OptimizationResult result(bool converged) const {
    OptimizationResult out;
    out.b_opt = best_b_;
    out.c_p = best_cost_.c_p;
    out.c_e = best_cost_.c_e;
    out.total_cost = best_cost_.c_p + best_cost_.c_e;
    out.converged = converged;
    out.evaluations = evaluations_;
    return out;
  }

  bool any_feasible() const { return best_; }

 private:
  const Objective& f_;
  std::size_t evaluations_ = 0;
  bool best_ = false;
  double best_b_ = 0.0;
  CostBreakdown best_cost_;
};

std::vector<double> grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidParameter("scan step must be > 0");
  if (!(hi >= lo)) throw InvalidParameter("scan range must satisfy lo <= hi");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> points;
  points.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) points.push_back(lo + static_cast<double>(k) * step);
  return points;
}

}  // namespace

OptimizationResult brute_force_scan(const Objective& objective, double lo, double hi, double step) {
  Tracker track(objective);
  for (double b : grid(lo, hi, step)) track(b);
  if (!track.any_feasible()) throw AllInfeasible("no feasible battery capacity on the scan grid");
  return track.result(true);
}

OptimizationResult brute_force_scan(const ObjectiveSpec& spec, double step) {
  return brute_force_scan(make_objective(spec), spec.b_min, spec.b_max, step);
}

OptimizationResult optimize_battery(const Objective& objective, double lo, double hi,
                                    const SolverOptions& options) {
  Tracker track(objective);
  const auto coarse = grid(lo, hi, options.coarse_step);
  std::vector<double> values;
  values.reserve(coarse.size() + 1);
  for (double b : coarse) values.push_back(track(b));
  std::vector<double> points = coarse;
  if (points.back() < hi) {
    points.push_back(hi);
    values.push_back(track(hi));
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  if (!std::isfinite(values[best])) {
    throw AllInfeasible("no feasible battery capacity in [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "] kWh");
  }

  double a = best > 0 ? points[best - 1] : points[best];
  double b = best + 1 < points.size() ? points[best + 1] : points[best];

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = track(c);
  double fd = track(d);
  std::size_t iter = 0;
  while (b - a > options.tolerance && iter < options.max_iterations) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = track(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = track(d);
    }
    ++iter;
  }
  // The final bracket's ends are candidates too; this returns range ends
  // exactly when the objective is monotone.
  track(a);
  track(b);
  return track.result(b - a <= options.tolerance);
}

OptimizationResult optimize_battery(const ObjectiveSpec& spec, const SolverOptions& options) {
  return optimize_battery(make_objective(spec), spec.b_min, spec.b_max, options);
}

}  // namespace evcap::opt
