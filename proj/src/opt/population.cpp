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

#include "evcap/opt/population.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evcap/errors.hpp"
#include "evcap/util/parallel.hpp"
#include "evcap/util/stats.hpp"

namespace evcap::opt {
namespace {

template <typename Out>
void solve_into(Out& out, const ObjectiveSpec& spec, const SolverOptions& options) {
  try {
    out.result = optimize_battery(spec, options);
    out.ok = true;
  } catch (const Error& e) {
    out.ok = false;
    out.error = e.what();
  }
}

}  // namespace

std::vector<HistogramBin> histogram(const std::vector<double>& values, double width) {
  if (!(width > 0.0)) throw InvalidParameter("histogram bin width must be > 0");
  if (values.empty()) return {};
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const auto first = static_cast<long long>(std::floor(*lo_it / width));
  const auto last = static_cast<long long>(std::floor(*hi_it / width));
  std::vector<HistogramBin> bins;
  for (long long k = first; k <= last; ++k) {
    bins.push_back({static_cast<double>(k) * width, static_cast<double>(k + 1) * width, 0});
  }
  for (double v : values) {
    const auto k = static_cast<long long>(std::floor(v / width));
    ++bins[static_cast<std::size_t>(k - first)].count;
  }
  return bins;
}

PopulationResult population_optimize(const std::vector<ObjectiveSpec>& specs,
                                     const SolverOptions& options, unsigned workers) {
  if (specs.empty()) throw InvalidParameter("population is empty");
  PopulationResult pop;
  pop.per_driver = util::parallel_map(
      specs.size(),
      [&](std::size_t i) {
        DriverOutcome out;
        solve_into(out, specs[i], options);
        return out;
      },
      workers);
  std::vector<double> b;
  for (const auto& d : pop.per_driver) {
    if (d.ok) b.push_back(d.result.b_opt);
  }
  pop.n_ok = b.size();
  if (b.empty()) {
    pop.mean_b = pop.iqr_b = std::numeric_limits<double>::quiet_NaN();
    return pop;
  }
  pop.mean_b = util::mean(b);
  pop.iqr_b = util::quartiles(b).iqr();
  pop.histogram = histogram(b, kHistogramBinKwh);
  return pop;
}

WhatIfAxis parse_whatif_axis(std::string_view name) {
  if (name == "rho") return WhatIfAxis::rho;
  if (name == "power" || name == "P") return WhatIfAxis::power;
  if (name == "policy") return WhatIfAxis::policy;
  throw InvalidParameter("unknown what-if axis '" + std::string(name) + "'");
}

std::string_view to_string(WhatIfAxis axis) {
  switch (axis) {
    case WhatIfAxis::rho: return "rho";
    case WhatIfAxis::power: return "power";
    case WhatIfAxis::policy: return "policy";
  }
  return "?";
}

std::vector<WhatIfPoint> whatif_sweep(const ObjectiveSpec& spec, WhatIfAxis axis,
                                      const std::vector<double>& values,
                                      const SolverOptions& options, unsigned workers) {
  return util::parallel_map(
      values.size(),
      [&](std::size_t i) {
        ObjectiveSpec at = spec;
        switch (axis) {
          case WhatIfAxis::rho: at.env.rho = values[i]; break;
          case WhatIfAxis::power: at.env.power = values[i]; break;
          case WhatIfAxis::policy: at.schedule = cost::PolicySchedule::flat(values[i]); break;
        }
        WhatIfPoint point;
        point.value = values[i];
        solve_into(point, at, options);
        return point;
      },
      workers);
}

std::vector<WhatIfCell> whatif_grid(const ObjectiveSpec& spec, const std::vector<double>& rhos,
                                    const std::vector<double>& powers,
                                    const std::vector<cost::PolicySchedule>& policies,
                                    const SolverOptions& options, unsigned workers) {
  const std::size_t n = rhos.size() * powers.size() * policies.size();
  return util::parallel_map(
      n,
      [&](std::size_t idx) {
        const std::size_t k = idx % policies.size();
        const std::size_t j = (idx / policies.size()) % powers.size();
        const std::size_t i = idx / (policies.size() * powers.size());
        ObjectiveSpec at = spec;
        at.env.rho = rhos[i];
        at.env.power = powers[j];
        at.schedule = policies[k];
        WhatIfCell cell;
        cell.rho = rhos[i];
        cell.power = powers[j];
        cell.policy_index = k;
        solve_into(cell, at, options);
        return cell;
      },
      workers);
}

}  // namespace evcap::opt
