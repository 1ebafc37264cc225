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

#include <cmath>
#include <memory>
#include <string>

#include "evcap/analytic/inconvenience.hpp"
#include "evcap/analytic/sensitivity.hpp"
#include "evcap/cli/commands.hpp"
#include "evcap/cost/policy.hpp"
#include "evcap/cost/price_model.hpp"
#include "evcap/errors.hpp"
#include "evcap/opt/lookup.hpp"
#include "evcap/opt/objective.hpp"
#include "evcap/opt/population.hpp"
#include "evcap/opt/solver.hpp"
#include "evcap/util/csv.hpp"

namespace evcap::cli {
namespace {

using analytic::SweepParameter;

void read_driver(Section& s, analytic::DriverProfile& d, bool distance_required) {
  d.distance = distance_required ? s.number("distance_km") : s.number("distance_km", d.distance);
  d.eta = s.number("eta", d.eta);
  d.sigma = s.number("sigma", d.sigma);
  d.speed = s.number("speed_kmh", d.speed);
  s.finish();
}

cost::PolicySchedule read_policy(Section s) {
  const auto kind = cost::parse_policy_kind(s.string("kind", "flat"));
  cost::PolicySchedule p;
  switch (kind) {
    case cost::PolicyKind::flat: p = cost::PolicySchedule::flat(s.number("value", 0.0)); break;
    case cost::PolicyKind::capacity_threshold:
      p = cost::PolicySchedule::capacity_threshold(s.number("threshold_kwh", 40.0),
                                                   s.number("tax_above", 0.0),
                                                   s.number("subsidy_below", 0.0));
      break;
    case cost::PolicyKind::linear_externality:
      p = cost::PolicySchedule::linear_externality(s.number("slope", 0.0), s.number("intercept", 0.0));
      break;
  }
  s.finish();
  p.validate();
  return p;
}

std::shared_ptr<const opt::SimulatedLookup> read_lookup(Section s) {
  const auto file = s.optional_path("file");
  if (!file) throw ConfigError("missing required field '" + s.field("file") + "'");
  const double days = s.number("horizon_days", 7.0);
  s.finish();
  const auto table = util::read_csv_file(
      *file, {"x_value", "mean_tau_e_h", "analytic_tau_e_h", "n_ev", "seed"});
  std::vector<double> b, tau;
  for (const auto& row : table.rows) {
    b.push_back(util::parse_double(row, 0, file->string()));
    tau.push_back(util::parse_double(row, 1, file->string()));
  }
  return std::make_shared<opt::SimulatedLookup>(std::move(b), std::move(tau), days);
}

struct OptimizationSetup {
  opt::ObjectiveSpec spec;
  opt::SolverOptions solver;
};

// Shared by optimize and whatif; leaves `block` open for extra keys.
OptimizationSetup read_optimization(Section& block) {
  OptimizationSetup out;
  auto& spec = out.spec;
  auto driver = block.child("driver");
  read_driver(driver, spec.driver, true);

  auto env = block.child("environment");
  spec.env.rho = env.number("rho", spec.env.rho);
  spec.env.xi = env.number("xi", spec.env.xi);
  spec.env.power = env.number("power_kw", spec.env.power);
  env.finish();

  auto c = block.child("cost");
  spec.cost.beta = c.number("beta", spec.cost.beta);
  spec.cost.lifetime_years = c.number("lifetime_years", spec.cost.lifetime_years);
  spec.cost.policy_value = c.number("policy_value", spec.cost.policy_value);
  spec.cost.mu = c.number("mu", spec.cost.mu);
  spec.cost.health_factor = c.number("health_factor", spec.cost.health_factor);
  c.finish();

  spec.schedule = read_policy(block.child("policy"));

  auto pm = block.child("price_model");
  spec.model.a2 = pm.number("a2", spec.model.a2);
  spec.model.a1 = pm.number("a1", spec.model.a1);
  spec.model.a0 = pm.number("a0", spec.model.a0);
  pm.finish();

  spec.b_min = block.number("b_min", spec.b_min);
  spec.b_max = block.number("b_max", spec.b_max);
  spec.source = opt::parse_cost_source(block.string("source", "analytic"));
  if (spec.source == opt::CostSource::simulated_lookup) {
    spec.lookup = read_lookup(block.child("lookup"));
  } else if (block.has("lookup")) {
    throw ConfigError("'" + block.field("lookup") + "' requires source \"simulated-lookup\"");
  }

  auto sv = block.child("solver");
  out.solver.coarse_step = sv.number("coarse_step", out.solver.coarse_step);
  out.solver.tolerance = sv.number("tolerance", out.solver.tolerance);
  out.solver.max_iterations = sv.count("max_iterations", out.solver.max_iterations);
  sv.finish();
  if (!(out.solver.coarse_step > 0.0) || !(out.solver.tolerance > 0.0)) {
    throw ConfigError("solver coarse_step and tolerance must be > 0");
  }
  spec.validate();
  return out;
}

std::vector<Cell> result_cells(const opt::OptimizationResult& r) {
  return {r.b_opt, r.total_cost, r.c_p, r.c_e, r.converged, static_cast<std::uint64_t>(r.evaluations)};
}

const std::vector<std::string> kResultColumns{"b_opt_kwh", "total_cost_eur", "c_p_eur", "c_e_eur",
                                              "converged", "evaluations"};

std::vector<Cell> empty_result_cells() {
  const double nan = std::nan("");
  return {nan, nan, nan, nan, false, std::uint64_t{0}};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

CommandResult cmd_analyze(Section& block) {
  analytic::SensitivityBase base = analytic::reference_constants();
  base.battery_kwh = block.number("battery_kwh", base.battery_kwh);
  base.driver.distance = block.number("distance_km", base.driver.distance);
  base.driver.eta = block.number("eta", base.driver.eta);
  base.driver.sigma = block.number("sigma", base.driver.sigma);
  base.driver.speed = block.number("speed_kmh", base.driver.speed);
  base.env.rho = block.number("rho", base.env.rho);
  base.env.power = block.number("power_kw", base.env.power);
  const double mu = block.number("mu", analytic::kDefaultMu);

  if (block.has("utilization")) {
    if (block.has("xi")) {
      throw ConfigError("give either '" + block.field("xi") + "' or '" + block.field("utilization") + "'");
    }
    auto u = block.child("utilization");
    const auto n_ev = u.count("n_ev", 0);
    const auto n_cs = u.count("n_cs", 0);
    const double hours = u.number("horizon_hours", 720.0);
    u.finish();
    base.env.xi = analytic::utilization(n_ev, n_cs, base.driver, base.env.power, analytic::Horizon{hours});
  } else {
    base.env.xi = block.number("xi", base.env.xi);
  }

  CommandResult out;
  const auto b = analytic::inconvenience_components(base.battery_kwh, base.driver, base.env);
  Table point{"analyze_point",
              {"battery_kwh", "distance_km", "eta", "sigma", "speed_kmh", "rho", "xi", "power_kw",
               "d_sk_km", "d_s_km", "n_c", "tau_po_h", "tau_ps_h", "tau_s_h", "tau_e_h", "c_e_eur"},
              {}};
  point.add({base.battery_kwh, base.driver.distance, base.driver.eta, base.driver.sigma,
             base.driver.speed, base.env.rho, base.env.xi, base.env.power, b.d_sk, b.d_s, b.n_c,
             b.tau_po, b.tau_ps, b.tau_s, b.tau_e, analytic::inconvenience_cost(b.tau_e, mu)});
  out.tables.push_back(std::move(point));

  Table trends{"analyze_trends", {"parameter", "lo", "hi", "steps", "feasible_points", "trend"}, {}};
  for (auto& s : block.children("sweeps")) {
    const auto param = analytic::parse_sweep_parameter(s.string("parameter", "B"));
    const auto [lo0, hi0] = analytic::reference_range(param);
    const double lo = s.number("lo", lo0);
    const double hi = s.number("hi", hi0);
    const auto steps = s.count("steps", 50);
    s.finish();
    const auto sweep = analytic::sensitivity_sweep(base, param, lo, hi, steps);
    const std::string name(analytic::to_string(param));
    Table t{"sensitivity_" + name, {name, "tau_e_h", "feasible", "note"}, {}};
    std::uint64_t feasible = 0;
    for (const auto& p : sweep.points) {
      t.add({p.value, p.tau_e, p.feasible, p.note});
      feasible += p.feasible ? 1 : 0;
    }
    trends.add({name, lo, hi, static_cast<std::uint64_t>(steps), feasible,
                std::string(analytic::to_string(sweep.trend))});
    out.tables.push_back(std::move(t));
  }
  if (!trends.rows.empty()) out.tables.push_back(std::move(trends));
  return out;
}

CommandResult cmd_optimize(Section& block) {
  auto setup = read_optimization(block);
  auto population = block.children("population");

  CommandResult out;
  Table t{"optimize", concat({"driver", "distance_km", "eta", "sigma", "speed_kmh", "ok"}, kResultColumns), {}};
  t.columns.push_back("error");

  if (population.empty()) {
    const auto r = opt::optimize_battery(setup.spec, setup.solver);
    std::vector<Cell> row{std::uint64_t{0}, setup.spec.driver.distance, setup.spec.driver.eta,
                          setup.spec.driver.sigma, setup.spec.driver.speed, true};
    for (auto& c : result_cells(r)) row.push_back(std::move(c));
    row.push_back(std::string());
    t.add(std::move(row));
    out.tables.push_back(std::move(t));
    return out;
  }

  std::vector<opt::ObjectiveSpec> specs;
  for (auto& d : population) {
    auto spec = setup.spec;
    read_driver(d, spec.driver, true);
    specs.push_back(std::move(spec));
  }
  const auto pop = opt::population_optimize(specs, setup.solver);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& o = pop.per_driver[i];
    const auto& d = specs[i].driver;
    std::vector<Cell> row{static_cast<std::uint64_t>(i), d.distance, d.eta, d.sigma, d.speed, o.ok};
    for (auto& c : o.ok ? result_cells(o.result) : empty_result_cells()) row.push_back(std::move(c));
    row.push_back(o.error);
    t.add(std::move(row));
  }
  out.tables.push_back(std::move(t));

  Table summary{"population_summary", {"n_drivers", "n_ok", "mean_b_opt_kwh", "iqr_b_opt_kwh"}, {}};
  summary.add({static_cast<std::uint64_t>(specs.size()), static_cast<std::uint64_t>(pop.n_ok), pop.mean_b,
               pop.iqr_b});
  out.tables.push_back(std::move(summary));
  Table hist{"population_histogram", {"lo_kwh", "hi_kwh", "count"}, {}};
  for (const auto& bin : pop.histogram) hist.add({bin.lo, bin.hi, static_cast<std::uint64_t>(bin.count)});
  out.tables.push_back(std::move(hist));
  if (pop.n_ok == 0) out.exit_code = kExitInfeasible;
  return out;
}

CommandResult cmd_whatif(Section& block) {
  auto setup = read_optimization(block);
  auto grid = block.child("grid");
  const auto rhos = grid.numbers("rho", {setup.spec.env.rho});
  const auto powers = grid.numbers("power_kw", {setup.spec.env.power});
  std::vector<cost::PolicySchedule> policies;
  for (auto& p : grid.children("policies")) policies.push_back(read_policy(p));
  if (policies.empty()) policies.push_back(setup.spec.schedule);
  grid.finish();
  if (rhos.empty() || powers.empty()) throw ConfigError("'" + grid.path() + "' axes must not be empty");

  const auto cells = opt::whatif_grid(setup.spec, rhos, powers, policies, setup.solver);
  CommandResult out;
  Table t{"whatif", concat({"rho", "power_kw", "policy_index", "policy_kind", "ok"}, kResultColumns), {}};
  t.columns.push_back("error");
  bool any_ok = false;
  for (const auto& c : cells) {
    std::vector<Cell> row{c.rho, c.power, static_cast<std::uint64_t>(c.policy_index),
                          std::string(cost::to_string(policies[c.policy_index].kind)), c.ok};
    for (auto& v : c.ok ? result_cells(c.result) : empty_result_cells()) row.push_back(std::move(v));
    row.push_back(c.error);
    t.add(std::move(row));
    any_ok = any_ok || c.ok;
  }
  out.tables.push_back(std::move(t));
  if (!any_ok) out.exit_code = kExitInfeasible;
  return out;
}

CommandResult cmd_fit_prices(Section& block) {
  const auto file = block.optional_path("file");
  if (!file) throw ConfigError("missing required field '" + block.field("file") + "'");
  const auto degree = block.integer("degree", 2);
  if (degree != 1 && degree != 2) throw ConfigError("'" + block.field("degree") + "' must be 1 or 2");

  const auto records = cost::read_price_csv(*file);
  const auto filtered = cost::iqr_filter(records);
  const auto fit = cost::fit_price_model(filtered.kept, static_cast<int>(degree));

  CommandResult out;
  Table t{"price_fit",
          {"degree", "n_input", "n_kept", "n_removed", "lower_fence_eur", "upper_fence_eur", "a2", "a1", "a0",
           "se_a2", "se_a1", "se_a0", "rss"},
          {}};
  t.add({static_cast<std::int64_t>(fit.degree), static_cast<std::uint64_t>(records.size()),
         static_cast<std::uint64_t>(filtered.kept.size()), static_cast<std::uint64_t>(filtered.removed.size()),
         filtered.lower_bound, filtered.upper_bound, fit.model.a2, fit.model.a1, fit.model.a0,
         fit.std_errors[0], fit.std_errors[1], fit.std_errors[2], fit.rss});
  out.tables.push_back(std::move(t));
  Table removed{"price_outliers", {"battery_kwh", "price_eur"}, {}};
  for (const auto& r : filtered.removed) removed.add({r.battery_kwh, r.price_eur});
  out.tables.push_back(std::move(removed));
  return out;
}

}  // namespace evcap::cli
