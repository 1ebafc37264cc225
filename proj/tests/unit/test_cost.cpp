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


#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "evcap/cost/policy.hpp"
#include "evcap/cost/price_model.hpp"
#include "evcap/errors.hpp"
#include "gen.hpp"

namespace evcap::cost {
namespace {

using evcap::testing::Gen;

std::vector<PriceRecord> sample_model(const PriceModel& m, const std::vector<double>& caps) {
  std::vector<PriceRecord> out;
  for (double b : caps) out.push_back({b, base_price(m, b)});
  return out;
}

TEST(PriceModel, MarketDefault) {
  const auto m = PriceModel::market_default();
  EXPECT_NEAR(base_price(m, 50.0), 43342.649, 1e-6);
  EXPECT_NEAR(base_price(m, 1e-9), 26316.599, 1e-4);
  EXPECT_THROW(base_price(m, 0.0), InvalidParameter);
  EXPECT_THROW(base_price(m, -1.0), InvalidParameter);
  EXPECT_NO_THROW(m.validate());
}

TEST(PriceModel, ValidateRejectsNonPositive) {
  EXPECT_THROW((PriceModel{0.0, -300.0, 20000.0}).validate(1.0, 150.0), InvalidParameter);
  // Dips below zero only between the ends.
  EXPECT_THROW((PriceModel{10.0, -1500.0, 56000.0}).validate(1.0, 150.0), InvalidParameter);
  EXPECT_NO_THROW((PriceModel{10.0, -1500.0, 57000.0}).validate(1.0, 150.0));
  EXPECT_THROW((PriceModel{std::nan(""), 1.0, 1.0}).validate(), InvalidParameter);
}

TEST(PriceFit, RecoversNoiselessQuadratic) {
  const auto truth = PriceModel::market_default();
  const auto fit = fit_price_model(sample_model(truth, {10, 25, 40, 55, 70, 85, 100}), 2);
  EXPECT_NEAR(fit.model.a2, 5.113, 5.113 * 1e-6);
  EXPECT_NEAR(fit.model.a1, 84.871, 84.871 * 1e-6);
  EXPECT_NEAR(fit.model.a0, 26316.599, 26316.599 * 1e-6);
  EXPECT_EQ(fit.n, 7u);
  EXPECT_LT(fit.rss, 1e-6);
}

TEST(PriceFit, PropertyRecoversRandomModels) {
  Gen g(31);
  for (int trial = 0; trial < 100; ++trial) {
    const PriceModel truth{g.uniform(-2.0, 10.0), g.uniform(0.0, 500.0), g.uniform(5000, 60000)};
    std::vector<double> caps;
    const int n = g.integer(3, 40);
    for (int i = 0; i < n; ++i) caps.push_back(g.uniform(10.0, 120.0));
    const auto fit = fit_price_model(sample_model(truth, caps), 2);
    ASSERT_NEAR(fit.model.a2, truth.a2, 1e-6 * std::max(1.0, std::abs(truth.a2)));
    ASSERT_NEAR(fit.model.a1, truth.a1, 1e-6 * std::max(1.0, std::abs(truth.a1)));
    ASSERT_NEAR(fit.model.a0, truth.a0, 1e-6 * truth.a0);
  }
}

TEST(PriceFit, LinearAndStandardErrors) {
  const PriceModel line{0.0, 250.0, 20000.0};
  std::vector<PriceRecord> recs = sample_model(line, {20, 40, 60, 80});
  recs[1].price_eur += 500.0;
  const auto fit = fit_price_model(recs, 1);
  EXPECT_EQ(fit.model.a2, 0.0);
  EXPECT_GT(fit.rss, 0.0);
  EXPECT_EQ(fit.std_errors[0], 0.0);
  EXPECT_GT(fit.std_errors[1], 0.0);
  EXPECT_GT(fit.std_errors[2], 0.0);

  const auto exact = fit_price_model(sample_model(line, {20, 40}), 1);
  EXPECT_TRUE(std::isnan(exact.std_errors[1]));
  EXPECT_NEAR(exact.model.a1, 250.0, 1e-8);
}

TEST(PriceFit, ConstantPricesGiveFlatModel) {
  std::vector<PriceRecord> recs;
  for (double b : {20.0, 40.0, 60.0, 80.0}) recs.push_back({b, 31000.0});
  const auto fit = fit_price_model(recs, 2);
  EXPECT_NEAR(fit.model.a2, 0.0, 1e-9);
  EXPECT_NEAR(fit.model.a1, 0.0, 1e-7);
  EXPECT_NEAR(fit.model.a0, 31000.0, 1e-5);
}

TEST(PriceFit, NoisySamplesWithinThreeStandardErrors) {
  const auto truth = PriceModel::market_default();
  Gen g(33);
  std::normal_distribution<double> noise(0.0, 100.0);
  std::vector<PriceRecord> recs;
  for (int b = 20; b <= 100; b += 5) {
    recs.push_back({double(b), base_price(truth, b) + noise(g.engine())});
  }
  const auto fit = fit_price_model(recs, 2);
  EXPECT_LE(std::abs(fit.model.a2 - truth.a2), 3.0 * fit.std_errors[0]);
  EXPECT_LE(std::abs(fit.model.a1 - truth.a1), 3.0 * fit.std_errors[1]);
  EXPECT_LE(std::abs(fit.model.a0 - truth.a0), 3.0 * fit.std_errors[2]);
}

TEST(PriceFit, Errors) {
  const auto m = PriceModel::market_default();
  EXPECT_THROW(fit_price_model(sample_model(m, {50, 50, 50, 60}), 2), DegenerateDesign);
  EXPECT_THROW(fit_price_model(sample_model(m, {50, 50}), 1), DegenerateDesign);
  EXPECT_THROW(fit_price_model({}, 2), DegenerateDesign);
  EXPECT_THROW(fit_price_model(sample_model(m, {10, 20, 30}), 3), InvalidParameter);
}

TEST(IqrFilter, DropsOutliersKeepsOrder) {
  std::vector<PriceRecord> recs;
  for (int i = 1; i <= 8; ++i) recs.push_back({10.0 * i, 30000.0 + 1000.0 * i});
  recs.insert(recs.begin() + 3, {45.0, 250000.0});
  recs.push_back({90.0, 100.0});
  const auto f = iqr_filter(recs);
  ASSERT_EQ(f.removed.size(), 2u);
  EXPECT_EQ(f.removed[0].price_eur, 250000.0);
  EXPECT_EQ(f.removed[1].price_eur, 100.0);
  ASSERT_EQ(f.kept.size(), 8u);
  for (std::size_t i = 0; i < f.kept.size(); ++i) {
    EXPECT_EQ(f.kept[i].battery_kwh, 10.0 * static_cast<double>(i + 1));
  }
  EXPECT_LT(f.lower_bound, 31000.0);
  EXPECT_GT(f.upper_bound, 38000.0);
  EXPECT_THROW(iqr_filter({}), EmptyDataset);
}

TEST(IqrFilter, SmallHandExample) {
  std::vector<PriceRecord> recs;
  for (double p : {10.0, 12.0, 14.0, 16.0, 100.0}) recs.push_back({50.0, p});
  const auto f = iqr_filter(recs);
  EXPECT_DOUBLE_EQ(f.lower_bound, 6.0);
  EXPECT_DOUBLE_EQ(f.upper_bound, 22.0);
  ASSERT_EQ(f.removed.size(), 1u);
  EXPECT_EQ(f.removed[0].price_eur, 100.0);

  std::vector<PriceRecord> flat(4, PriceRecord{40.0, 30000.0});
  EXPECT_TRUE(iqr_filter(flat).removed.empty());
}

TEST(IqrFilter, PropertyPartitionsInput) {
  Gen g(32);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<PriceRecord> recs(static_cast<std::size_t>(g.integer(1, 60)));
    for (auto& r : recs) r = {g.uniform(10, 100), g.log_uniform(5000, 200000)};
    const auto f = iqr_filter(recs);
    ASSERT_EQ(f.kept.size() + f.removed.size(), recs.size());
    ASSERT_FALSE(f.kept.empty());
    for (const auto& r : f.kept) {
      ASSERT_GE(r.price_eur, f.lower_bound);
      ASSERT_LE(r.price_eur, f.upper_bound);
    }
  }
}

TEST(PriceCsv, ReadsAndReportsRows) {
  std::istringstream ok("battery_kwh,price_eur\n# comment\n50,43000\n77.4,52000.5\n");
  const auto recs = read_price_csv(ok, "prices.csv");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[1].battery_kwh, 77.4);

  std::istringstream empty("battery_kwh,price_eur\n");
  EXPECT_THROW(read_price_csv(empty, "prices.csv"), EmptyDataset);
  std::istringstream bad("battery_kwh,price_eur\n50,43000\n60,abc\n");
  try {
    read_price_csv(bad, "prices.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("prices.csv:3"), std::string::npos);
  }
  std::istringstream header("kwh,eur\n50,43000\n");
  EXPECT_THROW(read_price_csv(header, "prices.csv"), ParseError);
  EXPECT_THROW(read_price_csv(std::filesystem::path("/nonexistent.csv")), ParseError);
}

TEST(Policy, Schedules) {
  const auto th = PolicySchedule::capacity_threshold(40.0, 1000.0, 2000.0);
  EXPECT_EQ(apply_policy(th, 40.0), -2000.0);
  EXPECT_EQ(apply_policy(th, 40.01), 1000.0);
  EXPECT_EQ(apply_policy(PolicySchedule::flat(-500.0), 80.0), -500.0);
  EXPECT_EQ(apply_policy(PolicySchedule::linear_externality(12.0, 100.0), 50.0), 700.0);
  EXPECT_EQ(parse_policy_kind("capacity_threshold"), PolicyKind::capacity_threshold);
  EXPECT_THROW(parse_policy_kind("bonus"), InvalidParameter);
  EXPECT_THROW(PolicySchedule::capacity_threshold(0.0, 1, 1).validate(), InvalidParameter);
  EXPECT_THROW(PolicySchedule::flat(INFINITY).validate(), InvalidParameter);
}

TEST(PurchaseCost, ReferenceValue) {
  const auto m = PriceModel::market_default();
  const CostParams params;
  EXPECT_NEAR(annualized_purchase_cost(m, params, PolicySchedule{}, 50.0), 3250.698675, 1e-6);

  CostParams with_tax = params;
  with_tax.policy_value = 400.0;
  const auto sched = PolicySchedule::flat(600.0);
  EXPECT_NEAR(annualized_purchase_cost(m, with_tax, sched, 50.0), 0.75 * (43342.649 + 1000.0) / 10.0,
              1e-6);

  CostParams resale = params;
  resale.beta = 1.0;
  EXPECT_EQ(annualized_purchase_cost(m, resale, PolicySchedule{}, 50.0), 0.0);
}

TEST(PurchaseCost, Errors) {
  const auto m = PriceModel::market_default();
  CostParams p;
  p.beta = 1.2;
  EXPECT_THROW(annualized_purchase_cost(m, p, {}, 50.0), InvalidParameter);
  p = {};
  p.lifetime_years = 0.0;
  EXPECT_THROW(annualized_purchase_cost(m, p, {}, 50.0), InvalidParameter);
  p = {};
  p.health_factor = 0.0;
  EXPECT_THROW(p.validate(), InvalidParameter);
  p = {};
  p.mu = -1.0;
  EXPECT_THROW(p.validate(), InvalidParameter);
}

TEST(PurchaseCost, PropertyIncreasingInCapacityWithoutPolicy) {
  Gen g(33);
  const auto m = PriceModel::market_default();
  for (int trial = 0; trial < 200; ++trial) {
    CostParams p;
    p.beta = g.uniform(0.0, 0.9);
    p.lifetime_years = g.uniform(3.0, 20.0);
    const double b = g.uniform(1.0, 149.0);
    ASSERT_LT(annualized_purchase_cost(m, p, {}, b), annualized_purchase_cost(m, p, {}, b + 1.0));
  }
}

}  // namespace
}  // namespace evcap::cost
