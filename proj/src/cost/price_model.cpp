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

#include "evcap/cost/price_model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <string>

#include "evcap/errors.hpp"
#include "evcap/util/csv.hpp"
#include "evcap/util/stats.hpp"

namespace evcap::cost {

void PriceModel::validate(double lo, double hi) const {
  if (!std::isfinite(a2) || !std::isfinite(a1) || !std::isfinite(a0)) {
    throw InvalidParameter("price model coefficients must be finite");
  }
  auto price = [&](double b) { return (a2 * b + a1) * b + a0; };
  double lowest = std::min(price(lo), price(hi));
  if (a2 > 0.0) {
    const double vertex = -a1 / (2.0 * a2);
    if (vertex > lo && vertex < hi) lowest = std::min(lowest, price(vertex));
  }
  if (!(lowest > 0.0)) {
    throw InvalidParameter("price model is not positive over the supported capacity range");
  }
}

double base_price(const PriceModel& model, double battery_kwh) {
  if (!(battery_kwh > 0.0) || !std::isfinite(battery_kwh)) {
    throw InvalidParameter("battery capacity must be > 0");
  }
  return (model.a2 * battery_kwh + model.a1) * battery_kwh + model.a0;
}

FilterResult iqr_filter(const std::vector<PriceRecord>& records) {
  if (records.empty()) throw EmptyDataset("price dataset is empty");
  std::vector<double> prices;
  prices.reserve(records.size());
  for (const auto& r : records) prices.push_back(r.price_eur);
  const auto q = util::quartiles(prices);
  FilterResult out;
  out.lower_bound = q.q1 - 1.5 * q.iqr();
  out.upper_bound = q.q3 + 1.5 * q.iqr();
  for (const auto& r : records) {
    if (r.price_eur < out.lower_bound || r.price_eur > out.upper_bound) {
      out.removed.push_back(r);
    } else {
      out.kept.push_back(r);
    }
  }
  return out;
}

PriceFit fit_price_model(const std::vector<PriceRecord>& records, int degree) {
  if (degree != 1 && degree != 2) throw InvalidParameter("price model degree must be 1 or 2");
  std::set<double> distinct;
  for (const auto& r : records) distinct.insert(r.battery_kwh);
  const auto p = static_cast<std::size_t>(degree + 1);
  if (distinct.size() < p) {
    throw DegenerateDesign("need at least " + std::to_string(p) +
                           " distinct battery capacities for a degree-" + std::to_string(degree) +
                           " fit, got " + std::to_string(distinct.size()));
  }

  const auto n = static_cast<Eigen::Index>(records.size());
  // Columns are ordered highest power first, matching (a2, a1, a0).
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(p));
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double b = records[static_cast<std::size_t>(i)].battery_kwh;
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(p); ++j) {
      x(i, j) = std::pow(b, static_cast<double>(degree) - static_cast<double>(j));
    }
    y(i) = records[static_cast<std::size_t>(i)].price_eur;
  }
  // Column scaling keeps the Vandermonde system well conditioned.
  Eigen::VectorXd scale = x.colwise().norm().transpose();
  Eigen::MatrixXd xs = x * scale.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
  const Eigen::VectorXd beta_scaled = qr.solve(y);
  const Eigen::VectorXd beta = beta_scaled.cwiseQuotient(scale);
  const Eigen::VectorXd resid = y - x * beta;

  PriceFit fit;
  fit.degree = degree;
  fit.n = records.size();
  fit.rss = resid.squaredNorm();
  if (degree == 2) {
    fit.model = {beta(0), beta(1), beta(2)};
  } else {
    fit.model = {0.0, beta(0), beta(1)};
  }

  const auto dof = static_cast<double>(records.size()) - static_cast<double>(p);
  if (dof > 0) {
    const double s2 = fit.rss / dof;
    const Eigen::MatrixXd cov = s2 * (x.transpose() * x).inverse();
    std::array<double, 3> se{};
    for (std::size_t j = 0; j < p; ++j) {
      se[j] = std::sqrt(cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)));
    }
    fit.std_errors = degree == 2 ? se : std::array<double, 3>{0.0, se[0], se[1]};
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    fit.std_errors = {degree == 2 ? nan : 0.0, nan, nan};
  }
  return fit;
}

std::vector<PriceRecord> read_price_csv(std::istream& in, std::string_view source_name) {
  const auto table = util::read_csv(in, {"battery_kwh", "price_eur"}, source_name);
  if (table.rows.empty()) throw EmptyDataset(std::string(source_name) + ": no price records");
  std::vector<PriceRecord> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    PriceRecord r{util::parse_double(row, 0, source_name), util::parse_double(row, 1, source_name)};
    if (!(r.battery_kwh > 0.0) || !(r.price_eur > 0.0)) {
      throw ParseError(std::string(source_name) + ":" + std::to_string(row.line) +
                       ": battery_kwh and price_eur must be > 0");
    }
    out.push_back(r);
  }
  return out;
}

std::vector<PriceRecord> read_price_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return read_price_csv(in, path.string());
}

}  // namespace evcap::cost
