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

#include "evcap/cli/output.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "evcap/errors.hpp"
#include "evcap/util/csv.hpp"

namespace evcap::cli {
namespace {

std::string csv_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return util::format_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          std::string s = v;
          for (char& ch : s) {
            if (ch == ',') ch = ';';
            if (ch == '\n' || ch == '\r') ch = ' ';
          }
          return s;
        } else {
          return std::to_string(v);
        }
      },
      c);
}

nlohmann::json json_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;  // JSON has no NaN/inf
        }
        return v;
      },
      c);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  if (name == "both") return Format::both;
  throw ConfigError("format must be csv, json or both (got '" + std::string(name) + "')");
}

std::string_view to_string(Format format) {
  switch (format) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::both: return "both";
  }
  return "?";
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw Error("table '" + name + "': row has " + std::to_string(row.size()) + " cells, expected " +
                std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

void write_csv(std::ostream& out, const Table& table, const RunInfo& info) {
  out << "# evcap " << info.command << '\n';
  out << "# seed: " << info.seed << '\n';
  out << "# config: " << info.config.dump() << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

nlohmann::json to_json(const Table& table, const RunInfo& info) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = json_cell(row[i]);
    rows.push_back(std::move(obj));
  }
  return {{"command", info.command}, {"seed", info.seed},   {"config", info.config},
          {"table", table.name},     {"columns", table.columns}, {"rows", std::move(rows)}};
}

std::vector<std::filesystem::path> write_tables(const std::filesystem::path& dir,
                                                const std::vector<Table>& tables,
                                                const RunInfo& info, Format format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& t : tables) {
    if (format != Format::json) {
      std::ostringstream s;
      write_csv(s, t, info);
      written.push_back(dir / (t.name + ".csv"));
      write_file(written.back(), s.str());
    }
    if (format != Format::csv) {
      written.push_back(dir / (t.name + ".json"));
      write_file(written.back(), to_json(t, info).dump(2) + "\n");
    }
  }
  return written;
}

}  // namespace evcap::cli
