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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace evcap::cli {

// Strict view of one JSON object in a run config. Every accessor records the
// value it returns (defaults included) into a mirror object, which becomes
// the resolved config embedded in outputs. finish() rejects keys that no
// accessor asked for. Errors are ConfigError naming the dotted field path.
class Section {
 public:
  Section(const nlohmann::json* node, std::string path, nlohmann::json* resolved,
          std::filesystem::path base_dir);

  bool has(std::string_view key) const;

  double number(std::string_view key, double fallback);
  double number(std::string_view key);  // required
  std::optional<double> optional_number(std::string_view key);
  std::int64_t integer(std::string_view key, std::int64_t fallback);
  std::size_t count(std::string_view key, std::size_t fallback);  // integer >= 0
  bool boolean(std::string_view key, bool fallback);
  std::string string(std::string_view key, std::string_view fallback);
  std::optional<std::string> optional_string(std::string_view key);
  std::vector<double> numbers(std::string_view key, const std::vector<double>& fallback);
  std::vector<std::size_t> counts(std::string_view key, const std::vector<std::size_t>& fallback);

  // File path relative to the config file's directory. Recorded as written.
  std::optional<std::filesystem::path> optional_path(std::string_view key);

  // Nested object; an absent key yields an empty section.
  Section child(std::string_view key);
  // Array of objects; absent yields an empty list.
  std::vector<Section> children(std::string_view key);

  void finish() const;

  const std::string& path() const { return path_; }
  std::string field(std::string_view key) const;

 private:
  const nlohmann::json* lookup(std::string_view key);
  [[noreturn]] void type_error(std::string_view key, std::string_view expected) const;

  const nlohmann::json* node_;
  std::string path_;
  nlohmann::json* resolved_;
  std::filesystem::path base_dir_;
  std::set<std::string, std::less<>> used_;
};

// Parsed config file plus its resolved mirror.
class ConfigDocument {
 public:
  static ConfigDocument load(const std::filesystem::path& path);
  static ConfigDocument parse(std::string_view text, std::filesystem::path base_dir);

  Section root();
  const nlohmann::json& resolved() const { return resolved_; }

 private:
  nlohmann::json doc_;
  nlohmann::json resolved_ = nlohmann::json::object();
  std::filesystem::path base_dir_;
};

}  // namespace evcap::cli
