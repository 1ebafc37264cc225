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

#include "evcap/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "evcap/errors.hpp"

namespace evcap::cli {

using nlohmann::json;

Section::Section(const json* node, std::string path, json* resolved, std::filesystem::path base_dir)
    : node_(node), path_(std::move(path)), resolved_(resolved), base_dir_(std::move(base_dir)) {
  if (node_ && !node_->is_object()) {
    throw ConfigError("'" + (path_.empty() ? std::string("<root>") : path_) + "' must be an object");
  }
  if (resolved_->is_null()) *resolved_ = json::object();
}

std::string Section::field(std::string_view key) const {
  return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
}

bool Section::has(std::string_view key) const {
  return node_ && node_->find(key) != node_->end();
}

const json* Section::lookup(std::string_view key) {
  used_.emplace(key);
  if (!node_) return nullptr;
  auto it = node_->find(key);
  return it == node_->end() ? nullptr : &*it;
}

void Section::type_error(std::string_view key, std::string_view expected) const {
  throw ConfigError("'" + field(key) + "' must be " + std::string(expected));
}

double Section::number(std::string_view key, double fallback) {
  const json* v = lookup(key);
  double out = fallback;
  if (v) {
    if (!v->is_number()) type_error(key, "a number");
    out = v->get<double>();
    if (!std::isfinite(out)) type_error(key, "a finite number");
  }
  (*resolved_)[std::string(key)] = out;
  return out;
}

double Section::number(std::string_view key) {
  if (!has(key)) throw ConfigError("missing required field '" + field(key) + "'");
  return number(key, 0.0);
}

std::optional<double> Section::optional_number(std::string_view key) {
  if (!has(key)) {
    used_.emplace(key);
    return std::nullopt;
  }
  return number(key, 0.0);
}

std::int64_t Section::integer(std::string_view key, std::int64_t fallback) {
  const json* v = lookup(key);
  std::int64_t out = fallback;
  if (v) {
    if (!v->is_number_integer()) type_error(key, "an integer");
    out = v->get<std::int64_t>();
  }
  (*resolved_)[std::string(key)] = out;
  return out;
}

std::size_t Section::count(std::string_view key, std::size_t fallback) {
  const auto n = integer(key, static_cast<std::int64_t>(fallback));
  if (n < 0) type_error(key, "a non-negative integer");
  return static_cast<std::size_t>(n);
}

bool Section::boolean(std::string_view key, bool fallback) {
  const json* v = lookup(key);
  bool out = fallback;
  if (v) {
    if (!v->is_boolean()) type_error(key, "true or false");
    out = v->get<bool>();
  }
  (*resolved_)[std::string(key)] = out;
  return out;
}

std::string Section::string(std::string_view key, std::string_view fallback) {
  const json* v = lookup(key);
  std::string out(fallback);
  if (v) {
    if (!v->is_string()) type_error(key, "a string");
    out = v->get<std::string>();
  }
  (*resolved_)[std::string(key)] = out;
  return out;
}

std::optional<std::string> Section::optional_string(std::string_view key) {
  if (!has(key)) {
    used_.emplace(key);
    return std::nullopt;
  }
  return string(key, "");
}

std::vector<double> Section::numbers(std::string_view key, const std::vector<double>& fallback) {
  const json* v = lookup(key);
  std::vector<double> out = fallback;
  if (v) {
    if (!v->is_array()) type_error(key, "an array of numbers");
    out.clear();
    for (const auto& x : *v) {
      if (!x.is_number()) type_error(key, "an array of numbers");
      out.push_back(x.get<double>());
    }
  }
  (*resolved_)[std::string(key)] = out;
  return out;
}

std::vector<std::size_t> Section::counts(std::string_view key, const std::vector<std::size_t>& fallback) {
  const json* v = lookup(key);
  std::vector<std::size_t> out = fallback;
  if (v) {
    if (!v->is_array()) type_error(key, "an array of non-negative integers");
    out.clear();
    for (const auto& x : *v) {
      if (!x.is_number_integer() || x.get<std::int64_t>() < 0) {
        type_error(key, "an array of non-negative integers");
      }
      out.push_back(x.get<std::size_t>());
    }
  }
  (*resolved_)[std::string(key)] = out;
  return out;
}

std::optional<std::filesystem::path> Section::optional_path(std::string_view key) {
  auto s = optional_string(key);
  if (!s) return std::nullopt;
  if (s->empty()) type_error(key, "a non-empty path");
  std::filesystem::path p(*s);
  return p.is_absolute() ? p : base_dir_ / p;
}

Section Section::child(std::string_view key) {
  const json* v = lookup(key);
  if (v && !v->is_object()) type_error(key, "an object");
  return Section(v, field(key), &(*resolved_)[std::string(key)], base_dir_);
}

std::vector<Section> Section::children(std::string_view key) {
  const json* v = lookup(key);
  std::vector<Section> out;
  if (!v) return out;
  if (!v->is_array()) type_error(key, "an array of objects");
  auto& mirror = (*resolved_)[std::string(key)];
  mirror = json::array();
  for (std::size_t i = 0; i < v->size(); ++i) mirror.push_back(json::object());
  for (std::size_t i = 0; i < v->size(); ++i) {
    out.emplace_back(&(*v)[i], field(key) + "[" + std::to_string(i) + "]", &mirror[i], base_dir_);
  }
  return out;
}

void Section::finish() const {
  if (!node_) return;
  for (const auto& [key, _] : node_->items()) {
    if (!used_.contains(key)) throw ConfigError("unknown key '" + field(key) + "'");
  }
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ConfigDocument ConfigDocument::parse(std::string_view text, std::filesystem::path base_dir) {
  ConfigDocument d;
  try {
    d.doc_ = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!d.doc_.is_object()) throw ConfigError("config must be a JSON object");
  d.base_dir_ = std::move(base_dir);
  return d;
}

Section ConfigDocument::root() { return Section(&doc_, "", &resolved_, base_dir_); }

}  // namespace evcap::cli
