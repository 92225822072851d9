/*
 * Copyright (C) 2026 The Tappy Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tappy/device.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "tappy/error.hpp"

namespace tappy {

UnknownDeviceError::UnknownDeviceError(const std::string& id,
                                       std::vector<std::string> known)
    : Error(fmt::format("unknown device '{}'; known devices: {}", id,
                        fmt::join(known, ", "))),
      id_(id),
      known_(std::move(known)) {}

}  // namespace tappy

namespace tappy::devices {
namespace {

constexpr double kMmPerInch = 25.4;

constexpr std::array<std::string_view, 6> kKeys = {
    "id", "display_name", "ppi", "scale_factor", "logical_width", "logical_height"};

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + offset, '\n'));
}

// Line on which each element of the top-level array starts. Assumes the text
// already parsed as JSON.
std::vector<std::size_t> top_level_element_lines(std::string_view text) {
  std::vector<std::size_t> lines;
  std::size_t line = 1;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  bool expecting = false;
  for (char ch : text) {
    if (ch == '\n') ++line;
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (ch == '\\') {
        escaped = true;
      } else if (ch == '"') {
        in_string = false;
      }
      continue;
    }
    const bool space = ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r';
    if (expecting && !space && ch != ']') {
      lines.push_back(line);
      expecting = false;
    }
    switch (ch) {
      case '"':
        in_string = true;
        break;
      case '[':
      case '{':
        if (depth == 0 && ch == '[') expecting = true;
        ++depth;
        break;
      case ']':
      case '}':
        --depth;
        break;
      case ',':
        if (depth == 1) expecting = true;
        break;
      default:
        break;
    }
  }
  return lines;
}

bool valid_id(const std::string& id) {
  static const std::regex pattern("[a-z0-9]+(-[a-z0-9]+)*");
  return std::regex_match(id, pattern);
}

DeviceProfile parse_profile(const nlohmann::json& entry,
                            const std::function<void(const std::string&)>& fail) {
  if (!entry.is_object()) fail("entry must be an object");
  for (const auto& item : entry.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), item.key()) == kKeys.end()) {
      fail(fmt::format("unknown key '{}'", item.key()));
    }
  }
  for (auto key : kKeys) {
    if (!entry.contains(key)) fail(fmt::format("missing key '{}'", key));
  }

  DeviceProfile p;
  const auto& id = entry.at("id");
  if (!id.is_string() || !valid_id(id.get<std::string>())) {
    fail("'id' must be a lowercase hyphenated string");
  }
  p.id = id.get<std::string>();

  const auto& name = entry.at("display_name");
  if (!name.is_string() || name.get<std::string>().empty()) {
    fail("'display_name' must be a non-empty string");
  }
  p.display_name = name.get<std::string>();

  const auto& ppi = entry.at("ppi");
  if (!ppi.is_number() || !(ppi.get<double>() > 0.0) ||
      !std::isfinite(ppi.get<double>())) {
    fail("'ppi' must be a positive number");
  }
  p.ppi = ppi.get<double>();

  const auto& scale = entry.at("scale_factor");
  if (!scale.is_number_integer() || scale.get<long long>() < 1 ||
      scale.get<long long>() > 4) {
    fail("'scale_factor' must be an integer from 1 to 4");
  }
  p.scale_factor = scale.get<int>();

  for (auto [key, field] : {std::pair{"logical_width", &p.logical_width},
                            std::pair{"logical_height", &p.logical_height}}) {
    const auto& v = entry.at(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0 ||
        v.get<long long>() > 1'000'000) {
      fail(fmt::format("'{}' must be a positive integer", key));
    }
    *field = v.get<int>();
  }
  return p;
}

void require_length(double value, const char* what) {
  if (!std::isfinite(value) || value < 0.0) {
    throw DomainError(
        fmt::format("{} must be finite and non-negative, got {}", what, value));
  }
}

}  // namespace

const DeviceProfile* DeviceRegistry::find(std::string_view id) const noexcept {
  auto it = std::find_if(profiles_.begin(), profiles_.end(),
                         [&](const DeviceProfile& p) { return p.id == id; });
  return it == profiles_.end() ? nullptr : &*it;
}

const DeviceProfile& DeviceRegistry::at(std::string_view id) const {
  if (const auto* p = find(id)) return *p;
  throw UnknownDeviceError(std::string(id), ids());
}

std::vector<std::string> DeviceRegistry::ids() const {
  std::vector<std::string> out;
  out.reserve(profiles_.size());
  for (const auto& p : profiles_) out.push_back(p.id);
  return out;
}

DeviceRegistry load_registry(std::string_view text, std::string source) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ParseError(
        fmt::format("{}: registry must contain at least one device", source));
  }

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t line = line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(fmt::format("{}:{}: malformed registry: {}", source, line,
                                 e.what()),
                     line);
  }
  if (!doc.is_array()) {
    throw ParseError(
        fmt::format("{}:1: registry must be an array of device objects", source), 1);
  }
  if (doc.empty()) {
    throw ParseError(
        fmt::format("{}: registry must contain at least one device", source));
  }

  const auto lines = top_level_element_lines(text);
  DeviceRegistry reg;
  reg.source_ = std::move(source);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::size_t line = i < lines.size() ? lines[i] : 0;
    const auto& entry = doc[i];
    std::string label = fmt::format("device entry {}", i + 1);
    if (entry.is_object() && entry.contains("id") && entry["id"].is_string()) {
      label += fmt::format(" ('{}')", entry["id"].get<std::string>());
    }
    const auto fail = [&](const std::string& problem) {
      throw ParseError(
          fmt::format("{}:{}: {}: {}", reg.source_, line, label, problem), line);
    };
    DeviceProfile p = parse_profile(entry, fail);
    if (!seen.insert(p.id).second) fail(fmt::format("duplicate id '{}'", p.id));
    reg.profiles_.push_back(std::move(p));
  }
  return reg;
}

DeviceRegistry load_registry_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(fmt::format("cannot read device registry '{}'", path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_registry(buf.str(), path.string());
}

const DeviceRegistry& builtin_registry() {
  static const DeviceRegistry reg = load_registry(builtin_registry_text(), "built-in");
  return reg;
}

double px_to_mm(double logical_px, const DeviceProfile& profile) {
  require_length(logical_px, "pixel length");
  return logical_px * profile.scale_factor / profile.ppi * kMmPerInch;
}

double mm_to_px(double mm, const DeviceProfile& profile) {
  require_length(mm, "millimetre length");
  return mm / kMmPerInch * profile.ppi / profile.scale_factor;
}

nlohmann::ordered_json to_json(const DeviceProfile& p) {
  nlohmann::ordered_json j;
  j["id"] = p.id;
  j["display_name"] = p.display_name;
  if (p.ppi == std::floor(p.ppi) && p.ppi < 1e9) {
    j["ppi"] = static_cast<long long>(p.ppi);
  } else {
    j["ppi"] = p.ppi;
  }
  j["scale_factor"] = p.scale_factor;
  j["logical_width"] = p.logical_width;
  j["logical_height"] = p.logical_height;
  return j;
}

}  // namespace tappy::devices
