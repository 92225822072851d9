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

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tappy::devices {

// One phone display. Converts logical (design) pixels to millimetres:
//   mm = logical_px * scale_factor / ppi * 25.4
struct DeviceProfile {
  std::string id;            // lowercase, hyphenated
  std::string display_name;
  double ppi = 0.0;          // pixels per inch of the rendered physical pixels
  int scale_factor = 1;      // physical px per logical px, 1..4
  int logical_width = 0;
  int logical_height = 0;

  friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

// Immutable, ordered, non-empty set of profiles with unique ids.
class DeviceRegistry {
 public:
  const std::vector<DeviceProfile>& profiles() const noexcept { return profiles_; }
  const std::string& source() const noexcept { return source_; }

  // nullptr when absent.
  const DeviceProfile* find(std::string_view id) const noexcept;

  // Throws UnknownDeviceError listing the known ids.
  const DeviceProfile& at(std::string_view id) const;

  std::vector<std::string> ids() const;

  friend bool operator==(const DeviceRegistry&, const DeviceRegistry&) = default;

 private:
  friend DeviceRegistry load_registry(std::string_view, std::string);
  DeviceRegistry() = default;

  std::vector<DeviceProfile> profiles_;
  std::string source_;
};

// Parses registry text: a JSON array of objects with exactly the keys id,
// display_name, ppi, scale_factor, logical_width, logical_height. Errors are
// ParseError naming the source, entry, and line.
DeviceRegistry load_registry(std::string_view text, std::string source = "<memory>");

DeviceRegistry load_registry_file(const std::filesystem::path& path);

// The registry compiled into the binary (source() == "built-in").
const DeviceRegistry& builtin_registry();
std::string_view builtin_registry_text();

double px_to_mm(double logical_px, const DeviceProfile& profile);
double mm_to_px(double mm, const DeviceProfile& profile);

// Same keys and order as the registry file.
nlohmann::ordered_json to_json(const DeviceProfile& profile);

}  // namespace tappy::devices
