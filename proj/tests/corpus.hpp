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

// The sample corpus and the CLI arguments the golden files were made with.

#include <array>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace tappy::testing {

struct CorpusEntry {
  const char* name;    // samples/<name>.json, tests/golden/<name>.<format>
  const char* device;  // "" uses the document's default_device
  int expected_exit;   // 0 all pass, 1 some below the default threshold
};

inline constexpr std::array<CorpusEntry, 6> kCorpus = {{
    {"single-button", "", 0},
    {"checkout", "", 1},
    {"login", "", 1},
    {"settings", "", 0},
    {"toolbar-icons", "", 1},
    {"explicit-flags", "iphone-16", 1},
}};

inline constexpr std::array<const char*, 3> kFormats = {"text", "json", "csv"};

inline std::string source_path(const std::string& rel) {
  return std::string(TAPPY_SOURCE_DIR) + "/" + rel;
}

inline std::string sample_path(const CorpusEntry& e) {
  return source_path(std::string("samples/") + e.name + ".json");
}

inline std::string golden_path(const CorpusEntry& e, const std::string& format) {
  return source_path(std::string("tests/golden/") + e.name + "." + format);
}

inline std::vector<std::string> analyze_args(const CorpusEntry& e, const std::string& format) {
  std::vector<std::string> args{"analyze", sample_path(e), "--format", format, "--reproducible"};
  if (*e.device) {
    args.push_back("--device");
    args.push_back(e.device);
  }
  return args;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace tappy::testing
