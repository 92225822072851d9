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

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// Command-line front end. Exit codes: 0 success / all elements passed,
// 1 at least one element below the threshold, 2 usage or input error.

namespace tappy::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBelowThreshold = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kDevicesEnvVar = "TAPPY_DEVICES";

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

std::optional<std::string> process_env(const std::string& name);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env = process_env);

}  // namespace tappy::cli
