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
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tappy/device.hpp"
#include "tappy/model.hpp"

namespace httplib {
class Server;
}

namespace tappy::service {

inline constexpr int kDefaultPort = 7317;

struct ServiceConfig {
  std::string bind_address = "127.0.0.1";
  int port = kDefaultPort;  // 0 picks a free port
  std::vector<std::string> cors_origins{"*"};
};

// Throws UsageError for a port outside [0, 65535].
void validate(const ServiceConfig& config);

struct ApiResponse {
  int status = 200;
  nlohmann::ordered_json body;
};

// Endpoint logic, independent of the HTTP transport. Holds only immutable
// state, so one instance may serve concurrent requests.
//
// Error bodies are {"error": CODE, "message": text, "detail"?: {...}} with
// CODE one of INVALID_JSON, INVALID_REQUEST, MISSING_FIELDS, MIXED_UNITS,
// NEGATIVE_SIZE, UNKNOWN_DEVICE, INVALID_DOCUMENT, INVALID_SELECTION,
// UNATTAINABLE_RATE, UNSUPPORTED_MEDIA_TYPE, NOT_FOUND.
class PredictService {
 public:
  explicit PredictService(devices::DeviceRegistry registry,
                          model::ModelCoefficients coefficients = {});

  ApiResponse health() const;
  ApiResponse list_devices() const;
  ApiResponse predict(std::string_view body) const;
  ApiResponse analyze(std::string_view body) const;
  ApiResponse size_for(std::string_view body) const;

  const devices::DeviceRegistry& registry() const noexcept { return registry_; }

  // Registers the /v1 routes, CORS handling and JSON error pages.
  void mount(httplib::Server& server, const ServiceConfig& config) const;

 private:
  devices::DeviceRegistry registry_;
  model::ModelCoefficients coefficients_;
};

// Binds and serves until the process is stopped. on_listening receives the
// bound port once the socket accepts connections.
void serve(const PredictService& service, const ServiceConfig& config,
           const std::function<void(int)>& on_listening = {});

}  // namespace tappy::service
