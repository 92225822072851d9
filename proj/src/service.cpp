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

#include "tappy/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "tappy/analysis.hpp"
#include "tappy/error.hpp"
#include "tappy/layout.hpp"
#include "tappy/version.hpp"

namespace tappy::service {
namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

ApiResponse error(int status, std::string_view code, std::string message,
                  ojson detail = nullptr) {
  ApiResponse r;
  r.status = status;
  r.body["error"] = code;
  r.body["message"] = std::move(message);
  if (!detail.is_null()) r.body["detail"] = std::move(detail);
  return r;
}

ApiResponse unknown_device(const UnknownDeviceError& e) {
  return error(400, "UNKNOWN_DEVICE", e.what(),
               ojson{{"device_id", e.id()}, {"known_ids", e.known_ids()}});
}

// Probabilities and lengths go out at 15 significant digits.
double sig15(double v) { return std::stod(fmt::format("{:.15g}", v)); }

double ceil2(double v) { return std::ceil(v * 100.0) / 100.0; }

struct ParsedBody {
  json value;
  std::optional<ApiResponse> failure;
};

ParsedBody parse_object(std::string_view body,
                        std::initializer_list<std::string_view> allowed) {
  ParsedBody out;
  try {
    out.value = json::parse(body);
  } catch (const json::parse_error& e) {
    out.failure = error(400, "INVALID_JSON", fmt::format("request body is not valid JSON: {}", e.what()));
    return out;
  }
  if (!out.value.is_object()) {
    out.failure = error(400, "INVALID_REQUEST", "request body must be a JSON object");
    return out;
  }
  for (const auto& item : out.value.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      out.failure = error(400, "INVALID_REQUEST", fmt::format("unknown field '{}'", item.key()),
                          ojson{{"field", item.key()}});
      return out;
    }
  }
  return out;
}

// Reads an optional numeric field; a present non-number is a failure.
std::optional<ApiResponse> read_number(const json& obj, const char* key,
                                       std::optional<double>& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  if (!it->is_number()) {
    return error(400, "INVALID_REQUEST", fmt::format("'{}' must be a number", key),
                 ojson{{"field", key}});
  }
  out = it->get<double>();
  return std::nullopt;
}

bool is_json_content(const httplib::Request& req) {
  std::string type = req.get_header_value("Content-Type");
  type = type.substr(0, type.find(';'));
  type.erase(std::remove_if(type.begin(), type.end(),
                            [](unsigned char c) { return std::isspace(c); }),
             type.end());
  std::transform(type.begin(), type.end(), type.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return type == "application/json";
}

void send(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

std::string_view status_code_name(int status) {
  switch (status) {
    case 404: return "NOT_FOUND";
    case 405: return "METHOD_NOT_ALLOWED";
    case 413: return "PAYLOAD_TOO_LARGE";
    case 415: return "UNSUPPORTED_MEDIA_TYPE";
    default: return status >= 500 ? "INTERNAL_ERROR" : "BAD_REQUEST";
  }
}

}  // namespace

void validate(const ServiceConfig& config) {
  if (config.port < 0 || config.port > 65535) {
    throw UsageError(fmt::format("port must be in [0, 65535] (0 picks a free port), got {}", config.port));
  }
}

PredictService::PredictService(devices::DeviceRegistry registry,
                               model::ModelCoefficients coefficients)
    : registry_(std::move(registry)), coefficients_(coefficients) {
  model::validate(coefficients_);
}

ApiResponse PredictService::health() const {
  return {200, ojson{{"status", "ok"}, {"version", kVersion}}};
}

ApiResponse PredictService::list_devices() const {
  ojson arr = ojson::array();
  for (const auto& p : registry_.profiles()) arr.push_back(devices::to_json(p));
  return {200, std::move(arr)};
}

ApiResponse PredictService::predict(std::string_view body) const {
  auto parsed = parse_object(
      body, {"device_id", "width_px", "height_px", "width_mm", "height_mm"});
  if (parsed.failure) return *parsed.failure;
  const json& req = parsed.value;

  std::optional<double> width_px, height_px, width_mm, height_mm;
  for (auto [key, slot] : {std::pair{"width_px", &width_px}, std::pair{"height_px", &height_px},
                           std::pair{"width_mm", &width_mm}, std::pair{"height_mm", &height_mm}}) {
    if (auto failure = read_number(req, key, *slot)) return *failure;
  }
  std::optional<std::string> device_id;
  if (auto it = req.find("device_id"); it != req.end()) {
    if (!it->is_string()) {
      return error(400, "INVALID_REQUEST", "'device_id' must be a string",
                   ojson{{"field", "device_id"}});
    }
    device_id = it->get<std::string>();
  }

  const bool mm_mode = width_mm || height_mm;
  const bool px_mode = width_px || height_px || device_id;
  if (mm_mode && px_mode) {
    return error(400, "MIXED_UNITS",
                 "give either device_id with width_px/height_px or width_mm/height_mm, not both");
  }
  if (mm_mode ? !(width_mm && height_mm) : !(device_id && width_px && height_px)) {
    return error(400, "MISSING_FIELDS",
                 "expected {device_id, width_px, height_px} or {width_mm, height_mm}");
  }

  for (const auto& v : {width_px, height_px, width_mm, height_mm}) {
    if (v && *v < 0.0) {
      return error(400, "NEGATIVE_SIZE", fmt::format("sizes must be non-negative, got {}", *v));
    }
  }

  model::PhysicalSize size;
  if (mm_mode) {
    size = {*width_mm, *height_mm};
  } else {
    try {
      const auto& device = registry_.at(*device_id);
      size = {devices::px_to_mm(*width_px, device), devices::px_to_mm(*height_px, device)};
    } catch (const UnknownDeviceError& e) {
      return unknown_device(e);
    }
  }
  const auto p = model::success_rate(size, coefficients_);
  return {200, ojson{{"width_mm", sig15(size.width_mm)},
                     {"height_mm", sig15(size.height_mm)},
                     {"sigma_x_mm", sig15(p.sigma_x_mm)},
                     {"sigma_y_mm", sig15(p.sigma_y_mm)},
                     {"success_rate", sig15(p.success_rate)}}};
}

ApiResponse PredictService::analyze(std::string_view body) const {
  auto parsed = parse_object(body, {"document", "device_id", "threshold", "selection"});
  if (parsed.failure) return *parsed.failure;
  const json& req = parsed.value;

  if (!req.contains("document")) {
    return error(400, "MISSING_FIELDS", "'document' is required");
  }

  layout::LayoutDocument doc;
  try {
    doc = layout::parse_document_json(req.at("document"));
  } catch (const ValidationError& e) {
    return error(400, "INVALID_DOCUMENT", e.what(), ojson{{"path", e.path()}});
  }

  std::string device_id;
  if (auto it = req.find("device_id"); it != req.end()) {
    if (!it->is_string()) {
      return error(400, "INVALID_REQUEST", "'device_id' must be a string",
                   ojson{{"field", "device_id"}});
    }
    device_id = it->get<std::string>();
  } else if (doc.default_device) {
    device_id = *doc.default_device;
  } else {
    return error(400, "MISSING_FIELDS",
                 "'device_id' is required when the document has no default_device");
  }

  analysis::AnalysisOptions options;
  options.coefficients = coefficients_;
  std::optional<double> threshold;
  if (auto failure = read_number(req, "threshold", threshold)) return *failure;
  if (threshold) options.threshold = *threshold;

  if (auto it = req.find("selection"); it != req.end()) {
    const json& sel = *it;
    if (!sel.is_object()) {
      return error(400, "INVALID_SELECTION", "'selection' must be an object");
    }
    for (const auto& item : sel.items()) {
      const auto& key = item.key();
      const auto& v = item.value();
      if (key == "include_containers" && v.is_boolean()) {
        options.selection.include_containers = v.get<bool>();
      } else if (key == "explicit_only" && v.is_boolean()) {
        options.selection.explicit_only = v.get<bool>();
      } else if (key == "name_glob" && v.is_string()) {
        options.selection.name_glob = v.get<std::string>();
      } else if (key == "name_glob" && v.is_null()) {
        options.selection.name_glob.reset();
      } else {
        return error(400, "INVALID_SELECTION",
                     fmt::format("unknown or mistyped selection field '{}'", key),
                     ojson{{"field", key}});
      }
    }
  }

  try {
    const auto& device = registry_.at(device_id);
    return {200, analysis::to_json(analysis::analyze(doc, device, options))};
  } catch (const UnknownDeviceError& e) {
    return unknown_device(e);
  } catch (const UsageError& e) {
    const bool threshold_problem = std::string_view(e.what()).starts_with("threshold");
    return error(400, threshold_problem ? "INVALID_REQUEST" : "INVALID_SELECTION", e.what());
  }
}

ApiResponse PredictService::size_for(std::string_view body) const {
  auto parsed = parse_object(body, {"rate", "device_id", "height_mm"});
  if (parsed.failure) return *parsed.failure;
  const json& req = parsed.value;

  std::optional<double> rate, height_mm;
  if (auto failure = read_number(req, "rate", rate)) return *failure;
  if (auto failure = read_number(req, "height_mm", height_mm)) return *failure;
  if (!rate) return error(400, "MISSING_FIELDS", "'rate' is required");

  const devices::DeviceProfile* device = nullptr;
  if (auto it = req.find("device_id"); it != req.end()) {
    if (!it->is_string()) {
      return error(400, "INVALID_REQUEST", "'device_id' must be a string",
                   ojson{{"field", "device_id"}});
    }
    try {
      device = &registry_.at(it->get<std::string>());
    } catch (const UnknownDeviceError& e) {
      return unknown_device(e);
    }
  }
  if (height_mm && *height_mm <= 0.0) {
    return error(400, "NEGATIVE_SIZE",
                 fmt::format("height_mm must be positive, got {}", *height_mm));
  }

  double width = 0.0;
  double height = 0.0;
  try {
    if (height_mm) {
      width = model::min_width_for_rate(*rate, *height_mm, coefficients_);
      height = *height_mm;
    } else {
      width = height = model::min_square_size_for_rate(*rate, coefficients_);
    }
  } catch (const UnattainableRateError& e) {
    return error(400, "UNATTAINABLE_RATE", e.what(), ojson{{"ceiling", sig15(e.ceiling())}});
  }

  ojson out{{"rate", *rate}, {"width_mm", sig15(width)}, {"height_mm", sig15(height)}};
  if (device) {
    out["device_id"] = device->id;
    out["width_px"] = ceil2(devices::mm_to_px(width, *device));
    out["height_px"] = ceil2(devices::mm_to_px(height, *device));
  }
  return {200, std::move(out)};
}

void PredictService::mount(httplib::Server& server, const ServiceConfig& config) const {
  validate(config);
  const std::vector<std::string> origins = config.cors_origins;

  server.set_post_routing_handler([origins](const httplib::Request& req, httplib::Response& res) {
    const bool any = std::find(origins.begin(), origins.end(), "*") != origins.end();
    if (any) {
      res.set_header("Access-Control-Allow-Origin", "*");
    } else if (req.has_header("Origin")) {
      const auto origin = req.get_header_value("Origin");
      if (std::find(origins.begin(), origins.end(), origin) != origins.end()) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Vary", "Origin");
      }
    }
    res.set_header("Access-Control-Allow-Methods", "GET, HEAD, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    send(res, error(res.status, status_code_name(res.status),
                    fmt::format("HTTP {}", res.status)));
    return httplib::Server::HandlerResponse::Handled;
  });

  server.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });

  server.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
    send(res, health());
  });
  server.Get("/v1/devices", [this](const httplib::Request&, httplib::Response& res) {
    send(res, list_devices());
  });

  using Endpoint = ApiResponse (PredictService::*)(std::string_view) const;
  const auto post = [&](const char* path, Endpoint endpoint) {
    server.Post(path, [this, endpoint](const httplib::Request& req, httplib::Response& res) {
      if (!is_json_content(req)) {
        send(res, error(415, "UNSUPPORTED_MEDIA_TYPE",
                        "request Content-Type must be application/json"));
        return;
      }
      send(res, (this->*endpoint)(req.body));
    });
  };
  post("/v1/predict", &PredictService::predict);
  post("/v1/analyze", &PredictService::analyze);
  post("/v1/size-for", &PredictService::size_for);
}

void serve(const PredictService& service, const ServiceConfig& config,
           const std::function<void(int)>& on_listening) {
  validate(config);
  httplib::Server server;
  service.mount(server, config);
  int port = config.port;
  if (port == 0) {
    port = server.bind_to_any_port(config.bind_address);
    if (port < 0) throw Error(fmt::format("cannot bind {}", config.bind_address));
  } else if (!server.bind_to_port(config.bind_address, port)) {
    throw Error(fmt::format("cannot bind {}:{}", config.bind_address, port));
  }
  if (on_listening) on_listening(port);
  server.listen_after_bind();
}

}  // namespace tappy::service
