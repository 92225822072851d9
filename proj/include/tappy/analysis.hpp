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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tappy/device.hpp"
#include "tappy/layout.hpp"
#include "tappy/model.hpp"

namespace tappy::analysis {

inline constexpr double kDefaultThreshold = 0.95;

struct ElementPrediction {
  std::string node_id;
  std::string node_name;
  double width_px = 0.0;
  double height_px = 0.0;
  double width_mm = 0.0;
  double height_mm = 0.0;
  double sigma_x_mm = 0.0;
  double sigma_y_mm = 0.0;
  double success_rate = 0.0;
  bool passed = false;
};

struct AnalysisReport {
  std::string document_name;
  std::string device_id;
  double threshold = kDefaultThreshold;
  std::vector<ElementPrediction> elements;
  std::optional<std::string> worst;         // node_id of the lowest rate
  std::optional<std::string> generated_at;  // RFC 3339, UTC
  std::vector<std::string> warnings;        // e.g. elements outside the screen

  bool all_passed() const;
};

struct AnalysisOptions {
  double threshold = kDefaultThreshold;
  layout::ElementSelection selection;
  model::ModelCoefficients coefficients;
  bool reproducible = false;  // omit generated_at
};

// Scores every selected element of doc on the given device. Throws
// UsageError for a threshold outside [0, 1] or a bad selection.
AnalysisReport analyze(const layout::LayoutDocument& doc,
                       const devices::DeviceProfile& device,
                       const AnalysisOptions& options = {});

enum class ReportFormat { text, json, csv };

std::optional<ReportFormat> parse_format(std::string_view name);

std::string render_report(const AnalysisReport& report, ReportFormat format);

// JSON form of one element / the whole report, with rates rounded to 4
// decimals and millimetres to 3. Keys are emitted in a fixed order.
nlohmann::ordered_json to_json(const ElementPrediction& element);
nlohmann::ordered_json to_json(const AnalysisReport& report);

// Current UTC time as RFC 3339, e.g. "2026-10-18T09:30:00Z".
std::string utc_timestamp();

}  // namespace tappy::analysis
