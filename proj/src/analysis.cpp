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

#include "tappy/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <span>

#include <fmt/format.h>

#include "tappy/error.hpp"
#include "tappy/kernels.hpp"

namespace tappy::analysis {
namespace {

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

std::string percent(double rate) { return fmt::format("{:.2f}%", rate * 100.0); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void check_bounds(const layout::LayoutDocument& doc,
                  const devices::DeviceProfile& device,
                  std::span<const layout::NodeRef> nodes,
                  std::vector<std::string>& warnings) {
  const auto& origin = doc.root.frame;
  const double w = device.logical_width;
  const double h = device.logical_height;
  if (origin.width > w || origin.height > h) {
    warnings.push_back(fmt::format(
        "document root '{}' ({:g} x {:g} px) is larger than the {} screen ({} x {} px)",
        doc.root.id, origin.width, origin.height, device.id, device.logical_width,
        device.logical_height));
  }
  for (const layout::LayoutNode& node : nodes) {
    const double left = node.frame.x - origin.x;
    const double top = node.frame.y - origin.y;
    if (left < 0.0 || top < 0.0 || left + node.frame.width > w ||
        top + node.frame.height > h) {
      warnings.push_back(fmt::format("element '{}' extends beyond the {} screen ({} x {} px)",
                                     node.id, device.id, device.logical_width,
                                     device.logical_height));
    }
  }
}

}  // namespace

bool AnalysisReport::all_passed() const {
  return std::all_of(elements.begin(), elements.end(),
                     [](const ElementPrediction& e) { return e.passed; });
}

AnalysisReport analyze(const layout::LayoutDocument& doc,
                       const devices::DeviceProfile& device,
                       const AnalysisOptions& options) {
  if (!std::isfinite(options.threshold) || options.threshold < 0.0 ||
      options.threshold > 1.0) {
    throw UsageError(
        fmt::format("threshold must be a probability in [0, 1], got {}", options.threshold));
  }
  const auto nodes = layout::select_elements(doc, options.selection);

  std::vector<model::PhysicalSize> sizes;
  sizes.reserve(nodes.size());
  for (const layout::LayoutNode& node : nodes) {
    sizes.push_back(layout::bounding_rect_mm(node, device));
  }
  const auto predictions = kernels::score_batch(sizes, options.coefficients);

  AnalysisReport report;
  report.document_name = doc.name;
  report.device_id = device.id;
  report.threshold = options.threshold;
  report.elements.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const layout::LayoutNode& node = nodes[i];
    ElementPrediction e;
    e.node_id = node.id;
    e.node_name = node.name;
    e.width_px = node.frame.width;
    e.height_px = node.frame.height;
    e.width_mm = sizes[i].width_mm;
    e.height_mm = sizes[i].height_mm;
    e.sigma_x_mm = predictions[i].sigma_x_mm;
    e.sigma_y_mm = predictions[i].sigma_y_mm;
    e.success_rate = predictions[i].success_rate;
    e.passed = e.success_rate >= options.threshold;
    report.elements.push_back(std::move(e));
  }

  auto worst = std::min_element(
      report.elements.begin(), report.elements.end(),
      [](const auto& a, const auto& b) { return a.success_rate < b.success_rate; });
  if (worst != report.elements.end()) report.worst = worst->node_id;

  check_bounds(doc, device, nodes, report.warnings);
  if (!options.reproducible) report.generated_at = utc_timestamp();
  return report;
}

std::optional<ReportFormat> parse_format(std::string_view name) {
  if (name == "text") return ReportFormat::text;
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  return std::nullopt;
}

nlohmann::ordered_json to_json(const ElementPrediction& e) {
  nlohmann::ordered_json j;
  j["node_id"] = e.node_id;
  j["node_name"] = e.node_name;
  j["width_px"] = e.width_px;
  j["height_px"] = e.height_px;
  j["width_mm"] = round_to(e.width_mm, 3);
  j["height_mm"] = round_to(e.height_mm, 3);
  j["sigma_x_mm"] = round_to(e.sigma_x_mm, 3);
  j["sigma_y_mm"] = round_to(e.sigma_y_mm, 3);
  j["success_rate"] = round_to(e.success_rate, 4);
  j["passed"] = e.passed;
  return j;
}

nlohmann::ordered_json to_json(const AnalysisReport& r) {
  nlohmann::ordered_json j;
  j["document_name"] = r.document_name;
  j["device_id"] = r.device_id;
  j["threshold"] = r.threshold;
  if (r.generated_at) j["generated_at"] = *r.generated_at;
  j["worst"] = r.worst ? nlohmann::ordered_json(*r.worst) : nlohmann::ordered_json();
  const auto failed = std::count_if(r.elements.begin(), r.elements.end(),
                                    [](const auto& e) { return !e.passed; });
  j["summary"] = {{"elements", r.elements.size()},
                  {"passed", r.elements.size() - static_cast<std::size_t>(failed)},
                  {"failed", failed}};
  auto& elements = j["elements"] = nlohmann::ordered_json::array();
  for (const auto& e : r.elements) elements.push_back(to_json(e));
  j["warnings"] = r.warnings;
  return j;
}

std::string render_report(const AnalysisReport& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::json:
      return to_json(r).dump(2) + "\n";

    case ReportFormat::csv: {
      std::string out =
          "node_id,node_name,width_px,height_px,width_mm,height_mm,success_rate,passed\n";
      for (const auto& e : r.elements) {
        out += fmt::format("{},{},{},{},{:.3f},{:.3f},{:.4f},{}\n", csv_field(e.node_id),
                           csv_field(e.node_name), e.width_px, e.height_px, e.width_mm,
                           e.height_mm, e.success_rate, e.passed ? "true" : "false");
      }
      return out;
    }

    case ReportFormat::text:
      break;
  }

  struct Row {
    std::string id, name, px, mm, rate, status;
  };
  std::vector<Row> rows;
  rows.push_back({"ID", "NAME", "SIZE (px)", "SIZE (mm)", "RATE", "STATUS"});
  for (const auto& e : r.elements) {
    rows.push_back({e.node_id, e.node_name, fmt::format("{:g} x {:g}", e.width_px, e.height_px),
                    fmt::format("{:.3f} x {:.3f}", e.width_mm, e.height_mm),
                    percent(e.success_rate), e.passed ? "PASS" : "FAIL"});
  }
  std::size_t w_id = 0, w_name = 0, w_px = 0, w_mm = 0, w_rate = 0;
  for (const auto& row : rows) {
    w_id = std::max(w_id, row.id.size());
    w_name = std::max(w_name, row.name.size());
    w_px = std::max(w_px, row.px.size());
    w_mm = std::max(w_mm, row.mm.size());
    w_rate = std::max(w_rate, row.rate.size());
  }

  std::string out;
  out += fmt::format("Document:  {}\n", r.document_name);
  out += fmt::format("Device:    {}\n", r.device_id);
  out += fmt::format("Threshold: {}\n", percent(r.threshold));
  if (r.generated_at) out += fmt::format("Generated: {}\n", *r.generated_at);
  out += "\n";
  for (const auto& row : rows) {
    out += fmt::format("{:<{}}  {:<{}}  {:>{}}  {:>{}}  {:>{}}  {}\n", row.id, w_id, row.name,
                       w_name, row.px, w_px, row.mm, w_mm, row.rate, w_rate, row.status);
  }
  out += "\n";

  const auto failed = std::count_if(r.elements.begin(), r.elements.end(),
                                    [](const auto& e) { return !e.passed; });
  out += fmt::format("{} element{}: {} passed, {} failed", r.elements.size(),
                     r.elements.size() == 1 ? "" : "s",
                     r.elements.size() - static_cast<std::size_t>(failed), failed);
  if (r.worst) {
    const auto& worst = *std::find_if(r.elements.begin(), r.elements.end(),
                                      [&](const auto& e) { return e.node_id == *r.worst; });
    out += fmt::format(". Worst: {} ({})", worst.node_id, percent(worst.success_rate));
  }
  out += "\n";
  for (const auto& w : r.warnings) out += fmt::format("warning: {}\n", w);
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace tappy::analysis
