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

#include "tappy/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "tappy/analysis.hpp"
#include "tappy/device.hpp"
#include "tappy/error.hpp"
#include "tappy/layout.hpp"
#include "tappy/model.hpp"
#include "tappy/service.hpp"
#include "tappy/version.hpp"

namespace tappy::cli {
namespace {

struct Options {
  std::string devices_file;

  // analyze
  std::string layout_file;
  std::string device;
  double threshold = analysis::kDefaultThreshold;
  std::string select;
  bool all = false;
  bool explicit_only = false;
  std::string format = "text";
  bool reproducible = false;

  // predict
  std::vector<double> px;
  std::vector<double> mm;

  // size-for
  double rate = 0.0;
  std::optional<double> height_mm;

  // serve
  int port = service::kDefaultPort;
  std::string bind = "127.0.0.1";
  std::vector<std::string> cors_origins;
};

std::string percent(double rate) { return fmt::format("{:.2f}%", rate * 100.0); }

double round_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::ceil(value * scale) / scale;
}

devices::DeviceRegistry resolve_registry(const Options& opt, const EnvLookup& env) {
  if (!opt.devices_file.empty()) return devices::load_registry_file(opt.devices_file);
  if (auto path = env(kDevicesEnvVar); path && !path->empty()) {
    return devices::load_registry_file(*path);
  }
  return devices::builtin_registry();
}

int cmd_analyze(const Options& opt, const EnvLookup& env, std::ostream& out) {
  const auto registry = resolve_registry(opt, env);
  const auto format = analysis::parse_format(opt.format);
  if (!format) throw UsageError(fmt::format("unknown format '{}'", opt.format));

  const auto doc = layout::load_document_file(opt.layout_file);
  std::string device_id = opt.device;
  if (device_id.empty()) {
    if (!doc.default_device) {
      throw UsageError(fmt::format(
          "no --device given and the document has no default_device; known devices: {}",
          fmt::join(registry.ids(), ", ")));
    }
    device_id = *doc.default_device;
  }
  const auto& device = registry.at(device_id);

  analysis::AnalysisOptions options;
  options.threshold = opt.threshold;
  options.selection.include_containers = opt.all;
  options.selection.explicit_only = opt.explicit_only;
  if (!opt.select.empty()) options.selection.name_glob = opt.select;
  options.reproducible = opt.reproducible;

  const auto report = analysis::analyze(doc, device, options);
  out << analysis::render_report(report, *format);
  return report.all_passed() ? kExitOk : kExitBelowThreshold;
}

int cmd_predict(const Options& opt, const EnvLookup& env, std::ostream& out) {
  const auto registry = resolve_registry(opt, env);
  const devices::DeviceProfile* device = nullptr;
  if (!opt.device.empty()) device = &registry.at(opt.device);

  model::PhysicalSize size;
  if (!opt.mm.empty()) {
    size = {opt.mm[0], opt.mm[1]};
    if (size.width_mm < 0.0 || size.height_mm < 0.0) {
      throw UsageError("sizes must be non-negative");
    }
  } else {
    if (!device) throw UsageError("--px needs --device (or use --mm)");
    if (opt.px[0] < 0.0 || opt.px[1] < 0.0) throw UsageError("sizes must be non-negative");
    size = {devices::px_to_mm(opt.px[0], *device), devices::px_to_mm(opt.px[1], *device)};
  }
  const auto p = model::success_rate(size);

  if (device) {
    out << fmt::format("Device:       {} ({})\n", device->id, device->display_name);
    const double wpx = opt.mm.empty() ? opt.px[0] : devices::mm_to_px(size.width_mm, *device);
    const double hpx = opt.mm.empty() ? opt.px[1] : devices::mm_to_px(size.height_mm, *device);
    out << fmt::format("Size (px):    {:g} x {:g}\n", wpx, hpx);
  }
  out << fmt::format("Size (mm):    {:.3f} x {:.3f}\n", size.width_mm, size.height_mm);
  out << fmt::format("Sigma (mm):   x {:.3f}, y {:.3f}\n", p.sigma_x_mm, p.sigma_y_mm);
  out << fmt::format("Success rate: {}\n", percent(p.success_rate));
  return kExitOk;
}

int cmd_size_for(const Options& opt, const EnvLookup& env, std::ostream& out) {
  const devices::DeviceProfile* device = nullptr;
  std::optional<devices::DeviceRegistry> registry;
  if (!opt.device.empty()) {
    registry = resolve_registry(opt, env);
    device = &registry->at(opt.device);
  }

  double width = 0.0;
  double height = 0.0;
  if (opt.height_mm) {
    width = model::min_width_for_rate(opt.rate, *opt.height_mm);
    height = *opt.height_mm;
  } else {
    width = height = model::min_square_size_for_rate(opt.rate);
  }

  out << fmt::format("Target rate:  {}\n", percent(opt.rate));
  if (opt.height_mm) {
    out << fmt::format("Min width:    {:.3f} mm at height {:g} mm\n", round_up(width, 3),
                       height);
  } else {
    out << fmt::format("Min square:   {:.3f} x {:.3f} mm\n", round_up(width, 3),
                       round_up(height, 3));
  }
  if (device) {
    const double wpx = round_up(devices::mm_to_px(width, *device), 2);
    const double hpx = round_up(devices::mm_to_px(height, *device), 2);
    out << fmt::format("On {}: {:.2f} x {:.2f} px\n", device->id, wpx, hpx);
  }
  const auto check = model::success_rate({width, height});
  out << fmt::format("Predicted:    {}\n", percent(check.success_rate));
  return kExitOk;
}

int cmd_devices(const Options& opt, const EnvLookup& env, std::ostream& out) {
  const auto registry = resolve_registry(opt, env);
  std::size_t w_id = 0, w_name = 0;
  for (const auto& p : registry.profiles()) {
    w_id = std::max(w_id, p.id.size());
    w_name = std::max(w_name, p.display_name.size());
  }
  for (const auto& p : registry.profiles()) {
    out << fmt::format("{:<{}}  {:<{}}  {:>7g} ppi  @{}x  {}x{}\n", p.id, w_id,
                       p.display_name, w_name, p.ppi, p.scale_factor, p.logical_width,
                       p.logical_height);
  }
  return kExitOk;
}

int cmd_serve(const Options& opt, const EnvLookup& env, std::ostream& out) {
  service::ServiceConfig config;
  config.port = opt.port;
  config.bind_address = opt.bind;
  if (!opt.cors_origins.empty()) config.cors_origins = opt.cors_origins;
  service::validate(config);
  const service::PredictService svc(resolve_registry(opt, env));
  service::serve(svc, config, [&](int port) {
    out << fmt::format("tappy {} listening on http://{}:{}/v1 ({} devices)\n", kVersion,
                       config.bind_address, port, svc.registry().profiles().size())
        << std::flush;
  });
  return kExitOk;
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env) {
  Options opt;
  CLI::App app{"Predict tap success rates of touch targets", "tappy"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  const auto add_devices = [&](CLI::App* cmd) {
    cmd->add_option("--devices", opt.devices_file,
                    fmt::format("Device registry file (overrides ${})", kDevicesEnvVar));
  };

  auto* analyze = app.add_subcommand("analyze", "Score the tappable elements of a layout file");
  analyze->add_option("file", opt.layout_file, "Layout JSON file")->required();
  analyze->add_option("--device", opt.device, "Device id (default: the document's default_device)");
  analyze->add_option("--threshold", opt.threshold, "Minimum acceptable success rate")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  analyze->add_option("--select", opt.select, "Only score nodes whose name matches this glob");
  auto* all = analyze->add_flag("--all", opt.all, "Also score container nodes");
  analyze->add_flag("--explicit-only", opt.explicit_only, "Only score nodes marked tappable")
      ->excludes(all);
  analyze->add_option("--format", opt.format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "json", "csv"}));
  analyze->add_flag("--reproducible", opt.reproducible, "Omit the timestamp from the report");
  add_devices(analyze);

  auto* predict = app.add_subcommand("predict", "Predict the success rate of one target");
  predict->add_option("--device", opt.device, "Device id");
  auto* px = predict->add_option("--px", opt.px, "Width and height in logical px")->expected(2);
  auto* mm = predict->add_option("--mm", opt.mm, "Width and height in mm")->expected(2);
  px->excludes(mm);
  predict->require_option(1, 3);
  add_devices(predict);

  auto* size_for = app.add_subcommand("size-for", "Smallest target meeting a success rate");
  size_for->add_option("--rate", opt.rate, "Target success rate in (0, 1)")->required();
  size_for->add_option("--device", opt.device, "Also report the size in this device's px");
  size_for->add_option("--height-mm", opt.height_mm, "Fix the height and solve for the width");
  add_devices(size_for);

  auto* list = app.add_subcommand("devices", "List known devices");
  add_devices(list);

  auto* serve = app.add_subcommand("serve", "Run the local HTTP prediction service");
  serve->add_option("--port", opt.port, "TCP port")->capture_default_str()->check(CLI::Range(1, 65535));
  serve->add_option("--bind", opt.bind, "Bind address")->capture_default_str();
  serve->add_option("--cors-origin", opt.cors_origins, "Allowed CORS origin (default *)");
  add_devices(serve);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze) return cmd_analyze(opt, env, out);
    if (*predict) {
      if (opt.px.empty() && opt.mm.empty()) throw UsageError("give --px W H or --mm W H");
      return cmd_predict(opt, env, out);
    }
    if (*size_for) return cmd_size_for(opt, env, out);
    if (*list) return cmd_devices(opt, env, out);
    if (*serve) return cmd_serve(opt, env, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace tappy::cli
