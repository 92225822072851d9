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

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tappy/device.hpp"
#include "tappy/model.hpp"

namespace tappy::layout {

enum class NodeType { frame, group, rectangle, ellipse, text, component, instance, vector, other };

std::string_view to_string(NodeType type);
std::optional<NodeType> parse_node_type(std::string_view name);

// Axis-aligned bounding rectangle in absolute logical pixels.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  friend bool operator==(const Rect&, const Rect&) = default;
};

struct LayoutNode {
  std::string id;
  std::string name;
  NodeType type = NodeType::other;
  Rect frame;
  std::optional<bool> tappable;
  std::vector<LayoutNode> children;

  bool is_container() const noexcept { return !children.empty(); }
  bool has_area() const noexcept { return frame.width > 0.0 && frame.height > 0.0; }

  friend bool operator==(const LayoutNode&, const LayoutNode&) = default;
};

struct LayoutDocument {
  std::string name;
  std::optional<std::string> default_device;
  LayoutNode root;

  std::size_t node_count() const;

  friend bool operator==(const LayoutDocument&, const LayoutDocument&) = default;
};

struct ElementSelection {
  bool include_containers = false;
  std::optional<std::string> name_glob;
  bool explicit_only = false;
};

// Parses and validates a layout file. Malformed text raises ParseError;
// schema and invariant violations raise ValidationError whose path() points
// at the offending node (e.g. "/root/children/1/frame/width").
LayoutDocument parse_document(std::string_view text);
LayoutDocument parse_document_json(const nlohmann::json& doc);

LayoutDocument load_document_file(const std::string& path);

using NodeRef = std::reference_wrapper<const LayoutNode>;

// Nodes to score, in depth-first document order.
//
// Default: leaves with positive area. Containers (nodes with children) are
// added with include_containers. An explicit tappable flag wins over every
// other rule. explicit_only keeps tappable=true nodes only. Throws UsageError
// for a malformed glob or conflicting options.
std::vector<NodeRef> select_elements(const LayoutDocument& doc,
                                     const ElementSelection& sel = {});

// fnmatch-style glob (*, ?, [set], [!set]). Throws UsageError for an
// unterminated bracket expression or trailing backslash.
void validate_glob(std::string_view pattern);
bool glob_match(std::string_view pattern, std::string_view name);

model::PhysicalSize bounding_rect_mm(const LayoutNode& node,
                                     const devices::DeviceProfile& profile);

}  // namespace tappy::layout
