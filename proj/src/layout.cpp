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

#include "tappy/layout.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <fmt/format.h>

#include "tappy/error.hpp"

namespace tappy::layout {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<NodeType, std::string_view>, 9> kTypeNames = {{
    {NodeType::frame, "frame"},
    {NodeType::group, "group"},
    {NodeType::rectangle, "rectangle"},
    {NodeType::ellipse, "ellipse"},
    {NodeType::text, "text"},
    {NodeType::component, "component"},
    {NodeType::instance, "instance"},
    {NodeType::vector, "vector"},
    {NodeType::other, "other"},
}};

constexpr std::size_t kMaxDepth = 256;

[[noreturn]] void invalid(const std::string& path, const std::string& problem) {
  throw ValidationError(fmt::format("{}: {}", path.empty() ? "/" : path, problem),
                        path);
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& path) {
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      invalid(path, fmt::format("unknown key '{}'", item.key()));
    }
  }
}

const json& required(const json& obj, std::string_view key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) invalid(path, fmt::format("missing key '{}'", key));
  return *it;
}

std::string required_string(const json& obj, std::string_view key,
                            const std::string& path) {
  const json& v = required(obj, key, path);
  if (!v.is_string()) invalid(path + "/" + std::string(key), "must be a string");
  return v.get<std::string>();
}

Rect parse_frame(const json& j, const std::string& path) {
  if (!j.is_object()) invalid(path, "frame must be an object");
  reject_unknown_keys(j, {"x", "y", "width", "height"}, path);
  Rect r;
  for (auto [key, field] : {std::pair{"x", &r.x}, std::pair{"y", &r.y},
                            std::pair{"width", &r.width},
                            std::pair{"height", &r.height}}) {
    const json& v = required(j, key, path);
    const std::string field_path = path + "/" + key;
    if (!v.is_number()) invalid(field_path, "must be a number");
    *field = v.get<double>();
    if (!std::isfinite(*field)) invalid(field_path, "must be finite");
  }
  if (r.width < 0.0) invalid(path + "/width", fmt::format("negative width {}", r.width));
  if (r.height < 0.0) invalid(path + "/height", fmt::format("negative height {}", r.height));
  return r;
}

LayoutNode parse_node(const json& j, const std::string& path, std::size_t depth,
                      std::set<std::string>& ids) {
  if (depth > kMaxDepth) invalid(path, "node tree is nested too deeply");
  if (!j.is_object()) invalid(path, "node must be an object");
  reject_unknown_keys(j, {"id", "name", "type", "frame", "tappable", "children"}, path);

  LayoutNode node;
  node.id = required_string(j, "id", path);
  if (node.id.empty()) invalid(path + "/id", "must not be empty");
  if (!ids.insert(node.id).second) {
    invalid(path, fmt::format("duplicate node id '{}'", node.id));
  }
  node.name = required_string(j, "name", path);

  const std::string type = required_string(j, "type", path);
  auto parsed = parse_node_type(type);
  if (!parsed) invalid(path + "/type", fmt::format("unknown node type '{}'", type));
  node.type = *parsed;

  node.frame = parse_frame(required(j, "frame", path), path + "/frame");

  if (auto it = j.find("tappable"); it != j.end()) {
    if (!it->is_boolean()) invalid(path + "/tappable", "must be a boolean");
    node.tappable = it->get<bool>();
  }
  if (auto it = j.find("children"); it != j.end()) {
    if (!it->is_array()) invalid(path + "/children", "must be an array");
    node.children.reserve(it->size());
    for (std::size_t i = 0; i < it->size(); ++i) {
      node.children.push_back(parse_node((*it)[i],
                                         fmt::format("{}/children/{}", path, i),
                                         depth + 1, ids));
    }
  }
  return node;
}

std::size_t count_nodes(const LayoutNode& node) {
  std::size_t n = 1;
  for (const auto& child : node.children) n += count_nodes(child);
  return n;
}

bool wanted(const LayoutNode& node, const ElementSelection& sel) {
  if (node.tappable.has_value()) return *node.tappable;
  if (sel.explicit_only) return false;
  if (node.is_container() && !sel.include_containers) return false;
  if (!node.has_area()) return false;
  if (sel.name_glob && !glob_match(*sel.name_glob, node.name)) return false;
  return true;
}

void collect(const LayoutNode& node, const ElementSelection& sel,
             std::vector<NodeRef>& out) {
  if (wanted(node, sel)) out.emplace_back(node);
  for (const auto& child : node.children) collect(child, sel, out);
}

}  // namespace

std::string_view to_string(NodeType type) {
  for (const auto& [t, name] : kTypeNames) {
    if (t == type) return name;
  }
  return "other";
}

std::optional<NodeType> parse_node_type(std::string_view name) {
  for (const auto& [t, n] : kTypeNames) {
    if (n == name) return t;
  }
  return std::nullopt;
}

std::size_t LayoutDocument::node_count() const { return count_nodes(root); }

LayoutDocument parse_document_json(const json& j) {
  if (!j.is_object()) invalid("", "layout document must be an object");
  reject_unknown_keys(j, {"name", "default_device", "root"}, "");

  LayoutDocument doc;
  doc.name = required_string(j, "name", "");
  if (auto it = j.find("default_device"); it != j.end()) {
    if (!it->is_string()) invalid("/default_device", "must be a string");
    doc.default_device = it->get<std::string>();
  }
  std::set<std::string> ids;
  doc.root = parse_node(required(j, "root", ""), "/root", 0, ids);
  if (doc.root.type != NodeType::frame) {
    invalid("/root/type", "root node must be of type 'frame'");
  }
  return doc;
}

LayoutDocument parse_document(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const std::size_t line =
        1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
    throw ParseError(fmt::format("line {}: malformed layout document: {}", line, e.what()),
                     line);
  }
  return parse_document_json(j);
}

LayoutDocument load_document_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot read layout file '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_document(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path, e.what()), e.line());
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path, e.what()), e.path());
  }
}

void validate_glob(std::string_view pattern) {
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const char ch = pattern[i];
    if (ch == '\\') {
      if (i + 1 == pattern.size()) {
        throw UsageError(fmt::format("invalid glob '{}': trailing backslash", pattern));
      }
      ++i;
    } else if (ch == '[') {
      std::size_t j = i + 1;
      if (j < pattern.size() && (pattern[j] == '!' || pattern[j] == '^')) ++j;
      if (j < pattern.size() && pattern[j] == ']') ++j;  // literal ']' first
      while (j < pattern.size() && pattern[j] != ']') ++j;
      if (j == pattern.size()) {
        throw UsageError(
            fmt::format("invalid glob '{}': unterminated '[' at offset {}", pattern, i));
      }
      i = j;
    }
  }
}

bool glob_match(std::string_view pattern, std::string_view name) {
  validate_glob(pattern);
  const std::string p(pattern);
  const std::string n(name);
  return ::fnmatch(p.c_str(), n.c_str(), 0) == 0;
}

std::vector<NodeRef> select_elements(const LayoutDocument& doc,
                                     const ElementSelection& sel) {
  if (sel.explicit_only && (sel.name_glob || sel.include_containers)) {
    throw UsageError("explicit-only selection cannot be combined with a name glob "
                     "or container inclusion");
  }
  if (sel.name_glob) validate_glob(*sel.name_glob);
  std::vector<NodeRef> out;
  collect(doc.root, sel, out);
  return out;
}

model::PhysicalSize bounding_rect_mm(const LayoutNode& node,
                                     const devices::DeviceProfile& profile) {
  return {devices::px_to_mm(node.frame.width, profile),
          devices::px_to_mm(node.frame.height, profile)};
}

}  // namespace tappy::layout
