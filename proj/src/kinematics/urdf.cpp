// Copyright 2026 The UGCS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "ugcs/common/error.hpp"
#include "ugcs/geom/mesh_io.hpp"
#include "ugcs/kinematics/model.hpp"
#include "ugcs/kinematics/so3.hpp"

namespace ugcs::kin {
namespace {

using boost::property_tree::ptree;

std::optional<std::string> attr(const ptree& node, const std::string& key) {
  const auto v = node.get_optional<std::string>("<xmlattr>." + key);
  if (!v) return std::nullopt;
  return *v;
}

std::string require_attr(const ptree& node, const std::string& key, const std::string& where) {
  const auto v = attr(node, key);
  if (!v) throw ParseError(where + ": missing attribute '" + key + "'");
  return *v;
}

Eigen::Vector3d parse_vec3(const std::string& text, const std::string& where) {
  std::istringstream ss(text);
  Eigen::Vector3d v;
  if (!(ss >> v.x() >> v.y() >> v.z())) throw ParseError(where + ": expected three numbers, got '" + text + "'");
  return v;
}

double parse_double(const std::string& text, const std::string& where) {
  std::istringstream ss(text);
  double v = 0.0;
  if (!(ss >> v)) throw ParseError(where + ": expected a number, got '" + text + "'");
  return v;
}

Eigen::Isometry3d parse_origin(const ptree& parent, const std::string& where) {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  const auto origin = parent.get_child_optional("origin");
  if (!origin) return t;
  if (const auto xyz = attr(*origin, "xyz")) t.translation() = parse_vec3(*xyz, where + " origin");
  if (const auto rpy = attr(*origin, "rpy")) t.linear() = rotation_from_rpy(parse_vec3(*rpy, where + " origin"));
  return t;
}

std::optional<geom::TriMesh> parse_geometry_block(const ptree& block, const std::filesystem::path& base_dir,
                                                  const std::string& where) {
  const auto geometry = block.get_child_optional("geometry");
  if (!geometry) throw ParseError(where + ": missing <geometry>");
  const auto mesh = geometry->get_child_optional("mesh");
  if (!mesh) {
    for (const auto& [tag, _] : *geometry) {
      if (tag != "<xmlattr>" && tag != "<xmlcomment>") {
        throw ParseError(where + ": unsupported geometry <" + tag + ">");
      }
    }
    throw ParseError(where + ": empty <geometry>");
  }
  std::string file = require_attr(*mesh, "filename", where + " <mesh>");
  constexpr std::string_view kFilePrefix = "file://";
  if (file.rfind(kFilePrefix, 0) == 0) file = file.substr(kFilePrefix.size());
  std::filesystem::path path(file);
  if (path.is_relative()) path = base_dir / path;
  geom::TriMesh loaded;
  try {
    loaded = geom::load_mesh(path);
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  }
  if (const auto scale = attr(*mesh, "scale")) loaded = loaded.scaled(parse_vec3(*scale, where + " <mesh> scale"));
  return loaded.transformed(parse_origin(block, where));
}

JointType parse_joint_type(const std::string& type, const std::string& where) {
  if (type == "revolute") return JointType::kRevolute;
  if (type == "prismatic") return JointType::kPrismatic;
  if (type == "fixed") return JointType::kFixed;
  throw ParseError(where + ": unsupported joint type '" + type + "'");
}

}  // namespace

GripperModel parse_gripper(const std::string& text, const std::filesystem::path& base_dir) {
  ptree doc;
  try {
    std::istringstream in(text);
    boost::property_tree::read_xml(in, doc);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw ParseError(std::string("gripper description: malformed XML: ") + e.what());
  }
  const auto robot = doc.get_child_optional("robot");
  if (!robot) throw ParseError("gripper description: missing <robot> element");
  const std::string robot_name = attr(*robot, "name").value_or("gripper");

  std::vector<Link> links;
  std::map<std::string, int> link_ids;
  std::vector<const ptree*> joint_nodes;
  std::vector<std::string> palm_names;
  for (const auto& [tag, node] : *robot) {
    if (tag == "link") {
      const std::string name = require_attr(node, "name", "<link>");
      const std::string where = "link '" + name + "'";
      if (link_ids.count(name)) throw ParseError(where + ": duplicate name");
      std::vector<geom::TriMesh> parts;
      // Collision geometry wins over visual geometry when both are given.
      const char* preferred = node.get_child_optional("collision") ? "collision" : "visual";
      for (const auto& [child_tag, child] : node) {
        if (child_tag == preferred) {
          if (auto mesh = parse_geometry_block(child, base_dir, where)) parts.push_back(std::move(*mesh));
        }
      }
      Link link{name, std::nullopt};
      if (!parts.empty()) link.mesh = parts.size() == 1 ? std::move(parts.front()) : geom::TriMesh::merge(parts);
      link_ids[name] = static_cast<int>(links.size());
      links.push_back(std::move(link));
    } else if (tag == "joint") {
      joint_nodes.push_back(&node);
    } else if (tag == "ugcs") {
      palm_names.push_back(require_attr(node, "palm_link", "<ugcs>"));
    }
  }

  std::vector<Joint> joints;
  std::map<std::string, int> joint_ids;
  std::vector<std::string> mimic_targets;
  for (const ptree* node : joint_nodes) {
    const std::string name = require_attr(*node, "name", "<joint>");
    const std::string where = "joint '" + name + "'";
    Joint joint;
    joint.name = name;
    joint.type = parse_joint_type(require_attr(*node, "type", where), where);
    auto link_ref = [&](const char* which) {
      const auto child = node->get_child_optional(which);
      if (!child) throw ParseError(where + ": missing <" + std::string(which) + ">");
      const std::string ref = require_attr(*child, "link", where + " <" + which + ">");
      const auto it = link_ids.find(ref);
      if (it == link_ids.end()) throw ParseError(where + ": unknown link reference '" + ref + "'");
      return it->second;
    };
    joint.parent = link_ref("parent");
    joint.child = link_ref("child");
    if (joint.parent == joint.child) {
      throw ParseError(where + ": self-loop (parent and child are both '" + links[joint.child].name + "')");
    }
    joint.origin = parse_origin(*node, where);
    if (const auto axis = node->get_child_optional("axis")) {
      joint.axis = parse_vec3(require_attr(*axis, "xyz", where + " <axis>"), where + " <axis>");
    }
    const auto mimic = node->get_child_optional("mimic");
    std::string mimic_target;
    if (mimic) {
      mimic_target = require_attr(*mimic, "joint", where + " <mimic>");
      if (const auto m = attr(*mimic, "multiplier")) joint.multiplier = parse_double(*m, where + " <mimic>");
      if (const auto o = attr(*mimic, "offset")) joint.offset = parse_double(*o, where + " <mimic>");
    }
    if (joint.type != JointType::kFixed) {
      const auto limit = node->get_child_optional("limit");
      if (limit) {
        joint.lower = parse_double(require_attr(*limit, "lower", where + " <limit>"), where + " <limit>");
        joint.upper = parse_double(require_attr(*limit, "upper", where + " <limit>"), where + " <limit>");
      } else if (!mimic) {
        throw ParseError(where + ": missing <limit> on actuated joint");
      }
    }
    if (joint_ids.count(name)) throw ParseError(where + ": duplicate name");
    joint_ids[name] = static_cast<int>(joints.size());
    joints.push_back(joint);
    mimic_targets.push_back(mimic_target);
  }
  for (std::size_t j = 0; j < joints.size(); ++j) {
    if (mimic_targets[j].empty()) continue;
    const auto it = joint_ids.find(mimic_targets[j]);
    if (it == joint_ids.end()) {
      throw ParseError("joint '" + joints[j].name + "': unknown mimic joint '" + mimic_targets[j] + "'");
    }
    joints[j].mimic = it->second;
  }

  if (palm_names.size() != 1) {
    throw ParseError("gripper '" + robot_name + "': expected exactly one <ugcs palm_link=...> element, found " +
                     std::to_string(palm_names.size()));
  }
  const auto palm = link_ids.find(palm_names.front());
  if (palm == link_ids.end()) throw ParseError("<ugcs>: unknown palm link '" + palm_names.front() + "'");

  return GripperModel(robot_name, std::move(links), std::move(joints), palm->second);
}

GripperModel load_gripper(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("file not found: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_gripper(buffer.str(), path.parent_path());
}

}  // namespace ugcs::kin
