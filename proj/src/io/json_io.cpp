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

#include "ugcs/io/json_io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "ugcs/common/error.hpp"

namespace ugcs::io {
namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) throw InvalidArgument("cannot serialize a non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void write_value(std::string& out, const Json& j, bool pretty, int depth) {
  const auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(2 * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += pretty ? ": " : ":";
        write_value(out, it.value(), pretty, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += (pretty && flat) ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write_value(out, e, pretty, depth + 1);
      }
      if (!flat && !j.empty()) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const std::string v = format_double(j.get<double>());
      out += v;
      if (v.find_first_of(".e") == std::string::npos) out += ".0";
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(what + ": missing field '" + key + "'");
  return j.at(key);
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError(what + ": expected a number");
  return j.get<double>();
}

std::string text(const Json& j, const std::string& what) {
  if (!j.is_string()) throw ParseError(what + ": expected a string");
  return j.get<std::string>();
}

const Json& array(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array");
  return j;
}

void check_format(const Json& j, const char* format) {
  const std::string what = std::string(format) + " document";
  if (text(field(j, "format", what), what) != format) throw ParseError(what + ": wrong format tag");
  const Json& v = field(j, "version", what);
  if (!v.is_number_integer() || v.get<int>() != kFormatVersion) {
    throw ParseError(what + ": unsupported version");
  }
}

Json coords_json(const std::vector<geom::SphericalCoord>& coords) {
  Json out = Json::array();
  for (const auto& c : coords) out.push_back(Json::array({c.lambda, c.phi}));
  return out;
}

std::vector<geom::SphericalCoord> coords_from(const Json& j, const std::string& what) {
  std::vector<geom::SphericalCoord> out;
  for (const auto& e : array(j, what)) {
    if (!e.is_array() || e.size() != 2) throw ParseError(what + ": expected [lambda, phi] pairs");
    out.push_back({number(e[0], what), number(e[1], what)});
  }
  return out;
}

Json points_json(const std::vector<Eigen::Vector3d>& points) {
  Json out = Json::array();
  for (const auto& p : points) out.push_back(vec3_json(p));
  return out;
}

std::vector<Eigen::Vector3d> points_from(const Json& j, const std::string& what) {
  std::vector<Eigen::Vector3d> out;
  for (const auto& e : array(j, what)) out.push_back(vec3_from(e, what));
  return out;
}

Json pose_json(const kin::GraspConfig& q) { return {{"t", vec3_json(q.translation)}, {"r_exp", vec3_json(q.rotation)}}; }

}  // namespace

std::string dump(const Json& value, bool pretty) {
  std::string out;
  write_value(out, value, pretty, 0);
  if (pretty) out += '\n';
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in || std::filesystem::is_directory(path)) throw ParseError("file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) {
  const std::string content = read_file(path);
  try {
    return Json::parse(content);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": invalid JSON (" + e.what() + ")");
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ParseError("cannot write " + path);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ParseError("cannot write " + path + ": " + ec.message());
  }
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw InvalidArgument("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

Json metadata_json(const Metadata& meta) {
  Json inputs = Json::array();
  for (const auto& [role, path] : meta.inputs) {
    inputs.push_back({{"role", role}, {"path", path}, {"sha256", sha256_file(path)}});
  }
  return {{"tool", kToolName}, {"version", kToolVersion}, {"seed", meta.seed}, {"inputs", inputs}};
}

Json vec3_json(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec3_from(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw ParseError(what + ": expected a 3-vector");
  return {number(j[0], what), number(j[1], what), number(j[2], what)};
}

Json grasp_config_json(const kin::GripperModel& model, const kin::GraspConfig& q) {
  if (q.joints.size() != model.num_coordinates()) throw InvalidArgument("grasp config does not match the model");
  Json joints = Json::object();
  for (int c = 0; c < model.num_coordinates(); ++c) joints[model.coordinates()[c].name] = q.joints[c];
  return {{"gripper_id", model.name()}, {"root_pose", pose_json(q)}, {"joints", joints}};
}

kin::GraspConfig grasp_config_from(const Json& j, const kin::GripperModel& model) {
  const std::string what = "grasp config";
  const std::string id = text(field(j, "gripper_id", what), what);
  if (id != model.name()) throw InvalidArgument("grasp config is for gripper '" + id + "', not '" + model.name() + "'");
  const Json& pose = field(j, "root_pose", what);
  kin::GraspConfig q = kin::GraspConfig::zero(model.num_coordinates());
  q.translation = vec3_from(field(pose, "t", what), what);
  q.rotation = vec3_from(field(pose, "r_exp", what), what);
  const Json& joints = field(j, "joints", what);
  if (!joints.is_object()) throw ParseError(what + ": joints must be an object");
  std::set<std::string> seen;
  for (auto it = joints.begin(); it != joints.end(); ++it) {
    const auto c = model.coordinate_index(it.key());
    if (!c) throw ParseError(what + ": unknown joint '" + it.key() + "'");
    q.joints[*c] = number(it.value(), what);
    seen.insert(it.key());
  }
  if (static_cast<int>(seen.size()) != model.num_coordinates()) throw ParseError(what + ": missing joint values");
  if (!q.translation.allFinite() || !q.rotation.allFinite() || !q.joints.allFinite()) {
    throw ParseError(what + ": non-finite value");
  }
  return q;
}

Json sphere_report_json(const kin::GripperModel& model, const SphereFit& fit) {
  Json contacts = Json::array();
  for (const auto& c : fit.trial.contacts) {
    contacts.push_back({{"link", model.links()[c.link].name}, {"point", vec3_json(c.point)},
                        {"normal", vec3_json(c.normal)}});
  }
  return {{"format", "ugcs.sphere_report"},
          {"version", kFormatVersion},
          {"gripper_id", model.name()},
          {"radius", fit.sphere.radius},
          {"center", vec3_json(fit.sphere.center)},
          {"capture_config", grasp_config_json(model, fit.capture_config)},
          {"max_penetration", fit.trial.max_penetration},
          {"contacts", contacts}};
}

Json print_json(const GripperPrint& print, const kin::GripperModel& model) {
  return {{"format", "ugcs.gripper_print"},
          {"version", kFormatVersion},
          {"gripper_id", print.gripper_id()},
          {"gripper_source", print.gripper_source()},
          {"sphere", {{"center", vec3_json(print.sphere().center)}, {"radius", print.sphere().radius}}},
          {"print_config", grasp_config_json(model, print.print_config())},
          {"points", points_json(print.points())},
          {"coords", coords_json(print.coords())},
          {"links", print.links()},
          {"normals", points_json(print.normals())}};
}

std::pair<std::string, std::string> print_gripper_ref(const Json& j) {
  const std::string what = "gripper print";
  check_format(j, "ugcs.gripper_print");
  std::string source;
  if (j.contains("gripper_source")) source = text(j.at("gripper_source"), what);
  return {text(field(j, "gripper_id", what), what), source};
}

GripperPrint print_from(const Json& j, const kin::GripperModel& model) {
  const std::string what = "gripper print";
  GripperPrint::Data d;
  std::tie(d.gripper_id, d.gripper_source) = print_gripper_ref(j);
  if (d.gripper_id != model.name()) {
    throw InvalidArgument("print is for gripper '" + d.gripper_id + "', not '" + model.name() + "'");
  }
  const Json& sphere = field(j, "sphere", what);
  d.sphere.center = vec3_from(field(sphere, "center", what), what);
  d.sphere.radius = number(field(sphere, "radius", what), what);
  d.print_config = grasp_config_from(field(j, "print_config", what), model);
  d.points = points_from(field(j, "points", what), what);
  d.coords = coords_from(field(j, "coords", what), what);
  for (const auto& l : array(field(j, "links", what), what)) {
    const std::string name = text(l, what);
    if (!model.link_index(name)) throw ParseError(what + ": unknown link '" + name + "'");
    d.links.push_back(name);
  }
  d.normals = points_from(field(j, "normals", what), what);
  try {
    return GripperPrint(std::move(d));
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

Json map_json(const ObjectCloud& object, const CoordinateMap& map) {
  Json contact = Json::array();
  for (bool c : map.contact) contact.push_back(c);
  return {{"format", "ugcs.coordinate_map"},
          {"version", kFormatVersion},
          {"object_id", object.object_id},
          {"source", object.source},
          {"points", points_json(object.points)},
          {"normals", points_json(object.normals)},
          {"coords", coords_json(map.coords)},
          {"contact", contact}};
}

std::pair<ObjectCloud, CoordinateMap> map_from(const Json& j) {
  const std::string what = "coordinate map";
  check_format(j, "ugcs.coordinate_map");
  ObjectCloud cloud;
  cloud.object_id = text(field(j, "object_id", what), what);
  if (j.contains("source")) cloud.source = text(j.at("source"), what);
  cloud.points = points_from(field(j, "points", what), what);
  cloud.normals = points_from(field(j, "normals", what), what);
  CoordinateMap map;
  map.coords = coords_from(field(j, "coords", what), what);
  for (const auto& c : array(field(j, "contact", what), what)) {
    if (!c.is_boolean()) throw ParseError(what + ": contact entries must be booleans");
    map.contact.push_back(c.get<bool>());
  }
  try {
    cloud.validate();
    map.validate(cloud.size());
  } catch (const InvalidArgument& e) {
    throw ParseError(what + ": " + e.what());
  }
  return {std::move(cloud), std::move(map)};
}

Json grasp_record_json(const kin::GripperModel& model, const GraspRecord& record) {
  Json j = grasp_config_json(model, record.config);
  j["gripper_id"] = record.gripper_id;
  j["object_id"] = record.object_id;
  return j;
}

GraspRecord grasp_record_from(const Json& j, const kin::GripperModel& model) {
  GraspRecord r;
  r.gripper_id = text(field(j, "gripper_id", "grasp record"), "grasp record");
  r.object_id = text(field(j, "object_id", "grasp record"), "grasp record");
  r.config = grasp_config_from(j, model);
  return r;
}

Json config_json(const opt::OptimizationConfig& c) {
  return {{"format", "ugcs.optimization_config"},
          {"version", kFormatVersion},
          {"iterations", c.iterations},
          {"learning_rate", c.learning_rate},
          {"decay_every", c.decay_every},
          {"decay_factor", c.decay_factor},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"gradient_clip", c.gradient_clip},
          {"w_dist", c.w_dist},
          {"w_pen", c.w_pen},
          {"w_joint", c.w_joint},
          {"tolerance", c.tolerance},
          {"seed", c.seed},
          {"lambda_ub", c.lambda_ub},
          {"phi_lb", c.phi_lb},
          {"standoff", c.standoff},
          {"refine", c.refine},
          {"refine_step", c.refine_step},
          {"init_jitter_translation", c.init_jitter_translation},
          {"init_jitter_rotation", c.init_jitter_rotation},
          {"pole_guard", c.pole_guard}};
}

opt::OptimizationConfig config_from(const Json& j) {
  const std::string what = "optimization config";
  check_format(j, "ugcs.optimization_config");
  opt::OptimizationConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const Json& v = it.value();
    const auto integer = [&] {
      if (!v.is_number_integer()) throw ParseError(what + ": '" + k + "' must be an integer");
      return v.get<long long>();
    };
    if (k == "format" || k == "version") continue;
    if (k == "iterations") c.iterations = static_cast<int>(integer());
    else if (k == "decay_every") c.decay_every = static_cast<int>(integer());
    else if (k == "seed") c.seed = static_cast<std::uint64_t>(integer());
    else if (k == "refine") {
      if (!v.is_boolean()) throw ParseError(what + ": 'refine' must be a boolean");
      c.refine = v.get<bool>();
    }
    else if (k == "learning_rate") c.learning_rate = number(v, what);
    else if (k == "decay_factor") c.decay_factor = number(v, what);
    else if (k == "beta1") c.beta1 = number(v, what);
    else if (k == "beta2") c.beta2 = number(v, what);
    else if (k == "gradient_clip") c.gradient_clip = number(v, what);
    else if (k == "w_dist") c.w_dist = number(v, what);
    else if (k == "w_pen") c.w_pen = number(v, what);
    else if (k == "w_joint") c.w_joint = number(v, what);
    else if (k == "tolerance") c.tolerance = number(v, what);
    else if (k == "lambda_ub") c.lambda_ub = number(v, what);
    else if (k == "phi_lb") c.phi_lb = number(v, what);
    else if (k == "standoff") c.standoff = number(v, what);
    else if (k == "refine_step") c.refine_step = number(v, what);
    else if (k == "init_jitter_translation") c.init_jitter_translation = number(v, what);
    else if (k == "init_jitter_rotation") c.init_jitter_rotation = number(v, what);
    else if (k == "pole_guard") c.pole_guard = number(v, what);
    else throw ParseError(what + ": unknown field '" + k + "'");
  }
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(what + ": " + e.what());
  }
  return c;
}

Json energy_json(const opt::EnergyReport& r) {
  return {{"e_dist", r.e_dist},
          {"e_pen", r.e_pen},
          {"e_joint", r.e_joint},
          {"total", r.total},
          {"penetration_reliable", r.penetration_reliable}};
}

std::string trace_csv(const std::vector<opt::TraceRow>& trace) {
  std::string out = "iteration,e_dist,e_pen,e_joint,total\n";
  for (const auto& r : trace) {
    out += std::to_string(r.iteration) + ',' + format_double(r.e_dist) + ',' + format_double(r.e_pen) + ',' +
           format_double(r.e_joint) + ',' + format_double(r.total) + '\n';
  }
  return out;
}

}  // namespace ugcs::io
