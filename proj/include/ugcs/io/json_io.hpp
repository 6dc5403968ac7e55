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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ugcs/core/object_map.hpp"
#include "ugcs/core/print.hpp"
#include "ugcs/core/sphere.hpp"
#include "ugcs/graspopt/graspopt.hpp"
#include "ugcs/kinematics/kinematics.hpp"
#include "ugcs/kinematics/model.hpp"

namespace ugcs::io {

using Json = nlohmann::json;

inline constexpr const char* kToolName = "ugcs";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kFormatVersion = 1;

// Keys sorted, floats with 17 significant digits. Non-finite numbers throw.
std::string dump(const Json& value, bool pretty = true);

// Throws ParseError("file not found: ...") when the file cannot be opened.
std::string read_file(const std::string& path);
Json read_json(const std::string& path);
// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

struct Metadata {
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> inputs;  // role, path
};
Json metadata_json(const Metadata& meta);

Json vec3_json(const Eigen::Vector3d& v);
Eigen::Vector3d vec3_from(const Json& j, const std::string& what);

Json grasp_config_json(const kin::GripperModel& model, const kin::GraspConfig& q);
kin::GraspConfig grasp_config_from(const Json& j, const kin::GripperModel& model);

Json sphere_report_json(const kin::GripperModel& model, const SphereFit& fit);

Json print_json(const GripperPrint& print, const kin::GripperModel& model);
GripperPrint print_from(const Json& j, const kin::GripperModel& model);
// Reads gripper_id and gripper_source without a model.
std::pair<std::string, std::string> print_gripper_ref(const Json& j);

Json map_json(const ObjectCloud& object, const CoordinateMap& map);
std::pair<ObjectCloud, CoordinateMap> map_from(const Json& j);

Json grasp_record_json(const kin::GripperModel& model, const GraspRecord& record);
GraspRecord grasp_record_from(const Json& j, const kin::GripperModel& model);

Json config_json(const opt::OptimizationConfig& cfg);
opt::OptimizationConfig config_from(const Json& j);

Json energy_json(const opt::EnergyReport& report);
std::string trace_csv(const std::vector<opt::TraceRow>& trace);

}  // namespace ugcs::io
