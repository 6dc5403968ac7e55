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

#include "ugcs/geom/mesh_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "ugcs/common/error.hpp"

namespace ugcs::geom {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

int resolve_obj_index(const std::string& token, int vertex_count) {
  const std::string head = token.substr(0, token.find('/'));
  int idx = 0;
  try {
    idx = std::stoi(head);
  } catch (const std::exception&) {
    throw ParseError("OBJ: bad face index '" + token + "'");
  }
  if (idx > 0) return idx - 1;
  if (idx < 0) return vertex_count + idx;
  throw ParseError("OBJ: zero face index");
}

enum class PlyFormat { kAscii, kBinaryLittle, kBinaryBig };

enum class PlyType { kInt8, kUint8, kInt16, kUint16, kInt32, kUint32, kFloat32, kFloat64 };

PlyType parse_ply_type(const std::string& name) {
  const std::string n = lower(name);
  if (n == "char" || n == "int8") return PlyType::kInt8;
  if (n == "uchar" || n == "uint8") return PlyType::kUint8;
  if (n == "short" || n == "int16") return PlyType::kInt16;
  if (n == "ushort" || n == "uint16") return PlyType::kUint16;
  if (n == "int" || n == "int32") return PlyType::kInt32;
  if (n == "uint" || n == "uint32") return PlyType::kUint32;
  if (n == "float" || n == "float32") return PlyType::kFloat32;
  if (n == "double" || n == "float64") return PlyType::kFloat64;
  throw ParseError("PLY: unknown property type '" + name + "'");
}


struct PlyProperty {
  std::string name;
  PlyType type = PlyType::kFloat32;
  bool is_list = false;
  PlyType count_type = PlyType::kUint8;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

template <typename T>
T read_raw(std::istream& in, bool swap) {
  std::array<char, sizeof(T)> buf{};
  if (!in.read(buf.data(), sizeof(T))) throw ParseError("PLY: unexpected end of binary data");
  if (swap) std::reverse(buf.begin(), buf.end());
  T v;
  std::memcpy(&v, buf.data(), sizeof(T));
  return v;
}

double read_binary_value(std::istream& in, PlyType t, bool swap) {
  switch (t) {
    case PlyType::kInt8: return read_raw<std::int8_t>(in, swap);
    case PlyType::kUint8: return read_raw<std::uint8_t>(in, swap);
    case PlyType::kInt16: return read_raw<std::int16_t>(in, swap);
    case PlyType::kUint16: return read_raw<std::uint16_t>(in, swap);
    case PlyType::kInt32: return read_raw<std::int32_t>(in, swap);
    case PlyType::kUint32: return read_raw<std::uint32_t>(in, swap);
    case PlyType::kFloat32: return read_raw<float>(in, swap);
    case PlyType::kFloat64: return read_raw<double>(in, swap);
  }
  return 0.0;
}

void append_polygon(const std::vector<int>& poly, int vertex_count, std::vector<std::array<int, 3>>& tris,
                    const char* format) {
  if (poly.size() < 3) throw ParseError(std::string(format) + ": face with fewer than 3 vertices");
  for (int idx : poly) {
    if (idx < 0 || idx >= vertex_count) throw ParseError(std::string(format) + ": face index out of range");
  }
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) tris.push_back({poly[0], poly[k], poly[k + 1]});
}

}  // namespace

TriMesh read_obj(std::istream& in) {
  std::vector<Eigen::Vector3d> verts;
  std::vector<std::vector<int>> faces;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(ss >> p.x() >> p.y() >> p.z())) throw ParseError("OBJ: malformed vertex line '" + line + "'");
      verts.push_back(p);
    } else if (tag == "f") {
      std::vector<int> poly;
      std::string tok;
      while (ss >> tok) poly.push_back(resolve_obj_index(tok, static_cast<int>(verts.size())));
      faces.push_back(std::move(poly));
    }
  }
  std::vector<std::array<int, 3>> tris;
  for (const auto& f : faces) append_polygon(f, static_cast<int>(verts.size()), tris, "OBJ");
  return TriMesh(std::move(verts), std::move(tris));
}

TriMesh read_ply(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) throw ParseError("PLY: missing magic");
  PlyFormat format = PlyFormat::kAscii;
  std::vector<PlyElement> elements;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "format") {
      std::string f;
      ss >> f;
      if (f == "ascii") format = PlyFormat::kAscii;
      else if (f == "binary_little_endian") format = PlyFormat::kBinaryLittle;
      else if (f == "binary_big_endian") format = PlyFormat::kBinaryBig;
      else throw ParseError("PLY: unknown format '" + f + "'");
    } else if (tag == "element") {
      PlyElement e;
      ss >> e.name >> e.count;
      elements.push_back(e);
    } else if (tag == "property") {
      if (elements.empty()) throw ParseError("PLY: property before element");
      PlyProperty p;
      std::string type;
      ss >> type;
      if (type == "list") {
        std::string count_type, item_type;
        ss >> count_type >> item_type >> p.name;
        p.is_list = true;
        p.count_type = parse_ply_type(count_type);
        p.type = parse_ply_type(item_type);
      } else {
        p.type = parse_ply_type(type);
        ss >> p.name;
      }
      elements.back().properties.push_back(p);
    } else if (tag == "end_header") {
      header_done = true;
      break;
    }
  }
  if (!header_done) throw ParseError("PLY: missing end_header");

  const bool swap = (format == PlyFormat::kBinaryBig) == (std::endian::native == std::endian::little);
  std::vector<Eigen::Vector3d> verts;
  std::vector<std::array<int, 3>> tris;
  std::vector<std::vector<int>> faces;

  for (const auto& e : elements) {
    for (std::size_t i = 0; i < e.count; ++i) {
      Eigen::Vector3d p = Eigen::Vector3d::Zero();
      std::vector<int> poly;
      std::istringstream row;
      if (format == PlyFormat::kAscii) {
        if (!std::getline(in, line)) throw ParseError("PLY: unexpected end of ascii data");
        row.str(line);
      }
      for (const auto& prop : e.properties) {
        auto read_value = [&](PlyType t) -> double {
          if (format != PlyFormat::kAscii) return read_binary_value(in, t, swap);
          double v = 0.0;
          if (!(row >> v)) throw ParseError("PLY: malformed ascii row");
          return v;
        };
        if (prop.is_list) {
          const auto n = static_cast<std::size_t>(read_value(prop.count_type));
          std::vector<int> items(n);
          for (auto& it : items) it = static_cast<int>(read_value(prop.type));
          if (e.name == "face" && (prop.name == "vertex_indices" || prop.name == "vertex_index")) {
            poly = std::move(items);
          }
        } else {
          const double v = read_value(prop.type);
          if (e.name == "vertex") {
            if (prop.name == "x") p.x() = v;
            if (prop.name == "y") p.y() = v;
            if (prop.name == "z") p.z() = v;
          }
        }
      }
      if (e.name == "vertex") verts.push_back(p);
      if (e.name == "face") faces.push_back(std::move(poly));
    }
  }
  for (const auto& f : faces) append_polygon(f, static_cast<int>(verts.size()), tris, "PLY");
  return TriMesh(std::move(verts), std::move(tris));
}

TriMesh load_mesh(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext != ".obj" && ext != ".ply") throw ParseError("unsupported mesh format: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("file not found: " + path.string());
  try {
    return ext == ".obj" ? read_obj(in) : read_ply(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_obj(const TriMesh& mesh, std::ostream& out) {
  out.precision(17);
  for (const auto& v : mesh.vertices()) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles()) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

}  // namespace ugcs::geom
