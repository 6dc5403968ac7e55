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

#include <filesystem>
#include <iosfwd>

#include "ugcs/geom/mesh.hpp"

namespace ugcs::geom {

// Wavefront OBJ (polygons fan-triangulated) or PLY (ascii, binary little or
// big endian), selected by extension. Throws ParseError on malformed input.
TriMesh load_mesh(const std::filesystem::path& path);

TriMesh read_obj(std::istream& in);
TriMesh read_ply(std::istream& in);

void write_obj(const TriMesh& mesh, std::ostream& out);

}  // namespace ugcs::geom
