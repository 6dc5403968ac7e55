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

#include <stdexcept>
#include <string>

namespace ugcs {

// Bad caller input: wrong dimensions, out-of-range values, non-unit vectors.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input document (gripper description, mesh, JSON file).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SphereFitFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyPrint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyCorrespondence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Uninitializable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ugcs
