// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the locfim authors
//
// Error taxonomy shared by the library and the command line tool.
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

#pragma once

#include <stdexcept>

namespace locfim {

// Malformed or inconsistent input: bad scenario files, invalid units,
// mismatched configurations.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Geometry that leaves path parameters or their Jacobian undefined:
// coincident endpoints, zero-length paths, degenerate incidence blocks.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical degeneracy the closed forms cannot recover from.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace locfim
