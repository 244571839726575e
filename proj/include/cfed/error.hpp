// Copyright 2026 The cfed Authors
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
#include <utility>

namespace cfed {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration value is out of its domain. `path()` names the offending
/// field in dotted form (e.g. "scenario.num_csps").
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// K > F * tau_p: no assignment can satisfy the one-federation-per-UE and
/// pilot-capacity constraints simultaneously.
class StructuralInfeasibility : public Error {
 public:
  using Error::Error;
};

/// Matrix or vector dimensions disagree with the problem they belong to.
class ShapeError : public Error {
 public:
  using Error::Error;
};

}  // namespace cfed
