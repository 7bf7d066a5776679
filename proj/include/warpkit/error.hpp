// Copyright 2026 The warpkit Authors. All Rights Reserved.
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
#include <utility>
#include <vector>

namespace warpkit {

/// Base class of every error raised by the library. The CLI maps any
/// `Error` to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (negative radius, NaN input).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Array shapes or channel counts that do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or model parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Two destination control points closer than the duplicate threshold.
class DuplicatePointError : public Error {
 public:
  using Error::Error;
};

/// Linear system too ill-conditioned to solve.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Degenerate geometry, e.g. coincident landmarks.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Class label outside [0, M).
class LabelError : public Error {
 public:
  using Error::Error;
};

/// File parsing or writing failure.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Optimizer blow-up; carries the loss trajectory up to the failure.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::vector<double> trajectory)
      : Error(what), trajectory_(std::move(trajectory)) {}

  const std::vector<double>& trajectory() const noexcept { return trajectory_; }

 private:
  std::vector<double> trajectory_;
};

}  // namespace warpkit
