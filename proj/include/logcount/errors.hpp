// Copyright 2026 The logcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace logcount {

// Bad sizes, out-of-range flags, t > n for the bounded baseline, etc.
class InvalidArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Reciprocal or division against a series with vanishing constant term.
class NonInvertibleSeriesError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// log of a series whose constant term is not 1, or exp of one that is not 0.
class NormalizationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Sensitivity request for parameters whose column norm diverges (alpha <= 0).
class DivergentSensitivityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Circle integrand evaluated at the singular endpoint.
class SingularPointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Stream input outside the [0, input_bound] domain the calibration assumes.
class SensitivityViolationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Asymptotic expansion evaluated below its domain (needs ln ln m > 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Quadrature could not reach the requested tolerance. Carries the best
// available estimate so callers can decide whether to proceed.
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, double best_value, double error_estimate)
      : std::runtime_error(what), best_value(best_value), error_estimate(error_estimate) {}

  double best_value;
  double error_estimate;
};

}  // namespace logcount
