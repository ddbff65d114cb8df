// Copyright 2026 The Duel Authors.
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

#ifndef DUEL_ERROR_HPP_
#define DUEL_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace duel {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct RangeViolation : Error {
  RangeViolation(int a_in, int b_in, double value)
      : Error("preference entry (" + std::to_string(a_in) + "," +
              std::to_string(b_in) + ") = " + std::to_string(value) +
              " outside [-1, 1]"),
        a(a_in),
        b(b_in) {}
  int a;
  int b;
};

struct SkewSymmetryViolation : Error {
  SkewSymmetryViolation(int a_in, int b_in)
      : Error("entries (" + std::to_string(a_in) + "," + std::to_string(b_in) +
              ") and (" + std::to_string(b_in) + "," + std::to_string(a_in) +
              ") do not negate each other"),
        a(a_in),
        b(b_in) {}
  int a;
  int b;
};

struct InvalidDistribution : Error {
  using Error::Error;
};

struct EmptyMixture : Error {
  using Error::Error;
};

struct NegativeWeight : Error {
  using Error::Error;
};

struct DuplicatePolicy : Error {
  using Error::Error;
};

struct NonConvergence : Error {
  NonConvergence(const std::string& what, std::int64_t iterations_in)
      : Error(what + " (after " + std::to_string(iterations_in) +
              " iterations)"),
        iterations(iterations_in) {}
  std::int64_t iterations;
};

struct BadParams : Error {
  using Error::Error;
};

struct ClassTooLarge : Error {
  using Error::Error;
};

struct HorizonExceeded : Error {
  using Error::Error;
};

struct ProbabilityUnderflow : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace duel

#endif  // DUEL_ERROR_HPP_
