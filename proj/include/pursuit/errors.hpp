// Copyright 2026 The pursuit authors
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
#include <stdexcept>
#include <string>

namespace pursuit {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Shape or index mismatch between operands.
class dimension_error : public error {
public:
  explicit dimension_error(const std::string& what) : error(what) {}
};

/// Argument outside the mathematical domain of an operation.
class domain_error : public error {
public:
  explicit domain_error(const std::string& what) : error(what) {}
};

/// A least-squares system was numerically rank deficient. Carries the
/// condition estimate (max/min diagonal of the triangular factor) that
/// triggered the rejection; the solver never regularizes silently.
class singular_matrix_error : public error {
public:
  singular_matrix_error(const std::string& what, double condition_estimate)
      : error(what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const noexcept { return condition_estimate_; }

private:
  double condition_estimate_;
};

/// A combinatorial enumeration would exceed its configured budget.
class budget_error : public error {
public:
  budget_error(const std::string& what, std::uint64_t requested)
      : error(what), requested_(requested) {}

  std::uint64_t requested() const noexcept { return requested_; }

private:
  std::uint64_t requested_;
};

}  // namespace pursuit
