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

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "pursuit/errors.hpp"

namespace pursuit {

/// A strictly increasing set of column indices. All pursuit routines
/// exchange supports in this canonical (sorted, duplicate-free) form.
class index_set {
public:
  index_set() = default;

  index_set(std::initializer_list<int> indices)
      : index_set(std::vector<int>(indices)) {}

  /// Canonicalizes arbitrary input: sorts and rejects duplicates/negatives.
  explicit index_set(std::vector<int> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (!indices_.empty() && indices_.front() < 0) {
      throw dimension_error("index_set: negative index");
    }
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
      throw dimension_error("index_set: duplicate index");
    }
  }

  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  int operator[](std::size_t i) const { return indices_[i]; }

  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  const std::vector<int>& values() const noexcept { return indices_; }

  bool contains(int index) const {
    return std::binary_search(indices_.begin(), indices_.end(), index);
  }

  bool operator==(const index_set& other) const = default;

  /// Set union, preserving the canonical ordering.
  friend index_set set_union(const index_set& a, const index_set& b) {
    std::vector<int> merged;
    merged.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                   std::back_inserter(merged));
    index_set result;
    result.indices_ = std::move(merged);
    return result;
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (i > 0) s += ",";
      s += std::to_string(indices_[i]);
    }
    s += "}";
    return s;
  }

private:
  std::vector<int> indices_;
};

}  // namespace pursuit
