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

#include <cmath>
#include <concepts>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pursuit/errors.hpp"

namespace pursuit {

template <class T>
concept real_scalar = std::floating_point<T>;

/// Dense real matrix, row-major. Entries are validated finite on
/// construction; the compressive-regime requirement (rows <= cols) applies
/// to matrices used as sampling operators and is checked at those entry
/// points, not here, so that tall column submatrices remain representable.
template <real_scalar Real = double>
class basic_matrix {
public:
  basic_matrix() = default;

  basic_matrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {
    if (rows <= 0 || cols <= 0) {
      throw dimension_error("matrix: dimensions must be positive");
    }
  }

  basic_matrix(int rows, int cols, std::vector<Real> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows <= 0 || cols <= 0) {
      throw dimension_error("matrix: dimensions must be positive");
    }
    if (data_.size() != static_cast<std::size_t>(rows) * cols) {
      throw dimension_error("matrix: entry count does not match dimensions");
    }
    check_finite();
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  Real& operator()(int r, int c) {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  Real operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  std::span<const Real> row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r) * cols_,
            static_cast<std::size_t>(cols_)};
  }

  std::vector<Real> column(int c) const {
    if (c < 0 || c >= cols_) throw dimension_error("matrix: column out of range");
    std::vector<Real> out(rows_);
    for (int r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  const std::vector<Real>& data() const noexcept { return data_; }
  std::vector<Real>& data() noexcept { return data_; }

  /// y = A x
  std::vector<Real> apply(std::span<const Real> x) const {
    if (static_cast<int>(x.size()) != cols_) {
      throw dimension_error("matrix apply: vector length != cols");
    }
    std::vector<Real> y(rows_, Real(0));
    for (int r = 0; r < rows_; ++r) {
      const Real* row_ptr = data_.data() + static_cast<std::size_t>(r) * cols_;
      Real acc = 0;
      for (int c = 0; c < cols_; ++c) acc += row_ptr[c] * x[c];
      y[r] = acc;
    }
    return y;
  }

  void check_finite() const {
    for (Real v : data_) {
      if (!std::isfinite(v)) throw domain_error("matrix: non-finite entry");
    }
  }

  bool operator==(const basic_matrix&) const = default;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Real> data_;
};

using matrix = basic_matrix<double>;

namespace io {

/// Formats one value at 17 significant digits (round-trip exact for double).
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Text fixture format: optional leading '#' comment lines, then a line
/// "m N", then m lines of N space-separated decimals. Vectors are stored
/// as n x 1 matrices.
template <real_scalar Real>
void save_matrix(std::ostream& os, const basic_matrix<Real>& a,
                 const std::string& header_comment = "") {
  if (!header_comment.empty()) os << "# " << header_comment << "\n";
  os << a.rows() << " " << a.cols() << "\n";
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) {
      if (c > 0) os << " ";
      os << format_real(static_cast<double>(a(r, c)));
    }
    os << "\n";
  }
}

template <real_scalar Real>
void save_matrix(const std::string& path, const basic_matrix<Real>& a,
                 const std::string& header_comment = "") {
  std::ofstream os(path);
  if (!os) throw error("cannot open for writing: " + path);
  save_matrix(os, a, header_comment);
}

template <real_scalar Real = double>
basic_matrix<Real> load_matrix(std::istream& is, const std::string& name = "<stream>") {
  std::string line;
  int rows = 0, cols = 0;
  while (std::getline(is, line)) {
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream dims(line);
    if (!(dims >> rows >> cols)) {
      throw error("matrix file " + name + ": malformed dimension line");
    }
    break;
  }
  if (rows <= 0 || cols <= 0) {
    throw error("matrix file " + name + ": missing or invalid dimensions");
  }
  std::vector<Real> entries;
  entries.reserve(static_cast<std::size_t>(rows) * cols);
  double v;
  while (entries.size() < static_cast<std::size_t>(rows) * cols && is >> v) {
    entries.push_back(static_cast<Real>(v));
  }
  if (entries.size() != static_cast<std::size_t>(rows) * cols) {
    throw error("matrix file " + name + ": truncated entries");
  }
  return basic_matrix<Real>(rows, cols, std::move(entries));
}

template <real_scalar Real = double>
basic_matrix<Real> load_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw error("cannot open: " + path);
  return load_matrix<Real>(is, path);
}

template <real_scalar Real>
void save_vector(const std::string& path, const std::vector<Real>& v,
                 const std::string& header_comment = "") {
  basic_matrix<Real> column(static_cast<int>(v.size()), 1, v);
  save_matrix(path, column, header_comment);
}

template <real_scalar Real = double>
std::vector<Real> load_vector(const std::string& path) {
  basic_matrix<Real> m = load_matrix<Real>(path);
  if (m.cols() != 1 && m.rows() != 1) {
    throw error("vector file " + path + ": expected a single row or column");
  }
  return m.data();
}

}  // namespace io
}  // namespace pursuit
