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
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pursuit/errors.hpp"
#include "pursuit/index_set.hpp"
#include "pursuit/matrix.hpp"

namespace pursuit {

/// Relative tolerance below which a residue is treated as zero. The single
/// named constant standing in for exact-arithmetic zero claims; every
/// orthogonality and energy-split check is stated against it.
inline constexpr double residue_zero_rel_tol = 1e-9;

/// Triangular factors are declared rank deficient when the smallest
/// diagonal magnitude falls below this multiple of the largest.
inline constexpr double rank_rel_tol = 1e-10;

template <real_scalar Real>
Real dot(std::span<const Real> a, std::span<const Real> b) {
  Real acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <real_scalar Real>
Real norm2(std::span<const Real> v) {
  Real acc = 0;
  for (Real x : v) acc += x * x;
  return std::sqrt(acc);
}

template <real_scalar Real>
Real norm2(const std::vector<Real>& v) {
  return norm2(std::span<const Real>(v));
}

template <real_scalar Real>
Real dot(const std::vector<Real>& a, const std::vector<Real>& b) {
  return dot(std::span<const Real>(a), std::span<const Real>(b));
}

/// Columns of phi selected by I, in I's ascending order.
template <real_scalar Real>
basic_matrix<Real> column_submatrix(const basic_matrix<Real>& phi,
                                    const index_set& I) {
  if (I.empty()) throw dimension_error("column_submatrix: empty index set");
  if (I[I.size() - 1] >= phi.cols()) {
    throw dimension_error("column_submatrix: index " +
                          std::to_string(I[I.size() - 1]) + " out of range for " +
                          std::to_string(phi.cols()) + " columns");
  }
  basic_matrix<Real> sub(phi.rows(), static_cast<int>(I.size()));
  for (int r = 0; r < phi.rows(); ++r) {
    auto row = phi.row(r);
    for (std::size_t j = 0; j < I.size(); ++j) {
      sub(r, static_cast<int>(j)) = row[static_cast<std::size_t>(I[j])];
    }
  }
  return sub;
}

/// phi^T v: entry i is the correlation of column i with v.
template <real_scalar Real>
std::vector<Real> correlations(const basic_matrix<Real>& phi,
                               std::span<const Real> v) {
  if (static_cast<int>(v.size()) != phi.rows()) {
    throw dimension_error("correlations: vector length " +
                          std::to_string(v.size()) + " != rows " +
                          std::to_string(phi.rows()));
  }
  std::vector<Real> c(phi.cols(), Real(0));
  for (int r = 0; r < phi.rows(); ++r) {
    const Real vr = v[static_cast<std::size_t>(r)];
    auto row = phi.row(r);
    for (int j = 0; j < phi.cols(); ++j) c[j] += row[j] * vr;
  }
  return c;
}

template <real_scalar Real>
std::vector<Real> correlations(const basic_matrix<Real>& phi,
                               const std::vector<Real>& v) {
  return correlations(phi, std::span<const Real>(v));
}

namespace detail {

/// Householder QR of an m x n (m >= rank) matrix held column-major.
/// Factors in place; refuses rank-deficient input per rank_rel_tol.
template <real_scalar Real>
class householder_qr {
public:
  householder_qr(const basic_matrix<Real>& a, const std::string& context)
      : m_(a.rows()), n_(a.cols()), cols_(static_cast<std::size_t>(m_) * n_),
        beta_(n_) {
    for (int c = 0; c < n_; ++c) {
      for (int r = 0; r < m_; ++r) cols_[idx(r, c)] = a(r, c);
    }
    factor(context);
  }

  /// Least-squares solution of min ||A q - y||_2.
  std::vector<Real> solve(std::span<const Real> y) const {
    std::vector<Real> work(y.begin(), y.end());
    apply_qt(work);
    std::vector<Real> q(n_);
    for (int k = n_ - 1; k >= 0; --k) {
      Real acc = work[k];
      for (int j = k + 1; j < n_; ++j) acc -= cols_[idx(k, j)] * q[j];
      q[k] = acc / cols_[idx(k, k)];
    }
    return q;
  }

  double condition_estimate() const noexcept { return cond_; }

private:
  std::size_t idx(int r, int c) const {
    return static_cast<std::size_t>(c) * m_ + r;
  }

  void factor(const std::string& context) {
    if (m_ < n_) {
      throw singular_matrix_error(
          context + ": system has more columns (" + std::to_string(n_) +
              ") than rows (" + std::to_string(m_) + ")",
          std::numeric_limits<double>::infinity());
    }
    diag_.assign(n_, Real(0));
    for (int k = 0; k < n_; ++k) {
      Real* col = cols_.data() + idx(0, k);
      Real sigma = 0;
      for (int r = k; r < m_; ++r) sigma += col[r] * col[r];
      Real norm = std::sqrt(sigma);
      if (norm == Real(0)) {
        beta_[k] = 0;
        diag_[k] = 0;
        continue;
      }
      // v = x - alpha e1 with alpha chosen to avoid cancellation.
      Real alpha = col[k] >= 0 ? -norm : norm;
      Real v0 = col[k] - alpha;
      Real vnorm2 = sigma - col[k] * col[k] + v0 * v0;
      col[k] = v0;
      beta_[k] = vnorm2 > Real(0) ? Real(2) / vnorm2 : Real(0);
      for (int j = k + 1; j < n_; ++j) {
        Real* cj = cols_.data() + idx(0, j);
        Real proj = 0;
        for (int r = k; r < m_; ++r) proj += col[r] * cj[r];
        proj *= beta_[k];
        for (int r = k; r < m_; ++r) cj[r] -= proj * col[r];
      }
      // The reflector occupies the column at and below the diagonal slot.
      diag_[k] = alpha;
    }
    Real dmax = 0, dmin = std::numeric_limits<Real>::infinity();
    for (int k = 0; k < n_; ++k) {
      Real d = std::abs(diag_[k]);
      dmax = std::max(dmax, d);
      dmin = std::min(dmin, d);
    }
    cond_ = dmin > 0 ? static_cast<double>(dmax / dmin)
                     : std::numeric_limits<double>::infinity();
    if (dmin < rank_rel_tol * dmax || dmax == Real(0)) {
      throw singular_matrix_error(
          context + ": rank-deficient system (diagonal ratio " +
              io::format_real(cond_) + ")",
          cond_);
    }
    // Move the stored diagonals into R's slots for back-substitution and
    // keep the reflectors in a separate copy of the strict lower part.
    reflectors_ = cols_;
    for (int k = 0; k < n_; ++k) cols_[idx(k, k)] = diag_[k];
  }

  void apply_qt(std::vector<Real>& y) const {
    for (int k = 0; k < n_; ++k) {
      if (beta_[k] == Real(0)) continue;
      const Real* v = reflectors_.data() + idx(0, k);
      Real proj = 0;
      for (int r = k; r < m_; ++r) proj += v[r] * y[r];
      proj *= beta_[k];
      for (int r = k; r < m_; ++r) y[r] -= proj * v[r];
    }
  }

  int m_;
  int n_;
  std::vector<Real> cols_;
  std::vector<Real> reflectors_;
  std::vector<Real> beta_;
  std::vector<Real> diag_;
  double cond_ = 0;
};

}  // namespace detail

/// Coefficients q minimizing ||A q - y||_2 via Householder QR.
template <real_scalar Real>
std::vector<Real> least_squares_solve(const basic_matrix<Real>& a,
                                      std::span<const Real> y,
                                      const std::string& context = "least_squares_solve") {
  if (static_cast<int>(y.size()) != a.rows()) {
    throw dimension_error(context + ": rhs length " + std::to_string(y.size()) +
                          " != rows " + std::to_string(a.rows()));
  }
  detail::householder_qr<Real> qr(a, context);
  return qr.solve(y);
}

template <real_scalar Real>
std::vector<Real> least_squares_solve(const basic_matrix<Real>& a,
                                      const std::vector<Real>& y,
                                      const std::string& context = "least_squares_solve") {
  return least_squares_solve(a, std::span<const Real>(y), context);
}

/// Orthogonal decomposition of y against span(phi_I).
template <real_scalar Real>
struct projection_result {
  std::vector<Real> coefficients;  // length |I|
  std::vector<Real> projected;     // length m, lies in span(phi_I)
  std::vector<Real> residue;       // y - projected, orthogonal to phi_I
};

template <real_scalar Real>
projection_result<Real> project_and_residue(std::span<const Real> y,
                                            const basic_matrix<Real>& phi,
                                            const index_set& I,
                                            const std::string& context = "project_and_residue") {
  basic_matrix<Real> sub = column_submatrix(phi, I);
  projection_result<Real> out;
  out.coefficients = least_squares_solve(sub, y, context);
  out.projected = sub.apply(out.coefficients);
  out.residue.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out.residue[i] = y[i] - out.projected[i];
  }
  return out;
}

template <real_scalar Real>
projection_result<Real> project_and_residue(const std::vector<Real>& y,
                                            const basic_matrix<Real>& phi,
                                            const index_set& I,
                                            const std::string& context = "project_and_residue") {
  return project_and_residue(std::span<const Real>(y), phi, I, context);
}

}  // namespace pursuit
