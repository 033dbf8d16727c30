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
#include <vector>

#include "pursuit/errors.hpp"
#include "pursuit/matrix.hpp"

namespace pursuit {

namespace detail {

template <real_scalar Real>
Real hypot2(Real a, Real b) {
  return std::sqrt(a * a + b * b);
}

/// Householder reduction of a symmetric matrix to tridiagonal form
/// (diagonal d, subdiagonal e). Eigenvalues only; no vector accumulation.
template <real_scalar Real>
void tridiagonalize(std::vector<Real>& a, int n, std::vector<Real>& d,
                    std::vector<Real>& e) {
  auto at = [&](int i, int j) -> Real& { return a[static_cast<std::size_t>(i) * n + j]; };
  d.assign(n, Real(0));
  e.assign(n, Real(0));
  for (int i = n - 1; i > 0; --i) {
    int l = i - 1;
    Real h = 0, scale = 0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::abs(at(i, k));
      if (scale == Real(0)) {
        e[i] = at(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          at(i, k) /= scale;
          h += at(i, k) * at(i, k);
        }
        Real f = at(i, l);
        Real g = f >= 0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        at(i, l) = f - g;
        f = 0;
        for (int j = 0; j <= l; ++j) {
          g = 0;
          for (int k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
          for (int k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
          e[j] = g / h;
          f += e[j] * at(i, j);
        }
        Real hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = at(i, j);
          e[j] = g = e[j] - hh * f;
          for (int k = 0; k <= j; ++k) {
            at(j, k) -= f * e[k] + g * at(i, k);
          }
        }
      }
    } else {
      e[i] = at(i, l);
    }
    d[i] = h;
  }
  e[0] = 0;
  for (int i = 0; i < n; ++i) d[i] = at(i, i);
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
template <real_scalar Real>
void ql_implicit(std::vector<Real>& d, std::vector<Real>& e, int n) {
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        Real dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<Real>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 50) {
          throw error("symmetric_eigenvalues: QL iteration did not converge");
        }
        Real g = (d[l + 1] - d[l]) / (2 * e[l]);
        Real r = hypot2(g, Real(1));
        g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
        Real s = 1, c = 1, p = 0;
        int i = m - 1;
        for (; i >= l; --i) {
          Real f = s * e[i];
          Real b = c * e[i];
          r = hypot2(f, g);
          e[i + 1] = r;
          if (r == Real(0)) {
            d[i + 1] -= p;
            e[m] = 0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == Real(0) && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0;
      }
    } while (m != l);
  }
}

}  // namespace detail

/// All eigenvalues of a symmetric matrix, ascending. The input must be
/// square and symmetric; symmetry is trusted (Gram matrices by
/// construction), only the shape is checked.
template <real_scalar Real>
std::vector<Real> symmetric_eigenvalues(const basic_matrix<Real>& s) {
  if (s.rows() != s.cols()) {
    throw dimension_error("symmetric_eigenvalues: matrix not square");
  }
  const int n = s.rows();
  if (n == 1) return {s(0, 0)};
  std::vector<Real> a = s.data();
  std::vector<Real> d, e;
  detail::tridiagonalize(a, n, d, e);
  detail::ql_implicit(d, e, n);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace pursuit
