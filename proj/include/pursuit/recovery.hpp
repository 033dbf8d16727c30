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
#include <cstdint>
#include <ostream>
#include <numeric>
#include <string>
#include <vector>

#include "pursuit/errors.hpp"
#include "pursuit/index_set.hpp"
#include "pursuit/linalg.hpp"
#include "pursuit/matrix.hpp"

namespace pursuit {

/// Iteration stopping rules for subspace pursuit.
///
/// residue_increase: quit as soon as an iteration fails to strictly shrink
/// the residue norm, reverting to the previous support (a stalled support
/// is a fixed point of the refinement and cannot improve later); the rule
/// also stops once the residue is below zero_tolerance * ||y||.
/// residue_zero: quit only when the residue norm falls below
/// zero_tolerance * ||y|| or the iteration cap is reached; a transient
/// increase is tolerated.
enum class stopping_rule { residue_increase, residue_zero };

enum class termination_reason { residue_zero, residue_increased, max_iterations };

inline std::string to_string(termination_reason r) {
  switch (r) {
    case termination_reason::residue_zero: return "residue_zero";
    case termination_reason::residue_increased: return "residue_increased";
    case termination_reason::max_iterations: return "max_iterations";
  }
  return "?";
}

struct recovery_options {
  int sparsity = 1;
  stopping_rule rule = stopping_rule::residue_increase;
  int max_iterations = 0;       // 0 -> max(sparsity, 100)
  double zero_tolerance = 1e-8; // relative to ||y||_2
  std::ostream* diagnostics = nullptr;  // warnings (soft limits) go here

  int effective_max_iterations() const {
    return max_iterations > 0 ? max_iterations : std::max(sparsity, 100);
  }
};

template <real_scalar Real = double>
struct recovery_result {
  std::vector<Real> estimate;       // length N, zero outside support
  index_set support;                // size <= sparsity parameter
  int iterations = 0;               // executed iteration bodies; init is 0
  std::vector<Real> residue_norms;  // per accepted iteration, [0] = init;
                                    // a final rejected value is appended
                                    // when termination == residue_increased
  termination_reason termination = termination_reason::residue_zero;
};

/// Indices of the K largest-magnitude entries, ties broken toward the
/// lowest index, result ascending.
template <real_scalar Real>
index_set top_k_indices(const std::vector<Real>& values, int k) {
  if (k <= 0) throw dimension_error("top_k_indices: K must be positive");
  if (k > static_cast<int>(values.size())) {
    throw dimension_error("top_k_indices: K = " + std::to_string(k) +
                          " exceeds length " + std::to_string(values.size()));
  }
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](int a, int b) {
                      const Real ma = std::abs(values[a]);
                      const Real mb = std::abs(values[b]);
                      if (ma != mb) return ma > mb;
                      return a < b;
                    });
  order.resize(k);
  return index_set(std::move(order));
}

namespace detail {

template <real_scalar Real>
void scatter_estimate(recovery_result<Real>& out, int n, const index_set& support,
                      const std::vector<Real>& coefficients) {
  out.estimate.assign(n, Real(0));
  for (std::size_t j = 0; j < support.size(); ++j) {
    out.estimate[support[j]] = coefficients[j];
  }
  out.support = support;
}

/// Candidate union for subspace pursuit. Keeps the previous support and
/// adds correlation-ranked candidates until the target size is reached;
/// the target is capped at m so the projection stays overdetermined.
template <real_scalar Real>
index_set merge_candidates(const index_set& previous,
                           const std::vector<Real>& corr, int k, int m) {
  const int target = std::min(static_cast<int>(previous.size()) + k, m);
  index_set ranked = top_k_indices(corr, k);
  index_set merged = set_union(previous, ranked);
  if (static_cast<int>(merged.size()) <= target) return merged;
  // Oversized union (only possible when 2K > m): drop the weakest new
  // candidates, ranked by |correlation| with low-index ties first.
  std::vector<int> extras;
  for (int idx : ranked) {
    if (!previous.contains(idx)) extras.push_back(idx);
  }
  std::sort(extras.begin(), extras.end(), [&](int a, int b) {
    const Real ma = std::abs(corr[a]);
    const Real mb = std::abs(corr[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  std::vector<int> kept(previous.begin(), previous.end());
  for (int idx : extras) {
    if (static_cast<int>(kept.size()) >= target) break;
    kept.push_back(idx);
  }
  return index_set(std::move(kept));
}

}  // namespace detail

/// Subspace pursuit. Initializes the size-K support from the measurement
/// correlations, then refines it: each iteration unions K new
/// correlation-ranked candidates of the current residue into the support,
/// projects y onto the union, keeps the K largest-magnitude coefficients,
/// and recomputes the residue. The estimate is the least-squares solution
/// on the final support.
template <real_scalar Real>
recovery_result<Real> sp_recover(const basic_matrix<Real>& phi,
                                 const std::vector<Real>& y,
                                 const recovery_options& opts) {
  const int m = phi.rows();
  const int n = phi.cols();
  const int k = opts.sparsity;
  if (static_cast<int>(y.size()) != m) {
    throw dimension_error("sp_recover: measurement length != rows");
  }
  if (k <= 0 || k > n) throw dimension_error("sp_recover: invalid sparsity");
  if (k > m) {
    throw dimension_error("sp_recover: sparsity " + std::to_string(k) +
                          " exceeds measurement dimension " + std::to_string(m));
  }
  if (2 * k > m && opts.diagnostics) {
    *opts.diagnostics << "warning: sparsity " << k << " above recommended limit m/2 = "
                      << m / 2 << "; candidate unions will be capped at m\n";
  }

  const Real y_norm = norm2(y);
  const Real zero_level = static_cast<Real>(opts.zero_tolerance) * y_norm;
  const int max_iter = opts.effective_max_iterations();

  recovery_result<Real> out;

  index_set support = top_k_indices(correlations(phi, y), k);
  projection_result<Real> proj =
      project_and_residue(y, phi, support, "sp_recover: initialization");
  Real residue_norm = norm2(proj.residue);
  out.residue_norms.push_back(residue_norm);

  if (residue_norm <= zero_level) {
    detail::scatter_estimate(out, n, support, proj.coefficients);
    out.iterations = 0;
    out.termination = termination_reason::residue_zero;
    return out;
  }

  out.termination = termination_reason::max_iterations;
  for (int iter = 1; iter <= max_iter; ++iter) {
    const std::vector<Real> corr = correlations(phi, proj.residue);
    const index_set merged = detail::merge_candidates(support, corr, k, m);

    std::vector<Real> union_coeffs;
    try {
      union_coeffs = least_squares_solve(column_submatrix(phi, merged), y,
                                         "sp_recover: union projection");
    } catch (const singular_matrix_error& e) {
      throw singular_matrix_error(
          "sp_recover: iteration " + std::to_string(iter) + ": " + e.what(),
          e.condition_estimate());
    }

    const index_set local = top_k_indices(union_coeffs, std::min(k, static_cast<int>(merged.size())));
    std::vector<int> pruned;
    pruned.reserve(local.size());
    for (int pos : local) pruned.push_back(merged[static_cast<std::size_t>(pos)]);
    index_set next_support(std::move(pruned));

    projection_result<Real> next_proj;
    try {
      next_proj = project_and_residue(y, phi, next_support, "sp_recover: pruned projection");
    } catch (const singular_matrix_error& e) {
      throw singular_matrix_error(
          "sp_recover: iteration " + std::to_string(iter) + ": " + e.what(),
          e.condition_estimate());
    }
    const Real next_norm = norm2(next_proj.residue);

    // A non-strict decrease means the refinement reached a fixed point: the
    // same (or an equivalent) support keeps being re-selected and no later
    // iteration can improve on it, so equality terminates like an increase.
    if (opts.rule == stopping_rule::residue_increase && next_norm >= residue_norm) {
      // Reverted: the rejected value is recorded but is not part of the
      // accepted trajectory; the estimate is recomputed on the previous
      // support.
      out.residue_norms.push_back(next_norm);
      out.iterations = iter;
      out.termination = termination_reason::residue_increased;
      detail::scatter_estimate(out, n, support, proj.coefficients);
      return out;
    }

    support = std::move(next_support);
    proj = std::move(next_proj);
    residue_norm = next_norm;
    out.residue_norms.push_back(residue_norm);

    if (residue_norm <= zero_level) {
      out.iterations = iter;
      out.termination = termination_reason::residue_zero;
      break;
    }
    out.iterations = iter;
  }

  detail::scatter_estimate(out, n, support, proj.coefficients);
  return out;
}

/// Approximately sparse recovery: runs subspace pursuit at sparsity 2K
/// under the residue_increase rule and returns the 2K-support estimate.
template <real_scalar Real>
recovery_result<Real> sp_recover_approx(const basic_matrix<Real>& phi,
                                        const std::vector<Real>& y, int k,
                                        recovery_options opts = {}) {
  if (k <= 0) throw dimension_error("sp_recover_approx: K must be positive");
  if (4 * k > phi.rows() && opts.diagnostics) {
    *opts.diagnostics << "warning: 4K = " << 4 * k << " exceeds m = " << phi.rows()
                      << "; the doubled-sparsity run degrades gracefully\n";
  }
  opts.sparsity = 2 * k;
  opts.rule = stopping_rule::residue_increase;
  return sp_recover(phi, y, opts);
}

/// Orthogonal matching pursuit baseline: always runs through K iterations,
/// adding per iteration the unselected index whose column best correlates
/// with the current residue (lowest index on ties). Indices are never
/// removed.
template <real_scalar Real>
recovery_result<Real> omp_recover(const basic_matrix<Real>& phi,
                                  const std::vector<Real>& y, int k,
                                  double zero_tolerance = 1e-8) {
  const int m = phi.rows();
  const int n = phi.cols();
  if (static_cast<int>(y.size()) != m) {
    throw dimension_error("omp_recover: measurement length != rows");
  }
  if (k <= 0 || k > n) throw dimension_error("omp_recover: invalid sparsity");
  if (k > m) {
    throw dimension_error("omp_recover: sparsity exceeds measurement dimension");
  }

  const Real y_norm = norm2(y);
  recovery_result<Real> out;
  out.residue_norms.push_back(y_norm);

  std::vector<int> chosen;
  std::vector<char> in_support(n, 0);
  std::vector<Real> residue = y;
  std::vector<Real> coeffs;
  index_set support;

  for (int iter = 1; iter <= k; ++iter) {
    const std::vector<Real> corr = correlations(phi, residue);
    int best = -1;
    Real best_mag = Real(-1);
    for (int j = 0; j < n; ++j) {
      if (in_support[j]) continue;
      const Real mag = std::abs(corr[j]);
      if (mag > best_mag) {
        best_mag = mag;
        best = j;
      }
    }
    chosen.push_back(best);
    in_support[best] = 1;
    support = index_set(chosen);

    projection_result<Real> proj;
    try {
      proj = project_and_residue(y, phi, support, "omp_recover");
    } catch (const singular_matrix_error& e) {
      throw singular_matrix_error(
          "omp_recover: iteration " + std::to_string(iter) + ": " + e.what(),
          e.condition_estimate());
    }
    residue = std::move(proj.residue);
    coeffs = std::move(proj.coefficients);
    out.residue_norms.push_back(norm2(residue));
    out.iterations = iter;
  }

  detail::scatter_estimate(out, n, support, coeffs);
  out.termination = norm2(residue) <= static_cast<Real>(zero_tolerance) * y_norm
                        ? termination_reason::residue_zero
                        : termination_reason::max_iterations;
  return out;
}

namespace detail {

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    if (result > (std::uint64_t(1) << 60)) return result;  // saturate; only the guard cares
  }
  return result;
}

/// Advances a size-k combination over {0..n-1} to its lexicographic
/// successor; returns false after the last one.
inline bool next_combination(std::vector<int>& comb, int n) {
  const int k = static_cast<int>(comb.size());
  int i = k - 1;
  while (i >= 0 && comb[i] == n - k + i) --i;
  if (i < 0) return false;
  ++comb[i];
  for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
  return true;
}

}  // namespace detail

inline constexpr std::uint64_t l0_budget = 10'000'000;

/// Exhaustive l0 oracle for small instances: searches supports of size
/// 0..K in order of increasing size, lexicographically within a size, and
/// returns the first whose least-squares residue is below
/// zero_tolerance * ||y||. If none qualifies, returns the support with the
/// globally minimal residue norm, flagged max_iterations. Rank-deficient
/// supports are skipped; their span equals that of an enumerated subset.
template <real_scalar Real>
recovery_result<Real> l0_bruteforce(const basic_matrix<Real>& phi,
                                    const std::vector<Real>& y, int k,
                                    double zero_tolerance = 1e-8) {
  const int m = phi.rows();
  const int n = phi.cols();
  if (static_cast<int>(y.size()) != m) {
    throw dimension_error("l0_bruteforce: measurement length != rows");
  }
  if (k <= 0 || k > n) throw dimension_error("l0_bruteforce: invalid sparsity");
  const std::uint64_t budget = detail::binomial(n, k);
  if (budget > l0_budget) {
    throw budget_error("l0_bruteforce: C(" + std::to_string(n) + "," +
                           std::to_string(k) + ") = " + std::to_string(budget) +
                           " exceeds enumeration budget",
                       budget);
  }

  const Real y_norm = norm2(y);
  const Real zero_level = static_cast<Real>(zero_tolerance) * y_norm;

  recovery_result<Real> out;
  out.estimate.assign(n, Real(0));
  out.residue_norms.push_back(y_norm);

  // Size-0 support: the zero estimate.
  if (y_norm <= zero_level) {
    out.termination = termination_reason::residue_zero;
    return out;
  }

  Real best_norm = y_norm;
  index_set best_support;
  std::vector<Real> best_coeffs;
  int evaluated = 0;

  for (int size = 1; size <= k; ++size) {
    std::vector<int> comb(size);
    std::iota(comb.begin(), comb.end(), 0);
    do {
      ++evaluated;
      auto support = index_set(std::vector<int>(comb));
      projection_result<Real> proj;
      try {
        proj = project_and_residue(y, phi, support, "l0_bruteforce");
      } catch (const singular_matrix_error&) {
        continue;  // span covered by a smaller enumerated subset
      }
      const Real r = norm2(proj.residue);
      if (r <= zero_level) {
        detail::scatter_estimate(out, n, support, proj.coefficients);
        out.iterations = evaluated;
        out.residue_norms.push_back(r);
        out.termination = termination_reason::residue_zero;
        return out;
      }
      if (r < best_norm) {
        best_norm = r;
        best_support = support;
        best_coeffs = proj.coefficients;
      }
    } while (detail::next_combination(comb, n));
  }

  if (!best_support.empty()) {
    detail::scatter_estimate(out, n, best_support, best_coeffs);
  }
  out.iterations = evaluated;
  out.residue_norms.push_back(best_norm);
  out.termination = termination_reason::max_iterations;
  return out;
}

}  // namespace pursuit
