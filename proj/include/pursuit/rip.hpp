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
#include <numeric>
#include <string>
#include <vector>

#include "pursuit/eigen.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/index_set.hpp"
#include "pursuit/linalg.hpp"
#include "pursuit/matrix.hpp"
#include "pursuit/random.hpp"
#include "pursuit/recovery.hpp"

namespace pursuit {

inline constexpr std::uint64_t rip_budget = 1'000'000;

/// Exact isometry constant at sparsity K, with the support attaining it.
struct rip_estimate {
  int k = 0;
  double delta = 0.0;          // max over supports of max(1-lmin, lmax-1)
  index_set witness_support;   // lexicographically smallest attaining support
  double lambda_min = 1.0;     // extremal Gram eigenvalues at the witness
  double lambda_max = 1.0;
};

namespace detail {

template <real_scalar Real>
basic_matrix<Real> gram(const basic_matrix<Real>& phi, const std::vector<int>& support) {
  const int s = static_cast<int>(support.size());
  basic_matrix<Real> g(s, s);
  for (int a = 0; a < s; ++a) {
    for (int b = a; b < s; ++b) {
      Real acc = 0;
      for (int r = 0; r < phi.rows(); ++r) {
        acc += phi(r, support[a]) * phi(r, support[b]);
      }
      g(a, b) = acc;
      g(b, a) = acc;
    }
  }
  return g;
}

}  // namespace detail

/// Exact RIP constant by enumerating every size-K support and taking the
/// worst Gram eigenvalue deviation from 1. The infimum definition and this
/// maximum coincide through the eigenvalue characterization. Enumerating
/// size K alone suffices by monotonicity; callers wanting the defensive
/// sweep over smaller sizes use verify_monotonicity.
template <real_scalar Real>
rip_estimate rip_constant_exact(const basic_matrix<Real>& phi, int k) {
  if (k <= 0) throw domain_error("rip_constant_exact: K must be positive");
  if (k > phi.rows()) {
    throw domain_error("rip_constant_exact: K = " + std::to_string(k) +
                       " exceeds row count " + std::to_string(phi.rows()));
  }
  if (k > phi.cols()) {
    throw domain_error("rip_constant_exact: K exceeds column count");
  }
  const std::uint64_t count = detail::binomial(phi.cols(), k);
  if (count > rip_budget) {
    throw budget_error("rip_constant_exact: C(" + std::to_string(phi.cols()) +
                           "," + std::to_string(k) + ") = " + std::to_string(count) +
                           " exceeds enumeration budget",
                       count);
  }

  rip_estimate best;
  best.k = k;
  best.delta = -1.0;
  std::vector<int> support(k);
  std::iota(support.begin(), support.end(), 0);
  do {
    const auto eigenvalues = symmetric_eigenvalues(detail::gram(phi, support));
    const double lmin = static_cast<double>(eigenvalues.front());
    const double lmax = static_cast<double>(eigenvalues.back());
    const double deviation = std::max(1.0 - lmin, lmax - 1.0);
    if (deviation > best.delta) {
      best.delta = deviation;
      best.witness_support = index_set(std::vector<int>(support));
      best.lambda_min = lmin;
      best.lambda_max = lmax;
    }
  } while (detail::next_combination(support, phi.cols()));
  return best;
}

enum class lemma_id {
  monotonicity,
  near_orthogonality,
  residue_orthogonality,
  projection_bounds,
};

inline std::string to_string(lemma_id id) {
  switch (id) {
    case lemma_id::monotonicity: return "delta_monotonicity";
    case lemma_id::near_orthogonality: return "near_orthogonality";
    case lemma_id::residue_orthogonality: return "residue_orthogonality";
    case lemma_id::projection_bounds: return "projection_bounds";
  }
  return "?";
}

/// Outcome of one executable property check.
struct lemma_report {
  lemma_id id = lemma_id::monotonicity;
  int instances_checked = 0;
  int hypothesis_skipped = 0;  // draws excluded by the property's hypothesis
  double max_violation = -std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  bool passed = false;

  std::string to_line() const {
    return to_string(id) + ": checked=" + std::to_string(instances_checked) +
           " skipped=" + std::to_string(hypothesis_skipped) +
           " max_violation=" + io::format_real(max_violation) +
           " tolerance=" + io::format_real(tolerance) +
           (passed ? " PASS" : " FAIL");
  }
};

/// delta_1 <= delta_2 <= ... <= delta_Kmax, exactly (no tolerance): the
/// enumerations range over nested support families.
template <real_scalar Real>
lemma_report verify_monotonicity(const basic_matrix<Real>& phi, int k_max) {
  lemma_report report;
  report.id = lemma_id::monotonicity;
  report.tolerance = 0.0;
  double previous = 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_max; ++k) {
    const double delta = rip_constant_exact(phi, k).delta;
    if (k > 1) worst = std::max(worst, previous - delta);
    previous = delta;
    ++report.instances_checked;
  }
  report.max_violation = worst;
  report.passed = worst <= report.tolerance;
  return report;
}

namespace detail {

/// Disjoint pair of supports, drawn uniformly.
inline std::pair<index_set, index_set> draw_disjoint_pair(int n, int size_i,
                                                          int size_j,
                                                          random_stream& rng) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  const int total = size_i + size_j;
  for (int i = 0; i < total; ++i) {
    const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> first(pool.begin(), pool.begin() + size_i);
  std::vector<int> second(pool.begin() + size_i, pool.begin() + total);
  return {index_set(std::move(first)), index_set(std::move(second))};
}

}  // namespace detail

/// Near-orthogonality of disjoint column blocks: for random disjoint I, J
/// and random a, b, both |<phi_I a, phi_J b>| <= delta_{|I|+|J|} |a| |b|
/// and |phi_I^T phi_J b| <= delta_{|I|+|J|} |b|, within an absolute slack.
template <real_scalar Real>
lemma_report verify_near_orthogonality(const basic_matrix<Real>& phi, int trials,
                                       std::uint64_t seed, int size_i = 2,
                                       int size_j = 2, double slack = 1e-9) {
  if (size_i + size_j > phi.cols()) {
    throw domain_error("verify_near_orthogonality: |I|+|J| exceeds column count");
  }
  const double delta_sum = rip_constant_exact(phi, size_i + size_j).delta;

  lemma_report report;
  report.id = lemma_id::near_orthogonality;
  report.tolerance = slack;
  random_stream rng(seed);
  for (int t = 0; t < trials; ++t) {
    auto [set_i, set_j] = detail::draw_disjoint_pair(phi.cols(), size_i, size_j, rng);
    std::vector<Real> a(size_i), b(size_j);
    for (auto& v : a) v = static_cast<Real>(rng.next_normal());
    for (auto& v : b) v = static_cast<Real>(rng.next_normal());

    const auto phi_i = column_submatrix(phi, set_i);
    const auto phi_j = column_submatrix(phi, set_j);
    const auto ia = phi_i.apply(a);
    const auto jb = phi_j.apply(b);

    const double inner = std::abs(static_cast<double>(dot(ia, jb)));
    const double cross = static_cast<double>(norm2(correlations(phi_i, jb)));
    const double na = static_cast<double>(norm2(a));
    const double nb = static_cast<double>(norm2(b));

    report.max_violation = std::max(report.max_violation, inner - delta_sum * na * nb);
    report.max_violation = std::max(report.max_violation, cross - delta_sum * nb);
    ++report.instances_checked;
  }
  report.passed = report.max_violation <= slack;
  return report;
}

/// Projection of a vector living in span(phi_I) onto a disjoint block
/// span(phi_J): |y_p| <= q |y| and (1 - q) |y| <= |y_r| <= |y| with
/// q = delta_{|I|+|J|} / (1 - delta_{max(|I|,|J|)}). Draws violating the
/// hypothesis delta < 1 are skipped and counted.
template <real_scalar Real>
lemma_report verify_projection_bounds(const basic_matrix<Real>& phi, int trials,
                                      std::uint64_t seed, int size_i = 2,
                                      int size_j = 2, double slack = 1e-9) {
  if (size_i + size_j > phi.cols()) {
    throw domain_error("verify_projection_bounds: |I|+|J| exceeds column count");
  }
  const double delta_sum = rip_constant_exact(phi, size_i + size_j).delta;
  const double delta_max = rip_constant_exact(phi, std::max(size_i, size_j)).delta;

  lemma_report report;
  report.id = lemma_id::projection_bounds;
  report.tolerance = slack;
  random_stream rng(seed);

  if (delta_sum >= 1.0 || delta_max >= 1.0) {
    // Hypothesis fails globally for this matrix; nothing checkable.
    report.hypothesis_skipped = trials;
    report.passed = true;
    report.max_violation = 0.0;
    return report;
  }
  const double q = delta_sum / (1.0 - delta_max);

  for (int t = 0; t < trials; ++t) {
    auto [set_i, set_j] = detail::draw_disjoint_pair(phi.cols(), size_i, size_j, rng);
    std::vector<Real> a(size_i);
    for (auto& v : a) v = static_cast<Real>(rng.next_normal());
    const auto y = column_submatrix(phi, set_i).apply(a);
    const auto proj = project_and_residue(y, phi, set_j, "verify_projection_bounds");

    const double ny = static_cast<double>(norm2(y));
    const double np = static_cast<double>(norm2(proj.projected));
    const double nr = static_cast<double>(norm2(proj.residue));

    report.max_violation = std::max(report.max_violation, np - q * ny);
    report.max_violation = std::max(report.max_violation, (1.0 - q) * ny - nr);
    report.max_violation = std::max(report.max_violation, nr - ny);
    ++report.instances_checked;
  }
  report.passed = report.max_violation <= slack;
  return report;
}

/// Residue orthogonality: phi_I^T resid(y, phi_I) vanishes to
/// residue_zero_rel_tol * |y| on random full-rank draws.
template <real_scalar Real>
lemma_report verify_residue_orthogonality(const basic_matrix<Real>& phi,
                                          int trials, std::uint64_t seed,
                                          int size_i = 3) {
  lemma_report report;
  report.id = lemma_id::residue_orthogonality;
  random_stream rng(seed);
  double worst_rel = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    auto [set_i, unused] = detail::draw_disjoint_pair(phi.cols(), size_i, 0, rng);
    (void)unused;
    std::vector<Real> y(phi.rows());
    for (auto& v : y) v = static_cast<Real>(rng.next_normal());
    const auto proj = project_and_residue(y, phi, set_i, "verify_residue_orthogonality");
    const auto against = correlations(column_submatrix(phi, set_i), proj.residue);
    double max_abs = 0;
    for (Real v : against) max_abs = std::max(max_abs, std::abs(static_cast<double>(v)));
    const double ny = static_cast<double>(norm2(y));
    worst_rel = std::max(worst_rel, ny > 0 ? max_abs / ny : max_abs);
    ++report.instances_checked;
  }
  report.tolerance = residue_zero_rel_tol;
  report.max_violation = worst_rel;
  report.passed = worst_rel <= residue_zero_rel_tol;
  return report;
}

}  // namespace pursuit
