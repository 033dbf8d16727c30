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
#include <limits>

#include "pursuit/errors.hpp"
#include "pursuit/generate.hpp"

namespace pursuit {

/// Per-iteration contraction factor of the residual signal norm:
/// c_K = 2 d (1 + d) / (1 - d)^3 evaluated at d = delta_3K. Recovery is
/// guaranteed while c_K / (1 - 2 delta_3K) < 1.
inline double compute_c_k(double delta_3k) {
  if (delta_3k < 0.0 || delta_3k >= 1.0) {
    throw domain_error("compute_c_k: delta must lie in [0, 1)");
  }
  const double d = delta_3k;
  const double denom = (1.0 - d) * (1.0 - d) * (1.0 - d);
  return 2.0 * d * (1.0 + d) / denom;
}

/// Noisy-recovery distortion factor:
/// c'_K = (1 + d + d^2) / (d (1 - d)). Singular at d = 0, so zero is
/// rejected rather than mapped to infinity.
inline double compute_c_prime_k(double delta_3k) {
  if (delta_3k <= 0.0 || delta_3k >= 1.0) {
    throw domain_error("compute_c_prime_k: delta must lie in (0, 1)");
  }
  const double d = delta_3k;
  return (1.0 + d + d * d) / (d * (1.0 - d));
}

/// Ratio of the smallest nonzero magnitude to the l2 norm; drives the
/// logarithmic iteration bound. Zero-one signals give exactly 1/sqrt(K).
template <real_scalar Real>
double compute_rho_min(const sparse_signal<Real>& x) {
  double min_mag = std::numeric_limits<double>::infinity();
  double energy = 0.0;
  for (int idx : x.support) {
    const double v = std::abs(static_cast<double>(x.values[idx]));
    if (v > 0.0) min_mag = std::min(min_mag, v);
    energy += v * v;
  }
  if (energy == 0.0 || !std::isfinite(min_mag)) {
    throw domain_error("compute_rho_min: signal has no nonzero entries");
  }
  return min_mag / std::sqrt(energy);
}

/// Iteration cap from the magnitude-ratio contraction argument:
/// ceil( log(1/rho_min) / log(1/c_K) + 1 ). The log ratio is
/// base independent. This is the bound the conditional recovery checks
/// assert against; see iteration_bound_sparsity for the companion cap.
inline int iteration_bound(double rho_min, double c_k, int k) {
  if (!(c_k > 0.0) || c_k >= 1.0) {
    throw domain_error("iteration_bound: c_K must lie in (0, 1) for contraction");
  }
  if (!(rho_min > 0.0) || rho_min > 1.0) {
    throw domain_error("iteration_bound: rho_min must lie in (0, 1]");
  }
  (void)k;
  const double ratio_term = std::log(1.0 / rho_min) / std::log(1.0 / c_k) + 1.0;
  return static_cast<int>(std::ceil(ratio_term - 1e-12));
}

/// Sparsity-driven iteration cap, ceil( 1.5 K / ln(1/c_K) ); the constant
/// 1.5 closes only in natural log (log 3 + 1 - log 2 < 1.5), hence the
/// pinned base. Valid alongside iteration_bound; for rapidly decaying
/// signals this one is the smaller of the two.
inline int iteration_bound_sparsity(double c_k, int k) {
  if (!(c_k > 0.0) || c_k >= 1.0) {
    throw domain_error("iteration_bound_sparsity: c_K must lie in (0, 1)");
  }
  if (k <= 0) throw domain_error("iteration_bound_sparsity: K must be positive");
  return static_cast<int>(std::ceil(1.5 * k / std::log(1.0 / c_k) - 1e-12));
}

/// Bundle of the certification constants for one instance.
struct theory_bounds {
  double delta_3k = 0.0;
  double c_k = 0.0;
  double c_prime_k = std::numeric_limits<double>::infinity();
  double rho_min = 1.0;
  int iteration_bound = 1;
};

template <real_scalar Real>
theory_bounds make_theory_bounds(double delta_3k, const sparse_signal<Real>& x) {
  theory_bounds b;
  b.delta_3k = delta_3k;
  b.c_k = compute_c_k(delta_3k);
  b.c_prime_k = delta_3k > 0.0 ? compute_c_prime_k(delta_3k)
                               : std::numeric_limits<double>::infinity();
  b.rho_min = compute_rho_min(x);
  b.iteration_bound = pursuit::iteration_bound(b.rho_min, b.c_k, static_cast<int>(x.support.size()));
  return b;
}

}  // namespace pursuit
