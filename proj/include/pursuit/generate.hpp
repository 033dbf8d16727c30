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
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "pursuit/errors.hpp"
#include "pursuit/index_set.hpp"
#include "pursuit/matrix.hpp"
#include "pursuit/random.hpp"

namespace pursuit {

/// Sparse-signal generation models. The decaying models realize their
/// magnitude envelope with equality: the i-th largest magnitude is exactly
/// c_x * i^-p (power law) or c_x * e^(-p*i) (exponential), i = 1..K,
/// placed at random support positions with random signs.
enum class signal_model { gaussian, zero_one, power_law, exponential };

inline std::string to_string(signal_model m) {
  switch (m) {
    case signal_model::gaussian: return "gaussian";
    case signal_model::zero_one: return "zero_one";
    case signal_model::power_law: return "power_law";
    case signal_model::exponential: return "exponential";
  }
  return "?";
}

inline signal_model signal_model_from_string(const std::string& s) {
  if (s == "gaussian") return signal_model::gaussian;
  if (s == "zero_one" || s == "zero-one") return signal_model::zero_one;
  if (s == "power_law" || s == "power-law") return signal_model::power_law;
  if (s == "exponential") return signal_model::exponential;
  throw domain_error("unknown signal model: " + s);
}

struct model_params {
  double p = 1.0;    // decay rate for power_law / exponential
  double c_x = 1.0;  // envelope scale
};

template <real_scalar Real = double>
struct sparse_signal {
  int length = 0;
  std::vector<Real> values;  // dense, zero outside support
  index_set support;
  signal_model model = signal_model::gaussian;
  model_params params;
};

/// m x N sampling matrix with i.i.d. N(0, 1/m) entries, so that columns
/// have near-unit norm and RIP certification is meaningful without
/// rescaling. Recovery itself is scale invariant.
template <real_scalar Real = double>
basic_matrix<Real> gen_gaussian_matrix(int m, int n, std::uint64_t seed) {
  if (m <= 0 || n <= 0) throw domain_error("gen_gaussian_matrix: dimensions must be positive");
  if (m > n) {
    throw domain_error("gen_gaussian_matrix: compressive regime requires m <= N (got " +
                       std::to_string(m) + " x " + std::to_string(n) + ")");
  }
  random_stream rng(seed);
  basic_matrix<Real> phi(m, n);
  const Real scale = Real(1) / std::sqrt(static_cast<Real>(m));
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) {
      phi(r, c) = static_cast<Real>(rng.next_normal()) * scale;
    }
  }
  return phi;
}

namespace detail {

/// Uniform size-K subset of {0..N-1} via a Fisher-Yates prefix, sorted.
inline index_set draw_support(int n, int k, random_stream& rng) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return index_set(std::move(pool));
}

}  // namespace detail

template <real_scalar Real = double>
sparse_signal<Real> gen_sparse_signal(int n, int k, signal_model model,
                                      std::uint64_t seed,
                                      model_params params = {}) {
  if (k <= 0 || n <= 0) throw domain_error("gen_sparse_signal: N and K must be positive");
  if (k > n) {
    throw domain_error("gen_sparse_signal: K = " + std::to_string(k) +
                       " exceeds N = " + std::to_string(n));
  }
  random_stream rng(seed);
  sparse_signal<Real> sig;
  sig.length = n;
  sig.model = model;
  sig.params = params;
  sig.support = detail::draw_support(n, k, rng);
  sig.values.assign(n, Real(0));

  switch (model) {
    case signal_model::gaussian:
      for (int idx : sig.support) sig.values[idx] = static_cast<Real>(rng.next_normal());
      break;
    case signal_model::zero_one:
      for (int idx : sig.support) sig.values[idx] = Real(1);
      break;
    case signal_model::power_law:
    case signal_model::exponential: {
      // Magnitude of rank i (1-based): the envelope held with equality.
      std::vector<Real> magnitudes(k);
      for (int i = 0; i < k; ++i) {
        const double rank = i + 1;
        magnitudes[i] = static_cast<Real>(
            model == signal_model::power_law
                ? params.c_x * std::pow(rank, -params.p)
                : params.c_x * std::exp(-params.p * rank));
      }
      // Random rank-to-position assignment within the support.
      std::vector<int> slots(sig.support.begin(), sig.support.end());
      for (int i = 0; i < k - 1; ++i) {
        const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k - i)));
        std::swap(slots[i], slots[j]);
      }
      for (int i = 0; i < k; ++i) {
        sig.values[slots[i]] = magnitudes[i] * static_cast<Real>(rng.next_sign());
      }
      break;
    }
  }
  return sig;
}

/// Signals share the matrix text format (as an N x 1 column) with a
/// one-line header comment recording how they were drawn.
template <real_scalar Real>
void save_signal(const std::string& path, const sparse_signal<Real>& sig,
                 std::uint64_t seed) {
  std::string header = "model=" + to_string(sig.model) + " seed=" + std::to_string(seed) +
                       " K=" + std::to_string(sig.support.size());
  if (sig.model == signal_model::power_law || sig.model == signal_model::exponential) {
    header += " p=" + io::format_real(sig.params.p) + " cx=" + io::format_real(sig.params.c_x);
  }
  io::save_vector(path, sig.values, header);
}

enum class perturbation_kind { none, signal, measurement };

inline std::string to_string(perturbation_kind k) {
  switch (k) {
    case perturbation_kind::none: return "none";
    case perturbation_kind::signal: return "signal";
    case perturbation_kind::measurement: return "measurement";
  }
  return "?";
}

struct perturbation_spec {
  perturbation_kind kind = perturbation_kind::none;
  double sigma = 0.0;
};

template <real_scalar Real = double>
struct perturbed_instance {
  std::vector<Real> signal;  // length N; support entries always untouched
  std::vector<Real> noise;   // length m; zero unless kind == measurement
};

/// Applies one of the two perturbation models: "signal" replaces the
/// off-support entries with N(0, sigma^2) draws, "measurement" returns an
/// additive N(0, sigma^2 I_m) noise vector. m is the measurement dimension
/// for the noise vector.
template <real_scalar Real = double>
perturbed_instance<Real> apply_perturbation(const sparse_signal<Real>& x,
                                            const perturbation_spec& spec,
                                            int m, std::uint64_t seed) {
  if (spec.sigma < 0) throw domain_error("apply_perturbation: sigma must be >= 0");
  if (m <= 0) throw domain_error("apply_perturbation: m must be positive");
  perturbed_instance<Real> out;
  out.signal = x.values;
  out.noise.assign(m, Real(0));
  if (spec.kind == perturbation_kind::none || spec.sigma == 0.0) return out;

  random_stream rng(seed);
  if (spec.kind == perturbation_kind::signal) {
    for (int i = 0; i < x.length; ++i) {
      if (!x.support.contains(i)) {
        out.signal[i] = static_cast<Real>(rng.next_normal() * spec.sigma);
      }
    }
  } else {
    for (int i = 0; i < m; ++i) {
      out.noise[i] = static_cast<Real>(rng.next_normal() * spec.sigma);
    }
  }
  return out;
}

}  // namespace pursuit
