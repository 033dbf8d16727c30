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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "pursuit/bounds.hpp"
#include "pursuit/generate.hpp"
#include "pursuit/matrix.hpp"
#include "pursuit/random.hpp"
#include "pursuit/recovery.hpp"

namespace pursuit {

/// Pinned exact-recovery criterion: a trial succeeds when
/// ||x_hat - x||_2 <= exact_recovery_rel_tol * ||x||_2.
inline constexpr double exact_recovery_rel_tol = 1e-6;

enum class algorithm_id { sp = 0, omp = 1, l0 = 2 };

inline std::string to_string(algorithm_id a) {
  switch (a) {
    case algorithm_id::sp: return "sp";
    case algorithm_id::omp: return "omp";
    case algorithm_id::l0: return "l0";
  }
  return "?";
}

inline algorithm_id algorithm_from_string(const std::string& s) {
  if (s == "sp") return algorithm_id::sp;
  if (s == "omp") return algorithm_id::omp;
  if (s == "l0") return algorithm_id::l0;
  throw domain_error("unknown algorithm: " + s);
}

enum class experiment_kind { frequency, iterations, noise };

struct experiment_config {
  experiment_kind experiment = experiment_kind::frequency;
  int m = 128;
  int n = 256;
  std::vector<int> k_list;
  int trials = 500;
  signal_model model = signal_model::gaussian;
  model_params params;
  std::vector<signal_model> models;  // iteration experiment sweeps models
  std::vector<algorithm_id> algorithms = {algorithm_id::sp};
  perturbation_kind noise_kind = perturbation_kind::none;
  std::vector<double> sigma_grid;
  std::uint64_t master_seed = 0;
  std::string out_dir;  // empty: CSVs are not written
  int threads = 0;      // 0: PURSUIT_THREADS env, else hardware
  double zero_tolerance = 1e-8;
  bool timing = false;  // measured wall times make CSVs run-dependent

  void validate() const {
    if (m <= 0 || n <= 0) throw domain_error("config: dimensions must be positive");
    if (m > n) throw domain_error("config: compressive regime requires m <= N");
    if (trials < 1) throw domain_error("config: trials must be >= 1");
    if (k_list.empty()) throw domain_error("config: no sparsity levels given");
    for (int k : k_list) {
      if (k <= 0 || k > n) throw domain_error("config: invalid K = " + std::to_string(k));
    }
    if (experiment == experiment_kind::noise) {
      if (noise_kind == perturbation_kind::none) {
        throw domain_error("config: noise experiment needs a perturbation kind");
      }
      if (sigma_grid.empty()) throw domain_error("config: noise experiment needs a sigma grid");
    }
    if (experiment == experiment_kind::iterations && models.empty()) {
      throw domain_error("config: iteration experiment needs signal models");
    }
    if (algorithms.empty()) throw domain_error("config: no algorithms selected");
  }
};

struct trial_record {
  int trial = 0;
  int k = 0;
  algorithm_id alg = algorithm_id::sp;
  std::uint64_t seed = 0;
  bool success = false;
  double rel_error = 0.0;
  int n_it = 0;
  std::int64_t wall_time_us = 0;
  double e_norm = 0.0;
  std::string error_tag;  // diagnostics only; not part of the CSV schema
};

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PURSUIT_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Index-parallel loop with deterministic output: the body writes into
/// slot i only, so the thread count never changes results.
template <class Fn>
void parallel_for(int total, int threads, Fn&& body) {
  threads = std::min(std::max(threads, 1), total > 0 ? total : 1);
  if (threads <= 1) {
    for (int i = 0; i < total; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= total) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace detail {

template <real_scalar Real>
double relative_error(const std::vector<Real>& truth, const std::vector<Real>& estimate) {
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = static_cast<double>(truth[i]) - static_cast<double>(estimate[i]);
    diff += d * d;
    ref += static_cast<double>(truth[i]) * static_cast<double>(truth[i]);
  }
  if (ref == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(diff / ref);
}

/// One Monte-Carlo draw: fresh matrix, fresh signal, optional noise.
struct trial_instance {
  matrix phi;
  sparse_signal<> signal;
  std::vector<double> measured;  // phi * actual signal + noise
  std::vector<double> noise;
  double e_norm = 0.0;  // perturbation level in l2
};

inline trial_instance make_instance(int m, int n, int k, signal_model model,
                                    const model_params& params,
                                    const perturbation_spec& noise,
                                    std::uint64_t seed) {
  trial_instance inst;
  inst.phi = gen_gaussian_matrix(m, n, derive_seed(seed, 1));
  inst.signal = gen_sparse_signal(n, k, model, derive_seed(seed, 2), params);
  const auto perturbed = apply_perturbation(inst.signal, noise, m, derive_seed(seed, 3));
  inst.measured = inst.phi.apply(perturbed.signal);
  for (int i = 0; i < m; ++i) inst.measured[i] += perturbed.noise[i];
  inst.noise = perturbed.noise;
  if (noise.kind == perturbation_kind::measurement) {
    inst.e_norm = norm2(perturbed.noise);
  } else if (noise.kind == perturbation_kind::signal) {
    std::vector<double> tail(perturbed.signal.size());
    for (std::size_t i = 0; i < tail.size(); ++i) {
      tail[i] = perturbed.signal[i] - inst.signal.values[i];
    }
    inst.e_norm = norm2(tail);
  }
  return inst;
}

inline recovery_result<double> run_algorithm(algorithm_id alg, const trial_instance& inst,
                                             int k, double zero_tolerance) {
  switch (alg) {
    case algorithm_id::sp: {
      recovery_options opts;
      opts.sparsity = k;
      opts.rule = stopping_rule::residue_increase;
      opts.zero_tolerance = zero_tolerance;
      return sp_recover(inst.phi, inst.measured, opts);
    }
    case algorithm_id::omp:
      return omp_recover(inst.phi, inst.measured, k, zero_tolerance);
    case algorithm_id::l0:
      return l0_bruteforce(inst.phi, inst.measured, k, zero_tolerance);
  }
  throw domain_error("run_algorithm: unknown algorithm");
}

inline trial_record run_trial(int trial, int k, algorithm_id alg, std::uint64_t seed,
                              const experiment_config& cfg, signal_model model,
                              const perturbation_spec& noise) {
  trial_record rec;
  rec.trial = trial;
  rec.k = k;
  rec.alg = alg;
  rec.seed = seed;
  const trial_instance inst =
      make_instance(cfg.m, cfg.n, k, model, cfg.params, noise, seed);
  rec.e_norm = inst.e_norm;
  const auto started = std::chrono::steady_clock::now();
  try {
    const auto result = run_algorithm(alg, inst, k, cfg.zero_tolerance);
    rec.rel_error = relative_error(inst.signal.values, result.estimate);
    rec.n_it = result.iterations;
  } catch (const error& e) {
    // A degenerate draw is a failed trial, never a failed campaign.
    rec.rel_error = 1.0;
    rec.n_it = 0;
    rec.error_tag = e.what();
  }
  if (cfg.timing) {
    rec.wall_time_us = std::chrono::duration_cast<std::chrono::microseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
  }
  rec.success = rec.rel_error <= exact_recovery_rel_tol;
  return rec;
}

}  // namespace detail

inline constexpr const char* trials_csv_header =
    "trial,K,alg,seed,success,rel_error,n_it,wall_time_us,e_norm";

inline std::string to_csv_row(const trial_record& r) {
  return std::to_string(r.trial) + "," + std::to_string(r.k) + "," +
         to_string(r.alg) + "," + std::to_string(r.seed) + "," +
         (r.success ? "1" : "0") + "," + io::format_real(r.rel_error) + "," +
         std::to_string(r.n_it) + "," + std::to_string(r.wall_time_us) + "," +
         io::format_real(r.e_norm);
}

struct frequency_summary_row {
  int k = 0;
  algorithm_id alg = algorithm_id::sp;
  double success_rate = 0.0;
  double mean_n_it = 0.0;
  double mean_rel_error = 0.0;
};

struct frequency_result {
  std::vector<trial_record> trials;
  std::vector<frequency_summary_row> summary;

  double success_rate(int k, algorithm_id alg) const {
    for (const auto& row : summary) {
      if (row.k == k && row.alg == alg) return row.success_rate;
    }
    throw domain_error("frequency_result: no such (K, algorithm) cell");
  }
};

struct iteration_summary_row {
  signal_model model = signal_model::zero_one;
  int k = 0;
  double mean_n_it = 0.0;  // over successful recoveries
  double success_rate = 0.0;
};

struct iteration_result {
  std::vector<std::pair<signal_model, std::vector<trial_record>>> trials;
  std::vector<iteration_summary_row> summary;

  double mean_iterations(signal_model model, int k) const {
    for (const auto& row : summary) {
      if (row.model == model && row.k == k) return row.mean_n_it;
    }
    throw domain_error("iteration_result: no such (model, K) cell");
  }
};

struct noise_summary_row {
  perturbation_kind kind = perturbation_kind::measurement;
  double sigma = 0.0;
  double mean_e_norm = 0.0;
  double mean_distortion = 0.0;
};

struct linear_fit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least-squares line through (x_i, y_i).
inline linear_fit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  linear_fit fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

struct noise_result {
  std::vector<std::pair<double, std::vector<trial_record>>> trials;  // by sigma
  std::vector<noise_summary_row> summary;
  linear_fit distortion_fit;  // mean_distortion against mean_e_norm
};

namespace detail {

inline void write_lines(const std::string& path, const std::string& header,
                        const std::vector<std::string>& rows) {
  std::ofstream os(path);
  if (!os) throw error("cannot open for writing: " + path);
  os << header << "\n";
  for (const auto& row : rows) os << row << "\n";
}

inline void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw error("cannot create output directory " + dir + ": " + ec.message());
}

}  // namespace detail

/// Empirical frequency of exact reconstruction over fresh (matrix, signal)
/// draws for every (K, algorithm) cell. Writes frequency_trials.csv and
/// frequency_summary.csv when an output directory is configured.
inline frequency_result run_frequency_experiment(const experiment_config& cfg) {
  cfg.validate();
  const int threads = resolve_threads(cfg.threads);
  frequency_result result;
  const perturbation_spec noise{cfg.noise_kind,
                                cfg.sigma_grid.empty() ? 0.0 : cfg.sigma_grid.front()};

  for (int k : cfg.k_list) {
    for (algorithm_id alg : cfg.algorithms) {
      std::vector<trial_record> records(cfg.trials);
      parallel_for(cfg.trials, threads, [&](int trial) {
        const std::uint64_t seed =
            derive_seed(cfg.master_seed, static_cast<std::uint64_t>(k),
                        static_cast<std::uint64_t>(alg), static_cast<std::uint64_t>(trial));
        records[trial] = detail::run_trial(trial, k, alg, seed, cfg, cfg.model, noise);
      });
      frequency_summary_row row;
      row.k = k;
      row.alg = alg;
      double successes = 0, its = 0, err = 0;
      for (const auto& rec : records) {
        successes += rec.success ? 1.0 : 0.0;
        its += rec.n_it;
        err += rec.rel_error;
      }
      row.success_rate = successes / cfg.trials;
      row.mean_n_it = its / cfg.trials;
      row.mean_rel_error = err / cfg.trials;
      result.summary.push_back(row);
      result.trials.insert(result.trials.end(), records.begin(), records.end());
    }
  }

  if (!cfg.out_dir.empty()) {
    detail::ensure_out_dir(cfg.out_dir);
    std::vector<std::string> rows;
    rows.reserve(result.trials.size());
    for (const auto& rec : result.trials) rows.push_back(to_csv_row(rec));
    detail::write_lines(cfg.out_dir + "/frequency_trials.csv", trials_csv_header, rows);
    rows.clear();
    for (const auto& row : result.summary) {
      rows.push_back(std::to_string(row.k) + "," + to_string(row.alg) + "," +
                     io::format_real(row.success_rate) + "," +
                     io::format_real(row.mean_n_it) + "," +
                     io::format_real(row.mean_rel_error));
    }
    detail::write_lines(cfg.out_dir + "/frequency_summary.csv",
                        "K,alg,success_rate,mean_n_it,mean_rel_error", rows);
  }
  return result;
}

/// Average iteration count of subspace pursuit per sparsity level and
/// signal model, over successful recoveries.
inline iteration_result run_iteration_experiment(const experiment_config& cfg) {
  cfg.validate();
  const int threads = resolve_threads(cfg.threads);
  iteration_result result;

  for (signal_model model : cfg.models) {
    std::vector<trial_record> all_records;
    for (int k : cfg.k_list) {
      std::vector<trial_record> records(cfg.trials);
      parallel_for(cfg.trials, threads, [&](int trial) {
        const std::uint64_t seed = derive_seed(
            cfg.master_seed, static_cast<std::uint64_t>(k),
            16 + static_cast<std::uint64_t>(model), static_cast<std::uint64_t>(trial));
        records[trial] = detail::run_trial(trial, k, algorithm_id::sp, seed, cfg, model,
                                           perturbation_spec{});
      });
      iteration_summary_row row;
      row.model = model;
      row.k = k;
      double successes = 0, its = 0;
      for (const auto& rec : records) {
        if (rec.success) {
          successes += 1.0;
          its += rec.n_it;
        }
      }
      row.success_rate = successes / cfg.trials;
      row.mean_n_it = successes > 0 ? its / successes : 0.0;
      result.summary.push_back(row);
      all_records.insert(all_records.end(), records.begin(), records.end());
    }
    result.trials.emplace_back(model, std::move(all_records));
  }

  if (!cfg.out_dir.empty()) {
    detail::ensure_out_dir(cfg.out_dir);
    for (const auto& [model, records] : result.trials) {
      std::vector<std::string> rows;
      rows.reserve(records.size());
      for (const auto& rec : records) rows.push_back(to_csv_row(rec));
      detail::write_lines(cfg.out_dir + "/iterations_trials_" + to_string(model) + ".csv",
                          trials_csv_header, rows);
    }
    std::vector<std::string> rows;
    for (const auto& row : result.summary) {
      rows.push_back(to_string(row.model) + "," + std::to_string(row.k) + "," +
                     io::format_real(row.mean_n_it) + "," +
                     io::format_real(row.success_rate));
    }
    detail::write_lines(cfg.out_dir + "/iterations_summary.csv",
                        "model,K,mean_n_it,success_rate", rows);
  }
  return result;
}

/// Mean recovery distortion across a perturbation-level grid, with the
/// linear fit of distortion against the realized perturbation norm.
inline noise_result run_noise_experiment(const experiment_config& cfg) {
  cfg.validate();
  const int threads = resolve_threads(cfg.threads);
  const int k = cfg.k_list.front();
  noise_result result;

  for (std::size_t sigma_idx = 0; sigma_idx < cfg.sigma_grid.size(); ++sigma_idx) {
    const double sigma = cfg.sigma_grid[sigma_idx];
    const perturbation_spec noise{cfg.noise_kind, sigma};
    std::vector<trial_record> records(cfg.trials);
    std::vector<double> distortions(cfg.trials, 0.0);
    parallel_for(cfg.trials, threads, [&](int trial) {
      const std::uint64_t seed =
          derive_seed(cfg.master_seed, static_cast<std::uint64_t>(k),
                      32 + static_cast<std::uint64_t>(sigma_idx),
                      static_cast<std::uint64_t>(trial));
      trial_record rec = detail::run_trial(trial, k, algorithm_id::sp, seed, cfg,
                                           cfg.model, noise);
      // run_trial records relative error; the noise experiment reports
      // absolute distortion, so recompute the norm it is relative to.
      records[trial] = rec;
    });
    // Absolute distortion per trial: rel_error * ||x||, with ||x||
    // reconstructed deterministically from the trial's seed.
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const std::uint64_t seed = records[trial].seed;
      const auto signal = gen_sparse_signal(cfg.n, k, cfg.model,
                                            derive_seed(seed, 2), cfg.params);
      distortions[trial] = records[trial].rel_error * norm2(signal.values);
    }

    noise_summary_row row;
    row.kind = cfg.noise_kind;
    row.sigma = sigma;
    double e_sum = 0, d_sum = 0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
      e_sum += records[trial].e_norm;
      d_sum += distortions[trial];
    }
    row.mean_e_norm = e_sum / cfg.trials;
    row.mean_distortion = d_sum / cfg.trials;
    result.summary.push_back(row);
    result.trials.emplace_back(sigma, std::move(records));
  }

  std::vector<double> xs, ys;
  for (const auto& row : result.summary) {
    xs.push_back(row.mean_e_norm);
    ys.push_back(row.mean_distortion);
  }
  result.distortion_fit = fit_line(xs, ys);

  if (!cfg.out_dir.empty()) {
    detail::ensure_out_dir(cfg.out_dir);
    for (const auto& [sigma, records] : result.trials) {
      std::vector<std::string> rows;
      rows.reserve(records.size());
      for (const auto& rec : records) rows.push_back(to_csv_row(rec));
      detail::write_lines(cfg.out_dir + "/noise_trials_sigma" + io::format_real(sigma) + ".csv",
                          trials_csv_header, rows);
    }
    std::vector<std::string> rows;
    for (const auto& row : result.summary) {
      rows.push_back(to_string(row.kind) + "," + io::format_real(row.sigma) + "," +
                     io::format_real(row.mean_e_norm) + "," +
                     io::format_real(row.mean_distortion));
    }
    detail::write_lines(cfg.out_dir + "/noise_summary.csv",
                        "kind,sigma,mean_e_norm,mean_distortion", rows);
  }
  return result;
}

/// Parses "lo..hi:step" (inclusive), "lo..hi" (step 1) or a comma list.
inline std::vector<int> parse_k_range(const std::string& text) {
  std::vector<int> out;
  const auto parse_int = [](const std::string& s) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(s, &pos);
      if (pos != s.size()) throw domain_error("K range: bad integer '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      throw domain_error("K range: bad integer '" + s + "'");
    }
  };
  const std::size_t dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = parse_int(text.substr(0, dots));
    std::string rest = text.substr(dots + 2);
    int step = 1;
    const std::size_t colon = rest.find(':');
    if (colon != std::string::npos) {
      step = parse_int(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    const int hi = parse_int(rest);
    if (step <= 0 || hi < lo) throw domain_error("K range: bad bounds in '" + text + "'");
    for (int k = lo; k <= hi; k += step) out.push_back(k);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!token.empty()) out.push_back(parse_int(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw domain_error("K range: empty specification '" + text + "'");
  return out;
}

}  // namespace pursuit
