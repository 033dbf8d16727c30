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

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pursuit/bench.hpp"
#include "pursuit/bounds.hpp"
#include "pursuit/generate.hpp"
#include "pursuit/linalg.hpp"
#include "pursuit/matrix.hpp"
#include "pursuit/recovery.hpp"
#include "pursuit/rip.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_runtime = 2;

struct recover_args {
  std::string matrix_path;
  std::string measurement_path;
  int k = 1;
  bool approx = false;
  std::string rule = "increase";
  double zero_tol = 1e-8;
  int max_iter = 0;
  std::string out_path;
};

int cmd_recover(const recover_args& args) {
  const pursuit::matrix phi = pursuit::io::load_matrix(args.matrix_path);
  const std::vector<double> y = pursuit::io::load_vector(args.measurement_path);
  if (phi.rows() > phi.cols()) {
    throw pursuit::domain_error("sampling matrix must satisfy m <= N");
  }
  if (args.k > phi.rows() / 2) {
    std::cerr << "warning: K = " << args.k << " exceeds the recommended limit m/2 = "
              << phi.rows() / 2 << "\n";
  }

  pursuit::recovery_options opts;
  opts.sparsity = args.k;
  opts.rule = args.rule == "zero" ? pursuit::stopping_rule::residue_zero
                                  : pursuit::stopping_rule::residue_increase;
  opts.zero_tolerance = args.zero_tol;
  opts.max_iterations = args.max_iter;
  opts.diagnostics = &std::cerr;

  const auto result = args.approx
                          ? pursuit::sp_recover_approx(phi, y, args.k, opts)
                          : pursuit::sp_recover(phi, y, opts);

  std::cout << "m=" << phi.rows() << " N=" << phi.cols() << " K=" << args.k
            << (args.approx ? " (run at 2K)" : "") << "\n";
  std::cout << "support: " << result.support.to_string() << "\n";
  std::cout << "coefficients:";
  for (int idx : result.support) {
    std::cout << " " << idx << ":" << pursuit::io::format_real(result.estimate[idx]);
  }
  std::cout << "\n";
  std::cout << "iterations: " << result.iterations << "\n";
  std::cout << "termination: " << pursuit::to_string(result.termination) << "\n";
  std::cout << "residue_norms:";
  for (double r : result.residue_norms) std::cout << " " << pursuit::io::format_real(r);
  std::cout << "\n";

  if (!args.out_path.empty()) {
    pursuit::io::save_vector(args.out_path, result.estimate,
                             "estimate K=" + std::to_string(args.k));
  }
  return exit_ok;
}

int cmd_rip(const std::string& matrix_path, int k_max) {
  const pursuit::matrix phi = pursuit::io::load_matrix(matrix_path);
  for (int k = 1; k <= k_max; ++k) {
    const auto estimate = pursuit::rip_constant_exact(phi, k);
    std::cout << k << " " << pursuit::io::format_real(estimate.delta) << " "
              << estimate.witness_support.to_string() << "\n";
  }
  return exit_ok;
}

struct lemma_args {
  std::string matrix_path;
  int m = 10;
  int n = 14;
  int trials = 500;
  std::uint64_t seed = 1;
};

int cmd_verify_lemmas(const lemma_args& args) {
  pursuit::matrix phi(1, 1);
  if (args.matrix_path.empty()) {
    // A generated matrix gets unit columns so the projection-bound
    // hypothesis (isometry constant below 1) can hold at desk scale; a
    // user-supplied matrix is taken as-is, scaling included.
    phi = pursuit::gen_gaussian_matrix(args.m, args.n, args.seed);
    for (int c = 0; c < phi.cols(); ++c) {
      const double norm = pursuit::norm2(phi.column(c));
      for (int r = 0; r < phi.rows(); ++r) phi(r, c) /= norm;
    }
  } else {
    phi = pursuit::io::load_matrix(args.matrix_path);
  }
  const auto reports = {
      pursuit::verify_monotonicity(phi, 3),
      pursuit::verify_near_orthogonality(phi, args.trials, pursuit::derive_seed(args.seed, 2)),
      pursuit::verify_residue_orthogonality(phi, args.trials, pursuit::derive_seed(args.seed, 3)),
      pursuit::verify_projection_bounds(phi, args.trials, pursuit::derive_seed(args.seed, 4),
                                        1, 1),
  };
  bool all_passed = true;
  for (const auto& report : reports) {
    std::cout << report.to_line() << "\n";
    all_passed = all_passed && report.passed;
  }
  return all_passed ? exit_ok : exit_runtime;
}

std::vector<pursuit::algorithm_id> parse_algorithms(const std::string& list) {
  std::vector<pursuit::algorithm_id> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    const std::string token =
        list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!token.empty()) out.push_back(pursuit::algorithm_from_string(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw pursuit::domain_error("no algorithms given");
  return out;
}

std::vector<pursuit::signal_model> parse_models(const std::string& list) {
  std::vector<pursuit::signal_model> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    const std::string token =
        list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!token.empty()) out.push_back(pursuit::signal_model_from_string(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw pursuit::domain_error("no signal models given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pursuit - greedy sparse-signal recovery and benchmarks"};
  app.require_subcommand(1);
  app.set_config("--config", "", "plain-text key=value configuration file");
  app.fallthrough();

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads for benchmarks (default: PURSUIT_THREADS or hardware)");

  // recover
  recover_args rec;
  auto* recover = app.add_subcommand("recover", "recover a sparse signal from one measurement");
  recover->add_option("--matrix", rec.matrix_path, "sampling matrix file")->required();
  recover->add_option("--measurement", rec.measurement_path, "measurement vector file")->required();
  recover->add_option("-k,--sparsity", rec.k, "target sparsity K")->required();
  recover->add_flag("--approx", rec.approx, "approximately sparse mode (runs at 2K)");
  recover->add_option("--rule", rec.rule, "stopping rule: increase|zero")
      ->check(CLI::IsMember({"increase", "zero"}));
  recover->add_option("--zero-tol", rec.zero_tol, "relative zero-residue tolerance");
  recover->add_option("--max-iter", rec.max_iter, "iteration cap (0: max(K, 100))");
  recover->add_option("--out", rec.out_path, "write the estimate to this vector file");

  // rip
  std::string rip_matrix;
  int rip_k = 1;
  auto* rip = app.add_subcommand("rip", "exact isometry constants by support enumeration");
  rip->add_option("--matrix", rip_matrix, "matrix file")->required();
  rip->add_option("-k,--sparsity", rip_k, "compute delta_k for k = 1..K")->required();

  // verify-lemmas
  lemma_args lem;
  auto* lemmas = app.add_subcommand("verify-lemmas", "run the executable property verifiers");
  lemmas->add_option("--matrix", lem.matrix_path, "matrix file (default: seeded Gaussian)");
  lemmas->add_option("--m", lem.m, "rows of the generated matrix");
  lemmas->add_option("--n", lem.n, "columns of the generated matrix");
  lemmas->add_option("--trials", lem.trials, "random trials per verifier");
  lemmas->add_option("--seed", lem.seed, "master seed");

  // shared bench options
  pursuit::experiment_config freq_cfg, iter_cfg, noise_cfg;
  std::string freq_k = "10..60:5", iter_k = "5,10,20,40";
  std::string freq_signal = "gaussian", noise_signal = "zero_one";
  std::string freq_algs = "sp,omp";
  std::string iter_models = "zero_one,exponential";
  std::string noise_kind = "measurement";
  std::string noise_sigmas = "0.01,0.02,0.05,0.1,0.2";
  int noise_k = 10;

  auto* freq = app.add_subcommand("bench-frequency", "empirical frequency of exact reconstruction");
  freq->add_option("--m", freq_cfg.m, "measurements");
  freq->add_option("--n", freq_cfg.n, "signal length");
  freq->add_option("--k", freq_k, "sparsity sweep, lo..hi:step or comma list");
  freq->add_option("--trials", freq_cfg.trials, "trials per (K, algorithm)");
  freq->add_option("--signal", freq_signal, "gaussian|zero_one|power_law|exponential");
  freq->add_option("--p", freq_cfg.params.p, "decay rate for decaying models");
  freq->add_option("--cx", freq_cfg.params.c_x, "envelope scale for decaying models");
  freq->add_option("--alg", freq_algs, "comma list of sp,omp,l0");
  freq->add_option("--seed", freq_cfg.master_seed, "master seed");
  freq->add_option("--out", freq_cfg.out_dir, "output directory for CSVs")->required();
  freq->add_flag("--timing", freq_cfg.timing, "record wall times (CSVs become run-dependent)");

  auto* iters = app.add_subcommand("bench-iterations", "mean iteration count vs sparsity");
  iters->add_option("--m", iter_cfg.m, "measurements");
  iters->add_option("--n", iter_cfg.n, "signal length");
  iters->add_option("--k", iter_k, "sparsity sweep");
  iters->add_option("--trials", iter_cfg.trials, "trials per (model, K)");
  iters->add_option("--models", iter_models, "comma list of signal models");
  iters->add_option("--p", iter_cfg.params.p, "decay rate for decaying models");
  iters->add_option("--cx", iter_cfg.params.c_x, "envelope scale");
  iters->add_option("--seed", iter_cfg.master_seed, "master seed");
  iters->add_option("--out", iter_cfg.out_dir, "output directory for CSVs")->required();
  iters->add_option("--zero-tol", iter_cfg.zero_tolerance,
                    "relative zero-residue tolerance; 0 stops purely on the "
                    "first non-improving iteration, so every executed "
                    "refinement is counted");
  iters->add_flag("--timing", iter_cfg.timing, "record wall times");

  auto* noise = app.add_subcommand("bench-noise", "mean recovery distortion vs perturbation level");
  noise->add_option("--m", noise_cfg.m, "measurements");
  noise->add_option("--n", noise_cfg.n, "signal length");
  noise->add_option("--k", noise_k, "sparsity level");
  noise->add_option("--trials", noise_cfg.trials, "trials per perturbation level");
  noise->add_option("--signal", noise_signal, "signal model");
  noise->add_option("--kind", noise_kind, "perturbation kind: measurement|signal")
      ->check(CLI::IsMember({"measurement", "signal"}));
  noise->add_option("--sigma", noise_sigmas, "comma list of perturbation levels");
  noise->add_option("--seed", noise_cfg.master_seed, "master seed");
  noise->add_option("--out", noise_cfg.out_dir, "output directory for CSVs")->required();
  noise->add_flag("--timing", noise_cfg.timing, "record wall times");

  CLI11_PARSE(app, argc, argv);

  try {
    if (recover->parsed()) return cmd_recover(rec);
    if (rip->parsed()) return cmd_rip(rip_matrix, rip_k);
    if (lemmas->parsed()) return cmd_verify_lemmas(lem);

    if (freq->parsed()) {
      freq_cfg.experiment = pursuit::experiment_kind::frequency;
      freq_cfg.k_list = pursuit::parse_k_range(freq_k);
      freq_cfg.model = pursuit::signal_model_from_string(freq_signal);
      freq_cfg.algorithms = parse_algorithms(freq_algs);
      freq_cfg.threads = threads;
      const auto result = pursuit::run_frequency_experiment(freq_cfg);
      for (const auto& row : result.summary) {
        std::cout << "K=" << row.k << " alg=" << pursuit::to_string(row.alg)
                  << " success_rate=" << pursuit::io::format_real(row.success_rate)
                  << " mean_n_it=" << pursuit::io::format_real(row.mean_n_it) << "\n";
      }
      std::cout << "wrote " << freq_cfg.out_dir << "/frequency_{trials,summary}.csv\n";
      return exit_ok;
    }

    if (iters->parsed()) {
      iter_cfg.experiment = pursuit::experiment_kind::iterations;
      iter_cfg.k_list = pursuit::parse_k_range(iter_k);
      iter_cfg.models = parse_models(iter_models);
      iter_cfg.trials = iters->count("--trials") ? iter_cfg.trials : 200;
      if (!iters->count("--zero-tol")) iter_cfg.zero_tolerance = 0.0;
      iter_cfg.threads = threads;
      const auto result = pursuit::run_iteration_experiment(iter_cfg);
      for (const auto& row : result.summary) {
        std::cout << "model=" << pursuit::to_string(row.model) << " K=" << row.k
                  << " mean_n_it=" << pursuit::io::format_real(row.mean_n_it)
                  << " success_rate=" << pursuit::io::format_real(row.success_rate) << "\n";
      }
      std::cout << "wrote " << iter_cfg.out_dir << "/iterations_*.csv\n";
      return exit_ok;
    }

    if (noise->parsed()) {
      noise_cfg.experiment = pursuit::experiment_kind::noise;
      noise_cfg.k_list = {noise_k};
      noise_cfg.model = pursuit::signal_model_from_string(noise_signal);
      noise_cfg.noise_kind = noise_kind == "signal" ? pursuit::perturbation_kind::signal
                                                    : pursuit::perturbation_kind::measurement;
      noise_cfg.sigma_grid.clear();
      std::size_t start = 0;
      while (start <= noise_sigmas.size()) {
        const std::size_t comma = noise_sigmas.find(',', start);
        const std::string token = noise_sigmas.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!token.empty()) noise_cfg.sigma_grid.push_back(std::stod(token));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      noise_cfg.threads = threads;
      const auto result = pursuit::run_noise_experiment(noise_cfg);
      for (const auto& row : result.summary) {
        std::cout << "sigma=" << pursuit::io::format_real(row.sigma)
                  << " mean_e_norm=" << pursuit::io::format_real(row.mean_e_norm)
                  << " mean_distortion=" << pursuit::io::format_real(row.mean_distortion)
                  << "\n";
      }
      std::cout << "fit: slope=" << pursuit::io::format_real(result.distortion_fit.slope)
                << " r_squared=" << pursuit::io::format_real(result.distortion_fit.r_squared)
                << "\n";
      std::cout << "wrote " << noise_cfg.out_dir << "/noise_*.csv\n";
      return exit_ok;
    }
  } catch (const pursuit::singular_matrix_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_runtime;
  } catch (const pursuit::budget_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_runtime;
  } catch (const pursuit::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const pursuit::dimension_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const pursuit::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_runtime;
  }
  return exit_ok;
}
