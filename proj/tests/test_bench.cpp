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

#include <catch2/catch.hpp>

#include <cstdlib>
#include <string>
#include <vector>

#include "pursuit/bench.hpp"

using pursuit::algorithm_id;
using pursuit::experiment_config;
using pursuit::experiment_kind;
using pursuit::signal_model;

namespace {

experiment_config small_frequency_config() {
  experiment_config cfg;
  cfg.experiment = experiment_kind::frequency;
  cfg.m = 16;
  cfg.n = 32;
  cfg.k_list = {2, 4};
  cfg.trials = 20;
  cfg.model = signal_model::gaussian;
  cfg.algorithms = {algorithm_id::sp, algorithm_id::omp};
  cfg.master_seed = 5;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST_CASE("K-range parsing", "[bench]") {
  CHECK(pursuit::parse_k_range("10..60:5") ==
        std::vector<int>{10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60});
  CHECK(pursuit::parse_k_range("3..5") == std::vector<int>{3, 4, 5});
  CHECK(pursuit::parse_k_range("5,10,20,40") == std::vector<int>{5, 10, 20, 40});
  CHECK(pursuit::parse_k_range("7") == std::vector<int>{7});
  CHECK_THROWS_AS(pursuit::parse_k_range("10..5"), pursuit::domain_error);
  CHECK_THROWS_AS(pursuit::parse_k_range("1..9:0"), pursuit::domain_error);
  CHECK_THROWS_AS(pursuit::parse_k_range(""), pursuit::domain_error);
  CHECK_THROWS_AS(pursuit::parse_k_range("abc"), pursuit::domain_error);
}

TEST_CASE("frequency results are identical across thread counts", "[bench]") {
  auto cfg = small_frequency_config();
  cfg.threads = 1;
  const auto serial = pursuit::run_frequency_experiment(cfg);
  cfg.threads = 4;
  const auto parallel = pursuit::run_frequency_experiment(cfg);

  REQUIRE(serial.trials.size() == parallel.trials.size());
  for (std::size_t i = 0; i < serial.trials.size(); ++i) {
    CHECK(pursuit::to_csv_row(serial.trials[i]) ==
          pursuit::to_csv_row(parallel.trials[i]));
  }
}

TEST_CASE("trial records are self-consistent", "[bench]") {
  const auto result = pursuit::run_frequency_experiment(small_frequency_config());
  REQUIRE(result.trials.size() == 2 * 2 * 20);
  for (const auto& rec : result.trials) {
    CHECK(rec.success == (rec.rel_error <= pursuit::exact_recovery_rel_tol));
    CHECK(rec.wall_time_us == 0);  // timing off by default, CSVs reproducible
    CHECK(rec.seed == pursuit::derive_seed(5, rec.k,
                                           static_cast<std::uint64_t>(rec.alg),
                                           rec.trial));
  }
  // Well below the critical sparsity recovery is near-certain even at this
  // toy scale (Gaussian signals can still draw a negligible coefficient).
  CHECK(result.success_rate(2, algorithm_id::sp) >= 0.9);
}

TEST_CASE("single-trial single-K run", "[bench]") {
  experiment_config cfg;
  cfg.m = 16;
  cfg.n = 32;
  cfg.k_list = {1};
  cfg.trials = 1;
  cfg.algorithms = {algorithm_id::sp};
  cfg.master_seed = 99;
  cfg.threads = 1;
  const auto result = pursuit::run_frequency_experiment(cfg);
  REQUIRE(result.trials.size() == 1);
  CHECK(result.trials.front().success);
}

TEST_CASE("success rate does not grow with K", "[bench]") {
  experiment_config cfg;
  cfg.m = 16;
  cfg.n = 32;
  cfg.k_list = {2, 8};
  cfg.trials = 50;
  cfg.algorithms = {algorithm_id::sp};
  cfg.master_seed = 7;
  cfg.threads = 2;
  const auto result = pursuit::run_frequency_experiment(cfg);
  CHECK(result.success_rate(2, algorithm_id::sp) >=
        result.success_rate(8, algorithm_id::sp));
}

TEST_CASE("solver failures are recorded, not fatal", "[bench]") {
  experiment_config cfg;
  cfg.m = 16;
  cfg.n = 256;  // C(256, 8) blows the l0 budget on every trial
  cfg.k_list = {8};
  cfg.trials = 5;
  cfg.algorithms = {algorithm_id::l0};
  cfg.master_seed = 3;
  cfg.threads = 1;
  const auto result = pursuit::run_frequency_experiment(cfg);
  REQUIRE(result.trials.size() == 5);
  for (const auto& rec : result.trials) {
    CHECK_FALSE(rec.success);
    CHECK_FALSE(rec.error_tag.empty());
  }
  CHECK(result.success_rate(8, algorithm_id::l0) == 0.0);
}

TEST_CASE("iteration experiment", "[bench]") {
  experiment_config cfg;
  cfg.experiment = experiment_kind::iterations;
  cfg.m = 32;
  cfg.n = 64;
  cfg.k_list = {1, 3};
  cfg.trials = 50;
  cfg.models = {signal_model::zero_one};
  cfg.master_seed = 21;
  cfg.threads = 2;
  cfg.zero_tolerance = 1e-12;
  const auto result = pursuit::run_iteration_experiment(cfg);

  // A single spike is found at initialization or in one refinement.
  CHECK(result.mean_iterations(signal_model::zero_one, 1) <= 1.0);
  for (const auto& row : result.summary) {
    CHECK(row.success_rate == 1.0);
  }
}

TEST_CASE("noise experiment distortion grows with the noise level", "[bench]") {
  experiment_config cfg;
  cfg.experiment = experiment_kind::noise;
  cfg.m = 32;
  cfg.n = 64;
  cfg.k_list = {3};
  cfg.trials = 50;
  cfg.model = signal_model::zero_one;
  cfg.noise_kind = pursuit::perturbation_kind::measurement;
  cfg.sigma_grid = {0.0, 0.05, 0.1};
  cfg.master_seed = 4;
  cfg.threads = 2;
  const auto result = pursuit::run_noise_experiment(cfg);

  REQUIRE(result.summary.size() == 3);
  // sigma = 0 reduces to noiseless exact recovery.
  CHECK(result.summary[0].mean_distortion <=
        pursuit::exact_recovery_rel_tol * std::sqrt(3.0));
  CHECK(result.summary[1].mean_distortion < result.summary[2].mean_distortion);
  CHECK(result.distortion_fit.slope > 0.0);
}

TEST_CASE("thread resolution", "[bench]") {
  CHECK(pursuit::resolve_threads(3) == 3);
  setenv("PURSUIT_THREADS", "2", 1);
  CHECK(pursuit::resolve_threads(0) == 2);
  unsetenv("PURSUIT_THREADS");
  CHECK(pursuit::resolve_threads(0) >= 1);
}

TEST_CASE("linear fit", "[bench]") {
  const auto fit = pursuit::fit_line({1, 2, 3, 4}, {2.1, 3.9, 6.1, 7.9});
  CHECK(fit.slope == Approx(1.96).margin(0.05));
  CHECK(fit.r_squared > 0.99);
}
