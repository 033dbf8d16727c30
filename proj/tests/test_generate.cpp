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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

#include "pursuit/bounds.hpp"
#include "pursuit/generate.hpp"
#include "pursuit/linalg.hpp"

using pursuit::gen_gaussian_matrix;
using pursuit::gen_sparse_signal;
using pursuit::signal_model;

TEST_CASE("gaussian matrix generation", "[generate]") {
  SECTION("same seed gives bit-identical matrices") {
    const auto a = gen_gaussian_matrix(16, 24, 5);
    const auto b = gen_gaussian_matrix(16, 24, 5);
    CHECK(a == b);
    const auto c = gen_gaussian_matrix(16, 24, 6);
    CHECK_FALSE(a == c);
  }

  SECTION("m > N is rejected") {
    CHECK_THROWS_AS(gen_gaussian_matrix(10, 5, 1), pursuit::domain_error);
  }

  SECTION("column norms concentrate near 1 with variance 1/m") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto phi = gen_gaussian_matrix(128, 256, seed);
      double mean_norm = 0;
      for (int c = 0; c < 256; ++c) {
        mean_norm += pursuit::norm2(phi.column(c));
      }
      mean_norm /= 256.0;
      CHECK(mean_norm > 0.9);
      CHECK(mean_norm < 1.1);
    }
  }

  SECTION("entry sample mean is near zero") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto phi = gen_gaussian_matrix(128, 256, seed);
      double sum = 0;
      for (double v : phi.data()) sum += v;
      const double entries = 128.0 * 256.0;
      const double sigma = 1.0 / std::sqrt(128.0);
      CHECK(std::abs(sum / entries) < 4.0 * sigma / std::sqrt(entries));
    }
  }
}

TEST_CASE("sparse signal generation", "[generate]") {
  SECTION("zero-one signal has rho_min = 1/sqrt(K)") {
    const auto sig = gen_sparse_signal(32, 4, signal_model::zero_one, 9);
    CHECK(sig.support.size() == 4);
    for (int idx : sig.support) CHECK(sig.values[idx] == 1.0);
    CHECK(pursuit::compute_rho_min(sig) == Approx(0.5));
  }

  SECTION("K = N uses every index") {
    const auto sig = gen_sparse_signal(6, 6, signal_model::gaussian, 10);
    CHECK(sig.support.values() == std::vector<int>{0, 1, 2, 3, 4, 5});
  }

  SECTION("K > N is rejected") {
    CHECK_THROWS_AS(gen_sparse_signal(4, 5, signal_model::gaussian, 1),
                    pursuit::domain_error);
  }

  SECTION("exponential envelope holds with equality") {
    pursuit::model_params params;
    params.p = 1.5;
    params.c_x = 1.0;
    const auto sig = gen_sparse_signal(40, 5, signal_model::exponential, 3, params);
    std::vector<double> magnitudes;
    for (int idx : sig.support) magnitudes.push_back(std::abs(sig.values[idx]));
    std::sort(magnitudes.rbegin(), magnitudes.rend());
    for (int i = 0; i < 5; ++i) {
      const double expected = std::exp(-1.5 * (i + 1));
      CHECK(magnitudes[i] == Approx(expected).epsilon(1e-15));
    }
  }

  SECTION("power-law envelope holds with equality") {
    pursuit::model_params params;
    params.p = 0.8;
    params.c_x = 2.0;
    const auto sig = gen_sparse_signal(40, 6, signal_model::power_law, 4, params);
    std::vector<double> magnitudes;
    for (int idx : sig.support) magnitudes.push_back(std::abs(sig.values[idx]));
    std::sort(magnitudes.rbegin(), magnitudes.rend());
    for (int i = 0; i < 6; ++i) {
      const double expected = 2.0 * std::pow(i + 1.0, -0.8);
      CHECK(magnitudes[i] == Approx(expected).epsilon(1e-15));
    }
  }

  SECTION("values vanish outside the support") {
    const auto sig = gen_sparse_signal(30, 3, signal_model::gaussian, 8);
    for (int i = 0; i < 30; ++i) {
      if (!sig.support.contains(i)) CHECK(sig.values[i] == 0.0);
    }
  }
}

TEST_CASE("support sampling is uniform over subsets", "[generate][slow]") {
  // N=10, K=3: 120 possible supports, 1e5 draws, 5-sigma band per cell.
  std::map<std::vector<int>, int> counts;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto sig = gen_sparse_signal(10, 3, signal_model::zero_one,
                                       pursuit::derive_seed(31337, i));
    counts[sig.support.values()] += 1;
  }
  CHECK(counts.size() == 120);
  const double p = 1.0 / 120.0;
  const double sigma = std::sqrt(draws * p * (1.0 - p));
  for (const auto& [support, count] : counts) {
    CHECK(std::abs(count - draws * p) < 5.0 * sigma);
  }
}

TEST_CASE("signal files carry a provenance header and round-trip", "[generate]") {
  const auto sig = gen_sparse_signal(16, 3, signal_model::exponential, 41,
                                     {.p = 1.5, .c_x = 2.0});
  const auto dir = std::filesystem::temp_directory_path() / "pursuit_gen_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "signal.txt").string();
  pursuit::save_signal(path, sig, 41);

  std::ifstream is(path);
  std::string first_line;
  std::getline(is, first_line);
  CHECK(first_line == "# model=exponential seed=41 K=3 p=1.5 cx=2");

  const auto values = pursuit::io::load_vector(path);
  CHECK(values == sig.values);
}

TEST_CASE("perturbations", "[generate]") {
  const auto sig = gen_sparse_signal(24, 5, signal_model::zero_one, 77);

  SECTION("sigma = 0 leaves everything untouched") {
    const auto out = pursuit::apply_perturbation(
        sig, {pursuit::perturbation_kind::signal, 0.0}, 16, 1);
    CHECK(out.signal == sig.values);
    for (double v : out.noise) CHECK(v == 0.0);
  }

  SECTION("signal perturbation keeps supported entries bit-exact") {
    const auto out = pursuit::apply_perturbation(
        sig, {pursuit::perturbation_kind::signal, 0.3}, 16, 2);
    bool off_support_changed = false;
    for (int i = 0; i < 24; ++i) {
      if (sig.support.contains(i)) {
        CHECK(out.signal[i] == sig.values[i]);
      } else if (out.signal[i] != 0.0) {
        off_support_changed = true;
      }
    }
    CHECK(off_support_changed);
    for (double v : out.noise) CHECK(v == 0.0);
  }

  SECTION("measurement noise norm concentrates around sigma*sqrt(m)") {
    // chi_128 * 0.1: mean ~1.13, essentially all mass inside [0.8, 1.4].
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto out = pursuit::apply_perturbation(
          sig, {pursuit::perturbation_kind::measurement, 0.1}, 128, seed);
      CHECK(out.signal == sig.values);
      const double e_norm = pursuit::norm2(out.noise);
      CHECK(e_norm > 0.8);
      CHECK(e_norm < 1.4);
    }
  }

  SECTION("negative sigma is rejected") {
    CHECK_THROWS_AS(pursuit::apply_perturbation(
                        sig, {pursuit::perturbation_kind::signal, -1.0}, 16, 1),
                    pursuit::domain_error);
  }
}
