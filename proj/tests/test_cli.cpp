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

// End-to-end checks of the installed command-line interface, driven
// through a shell. PURSUIT_CLI_PATH is injected by the build.

#include <catch2/catch.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pursuit/generate.hpp"
#include "pursuit/linalg.hpp"
#include "pursuit/matrix.hpp"

namespace {

namespace fs = std::filesystem;

struct command_result {
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
};

command_result run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / "pursuit_cli_test";
  fs::create_directories(dir);
  const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
  const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
  ++counter;

  const std::string cmd = std::string(PURSUIT_CLI_PATH) + " " + args + " >" +
                          out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());

  command_result result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  const auto slurp = [](const fs::path& p) {
    std::ifstream is(p);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
  };
  result.stdout_text = slurp(out);
  result.stderr_text = slurp(err);
  return result;
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "pursuit_cli_fixtures";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("rip subcommand on an orthonormal fixture prints zeros", "[cli]") {
  pursuit::matrix eye(5, 5);
  for (int i = 0; i < 5; ++i) eye(i, i) = 1.0;
  const auto path = scratch_dir() / "eye.txt";
  pursuit::io::save_matrix(path.string(), eye);

  const auto run = run_cli("rip --matrix " + path.string() + " -k 3");
  REQUIRE(run.exit_code == 0);

  std::istringstream lines(run.stdout_text);
  std::string line;
  int k_seen = 0;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    int k;
    double delta;
    REQUIRE(fields >> k >> delta);
    CHECK(k == ++k_seen);
    CHECK(delta == Approx(0.0).margin(1e-12));
  }
  CHECK(k_seen == 3);
}

TEST_CASE("recover subcommand round-trips a planted instance", "[cli]") {
  const auto phi = pursuit::gen_gaussian_matrix(12, 24, 2718);
  const auto sig = pursuit::gen_sparse_signal(24, 2, pursuit::signal_model::gaussian, 281);
  const auto y = phi.apply(sig.values);

  const auto dir = scratch_dir();
  pursuit::io::save_matrix((dir / "phi.txt").string(), phi);
  pursuit::io::save_vector((dir / "y.txt").string(), y);

  const auto run = run_cli("recover --matrix " + (dir / "phi.txt").string() +
                           " --measurement " + (dir / "y.txt").string() +
                           " -k 2 --out " + (dir / "xhat.txt").string());
  REQUIRE(run.exit_code == 0);
  CHECK(run.stdout_text.find("support: " + sig.support.to_string()) != std::string::npos);
  CHECK(run.stdout_text.find("termination: residue_zero") != std::string::npos);

  const auto estimate = pursuit::io::load_vector((dir / "xhat.txt").string());
  REQUIRE(estimate.size() == 24);
  double err = 0;
  for (int i = 0; i < 24; ++i) {
    err += (estimate[i] - sig.values[i]) * (estimate[i] - sig.values[i]);
  }
  CHECK(std::sqrt(err) <= 1e-6 * pursuit::norm2(sig.values));
}

TEST_CASE("recover warns above the soft sparsity limit but still runs", "[cli]") {
  const auto phi = pursuit::gen_gaussian_matrix(8, 24, 5);
  const auto sig = pursuit::gen_sparse_signal(24, 2, pursuit::signal_model::gaussian, 6);
  const auto y = phi.apply(sig.values);
  const auto dir = scratch_dir();
  pursuit::io::save_matrix((dir / "phi_soft.txt").string(), phi);
  pursuit::io::save_vector((dir / "y_soft.txt").string(), y);

  const auto run = run_cli("recover --matrix " + (dir / "phi_soft.txt").string() +
                           " --measurement " + (dir / "y_soft.txt").string() + " -k 5");
  CHECK(run.exit_code == 0);
  CHECK(run.stderr_text.find("warning") != std::string::npos);
}

TEST_CASE("cli exit codes", "[cli]") {
  SECTION("unknown subcommand") {
    CHECK(run_cli("frobnicate").exit_code != 0);
  }
  SECTION("unknown flag") {
    CHECK(run_cli("rip --matrix nowhere.txt -k 2 --bogus").exit_code != 0);
  }
  SECTION("missing file is a validation error") {
    const auto run = run_cli("rip --matrix /nonexistent/m.txt -k 2");
    CHECK(run.exit_code == 1);
  }
  SECTION("budget overrun is a runtime error") {
    const auto phi = pursuit::gen_gaussian_matrix(8, 50, 12);
    const auto dir = scratch_dir();
    pursuit::io::save_matrix((dir / "wide.txt").string(), phi);
    const auto run = run_cli("rip --matrix " + (dir / "wide.txt").string() + " -k 8");
    CHECK(run.exit_code == 2);
    CHECK(run.stderr_text.find("budget") != std::string::npos);
  }
}

TEST_CASE("verify-lemmas subcommand reports four passing verifiers", "[cli]") {
  const auto run = run_cli("verify-lemmas --m 10 --n 14 --trials 100 --seed 3");
  REQUIRE(run.exit_code == 0);
  CHECK(run.stdout_text.find("delta_monotonicity") != std::string::npos);
  CHECK(run.stdout_text.find("near_orthogonality") != std::string::npos);
  CHECK(run.stdout_text.find("residue_orthogonality") != std::string::npos);
  CHECK(run.stdout_text.find("projection_bounds") != std::string::npos);
  CHECK(run.stdout_text.find("FAIL") == std::string::npos);
}

TEST_CASE("bench-frequency writes deterministic CSVs across thread counts", "[cli]") {
  const auto dir = scratch_dir();
  const std::string base = "bench-frequency --m 16 --n 32 --k 2,4 --trials 10 "
                           "--signal gaussian --alg sp,omp --seed 11 ";
  const auto a = run_cli(base + "--out " + (dir / "fa").string() + " --threads 1");
  const auto b = run_cli(base + "--out " + (dir / "fb").string() + " --threads 2");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);

  for (const std::string name : {"frequency_trials.csv", "frequency_summary.csv"}) {
    std::ifstream fa(dir / "fa" / name), fb(dir / "fb" / name);
    REQUIRE(fa.good());
    REQUIRE(fb.good());
    std::ostringstream ca, cb;
    ca << fa.rdbuf();
    cb << fb.rdbuf();
    CHECK(ca.str() == cb.str());
    if (name == std::string("frequency_trials.csv")) {
      CHECK(ca.str().rfind("trial,K,alg,seed,success,rel_error,n_it,wall_time_us,e_norm", 0) == 0);
    }
  }
}

TEST_CASE("config file supplies subcommand options", "[cli]") {
  const auto dir = scratch_dir();
  const auto cfg_path = dir / "freq.ini";
  {
    std::ofstream cfg(cfg_path);
    cfg << "[bench-frequency]\n"
        << "m=16\nn=32\nk=2\ntrials=5\nsignal=gaussian\nalg=sp\nseed=13\n"
        << "out=" << (dir / "fc").string() << "\n";
  }
  const auto run = run_cli("--config " + cfg_path.string() + " bench-frequency");
  REQUIRE(run.exit_code == 0);
  CHECK(fs::exists(dir / "fc" / "frequency_summary.csv"));
}
