// Copyright 2026 The mimsi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "mimsi/io.hpp"
#include "mimsi_cli/cli.hpp"

using namespace mimsi;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "mimsi");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string &name) {
    fs::path dir = fs::temp_directory_path() / "mimsi_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path &dir, const std::string &text) {
    fs::path p = dir / "config.json";
    io::write_text(p, text);
    return p;
}

json read_json(const fs::path &p) {
    return json::parse(io::read_text(p));
}

}  // namespace

TEST(cli, help_and_usage_errors) {
    EXPECT_EQ(run_cli({"--help"}).code, 0);
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"build-cluster", "--bogus"}).code, 2);
    EXPECT_EQ(run_cli({"build-cluster", "--workers", "0"}).code, 2);
}

TEST(cli, zero_db_cluster_is_identity) {
    auto dir = fresh_dir("zero_db");
    auto cfg = write_config(dir, R"({"cluster": {"m_bins": 3, "delays": [1, 2]}})");
    auto r = run_cli({"build-cluster", "--config", cfg.string(), "--out-dir", (dir / "out").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    GaussianState s = io::read_covariance(dir / "out" / "covariance.bin");
    EXPECT_LT((s.cov() - RealMatrix::Identity(12, 12)).cwiseAbs().maxCoeff(), 1e-14);
    json m = read_json(dir / "out" / "manifest.json");
    EXPECT_EQ(m["subcommand"], "build-cluster");
    EXPECT_EQ(m["status"], "ok");
    EXPECT_EQ(m["outputs"].size(), 3u);
    EXPECT_EQ(m["config_hash"].get<std::string>().size(), 16u);
}

TEST(cli, unknown_keys_are_listed) {
    auto dir = fresh_dir("unknown");
    auto cfg = write_config(dir, R"({"cluster": {"m_bins": 3, "delays": [1], "sqeeze": 1}, "colour": 2})");
    auto r = run_cli({"build-cluster", "--config", cfg.string(), "--out-dir", (dir / "out").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("cluster.sqeeze"), std::string::npos);
    EXPECT_NE(r.err.find("colour"), std::string::npos);
    json m = read_json(dir / "out" / "manifest.json");
    EXPECT_EQ(m["status"], "error");
    EXPECT_EQ(m["exit_code"], 2);
}

TEST(cli, invalid_delay_and_missing_files) {
    auto dir = fresh_dir("invalid");
    auto cfg = write_config(dir, R"({"cluster": {"m_bins": 3, "delays": [3]}})");
    EXPECT_EQ(run_cli({"build-cluster", "--config", cfg.string(), "--out-dir", (dir / "a").string()}).code, 2);
    EXPECT_EQ(run_cli({"build-cluster", "--config", (dir / "nope.json").string(), "--out-dir", (dir / "b").string()}).code, 4);
    EXPECT_EQ(run_cli({"decompose", "--state", (dir / "nope.bin").string(), "--out-dir", (dir / "c").string()}).code, 4);
    EXPECT_EQ(run_cli({"haar-run", "--preset", "no-such", "--out-dir", (dir / "d").string()}).code, 2);
    EXPECT_EQ(run_cli({"haar-run", "--out-dir", (dir / "e").string()}).code, 2);
}

TEST(cli, condition_needs_a_plan) {
    auto dir = fresh_dir("no_plan");
    auto cfg = write_config(dir, R"({"cluster": {"m_bins": 3, "delays": [1]}})");
    auto r = run_cli({"condition", "--config", cfg.string(), "--out-dir", (dir / "out").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("plan"), std::string::npos);
}

TEST(cli, condition_with_plan_file) {
    auto dir = fresh_dir("plan_file");
    auto cfg = write_config(dir, R"({"cluster": {"m_bins": 3, "delays": [1], "squeeze_a_db": 3, "squeeze_b_db": 3}})");
    ASSERT_EQ(run_cli({"build-cluster", "--config", cfg.string(), "--out-dir", (dir / "c").string()}).code, 0);
    io::write_text(dir / "plan.json", R"([{"rail": "A", "t": 0, "theta": 0.3}, {"rail": "B", "t": 2, "theta": -0.2}])");
    auto r = run_cli({"condition", "--state", (dir / "c" / "covariance.bin").string(), "--plan",
                      (dir / "plan.json").string(), "--out-dir", (dir / "out").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    GaussianState s = io::read_covariance(dir / "out" / "state.bin");
    EXPECT_EQ(s.n_modes(), 4u);
    EXPECT_LT(s.purity_residual(), 1e-9);
}

TEST(cli, linear_strategy_on_chopped_window) {
    auto dir = fresh_dir("window");
    auto cfg = write_config(dir, R"({"cluster": {"m_bins": 10, "delays": [1], "squeeze_a_db": 3, "squeeze_b_db": 3},
                                     "keep_bins": [2, 7], "strategy": {"kind": "linear"}, "thetas": "random"})");
    auto r = run_cli({"condition", "--config", cfg.string(), "--seed", "3", "--out-dir", (dir / "out").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    json summary = read_json(dir / "out" / "summary.json");
    EXPECT_EQ(summary["input_modes"], 12);
    EXPECT_EQ(summary["results"][0]["n_modes"], 6);
}

TEST(cli, six_mode_sweep_preset) {
    auto dir = fresh_dir("sweep");
    auto r = run_cli({"condition", "--preset", "six-mode-sweep", "--out-dir", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (int i = 0; i < 5; ++i) {
        GaussianState s = io::read_covariance(dir / ("state_" + std::to_string(i) + ".bin"));
        EXPECT_EQ(s.n_modes(), 6u);
        EXPECT_LT(s.purity_residual(), 1e-6);
    }
    json summary = read_json(dir / "summary.json");
    EXPECT_NEAR(summary["results"][0]["thetas"][2].get<double>(), -M_PI / 2, 1e-15);
    EXPECT_NEAR(summary["results"][4]["thetas"][2].get<double>(), M_PI / 2, 1e-15);
}

TEST(cli, decompose_roundtrip_and_purity_gate) {
    auto dir = fresh_dir("decompose");
    auto pure = write_config(dir, R"({"cluster": {"m_bins": 2, "delays": [1], "squeeze_a_db": 3, "squeeze_b_db": 3}})");
    ASSERT_EQ(run_cli({"build-cluster", "--config", pure.string(), "--out-dir", (dir / "p").string()}).code, 0);
    auto r = run_cli({"decompose", "--state", (dir / "p" / "covariance.bin").string(), "--roundtrip-check",
                      "--out-dir", (dir / "d").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(read_json(dir / "d" / "roundtrip.json")["ok"].get<bool>());
    EffectiveCircuit c = io::circuit_from_json(io::read_text(dir / "d" / "circuit.json"));
    EXPECT_EQ(c.n_modes(), 4u);

    io::write_text(dir / "lossy.json",
                   R"({"cluster": {"m_bins": 2, "delays": [1], "squeeze_a_db": 3, "squeeze_b_db": 3,
                                   "loss_eta": [0.5, 0.5, 0.5, 0.5]}})");
    ASSERT_EQ(run_cli({"build-cluster", "--config", (dir / "lossy.json").string(), "--out-dir", (dir / "l").string()}).code, 0);
    EXPECT_EQ(run_cli({"decompose", "--state", (dir / "l" / "covariance.bin").string(), "--out-dir",
                       (dir / "ld").string()})
                  .code,
              3);
}

TEST(cli, expressibility_report_is_worker_independent) {
    auto dir = fresh_dir("expr");
    auto cfg = write_config(dir, R"({"delays": [1], "r_in": [0.0, 1.0], "n_modes": [2],
                                     "strategies": ["linear", "knights"], "t": [1, 2],
                                     "n_pairs": 100, "n_rtest": 2, "n_batches": 20, "self_test": true})");
    auto a = run_cli({"expressibility", "--config", cfg.string(), "--seed", "5", "--out-dir", (dir / "a").string()});
    auto b = run_cli({"expressibility", "--config", cfg.string(), "--seed", "5", "--workers", "3", "--out-dir",
                      (dir / "b").string()});
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(io::read_text(dir / "a" / "report.json"), io::read_text(dir / "b" / "report.json"));
    EXPECT_EQ(io::read_text(dir / "a" / "batch_means.csv"), io::read_text(dir / "b" / "batch_means.csv"));
    json rep = read_json(dir / "a" / "report.json");
    ASSERT_EQ(rep["runs"].size(), 5u);
    const json &e = rep["runs"][0]["estimates"][0];
    for (const char *key : {"value", "stderr", "t", "n_pairs", "n_rtest", "seed"}) {
        EXPECT_TRUE(e.contains(key)) << key;
    }
    EXPECT_EQ(rep["seed"], 5);
}

TEST(cli, haar_run_is_worker_independent) {
    auto dir = fresh_dir("haar");
    auto cfg = write_config(dir, R"({"cluster": {"m_bins": 30, "delays": [1, 8], "squeeze_a_db": 2.3,
                                                 "squeeze_b_db": 3.0}, "n_bins": 20, "calibration_samples": 1})");
    auto a = run_cli({"haar-run", "--config", cfg.string(), "--out-dir", (dir / "a").string()});
    auto b = run_cli({"haar-run", "--config", cfg.string(), "--workers", "4", "--out-dir", (dir / "b").string()});
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0) << b.err;
    for (const char *f : {"report.json", "amplitude_hist.csv", "phase_hist.csv", "circuit.json", "u_amplitude.csv"}) {
        EXPECT_EQ(io::read_text(dir / "a" / f), io::read_text(dir / "b" / f)) << f;
    }
    std::string hist = io::read_text(dir / "a" / "amplitude_hist.csv");
    EXPECT_EQ(hist.rfind("bin_left,bin_right,frequency\n", 0), 0u);
}

TEST(cli, seed_from_config_and_flag) {
    auto dir = fresh_dir("seed");
    auto cfg = write_config(dir, R"({"cluster": {"m_bins": 2, "delays": [1]}, "seed": 42})");
    ASSERT_EQ(run_cli({"build-cluster", "--config", cfg.string(), "--out-dir", (dir / "a").string()}).code, 0);
    EXPECT_EQ(read_json(dir / "a" / "manifest.json")["seed"], 42);
    ASSERT_EQ(run_cli({"build-cluster", "--config", cfg.string(), "--seed", "9", "--out-dir", (dir / "b").string()}).code, 0);
    EXPECT_EQ(read_json(dir / "b" / "manifest.json")["seed"], 9);
}
