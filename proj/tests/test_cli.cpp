// Copyright 2026 The gmnlab Authors
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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "gmnlab/cli.hpp"

namespace gmnlab::cli {
namespace {

namespace fs = std::filesystem;

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

fs::path tmp_dir() {
  const fs::path dir = GMNLAB_TEST_TMP;
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::string density_file(const std::string& name, const ComplexMatrix& m) {
  const fs::path p = tmp_dir() / name;
  write_file(p, density_to_json(m).dump());
  return p.string();
}

int run_cli(const std::string& args, const fs::path& stdout_path, const fs::path& stderr_path) {
  const std::string cmd = std::string(GMNLAB_CLI_PATH) + " " + args + " > " + stdout_path.string() +
                          " 2> " + stderr_path.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunOptions options(const std::string& command, const std::string& state = {}) {
  RunOptions o;
  o.command = command;
  o.state = state;
  o.threads = 1;
  return o;
}

TEST(StateSpec, Variants) {
  EXPECT_EQ(parse_state_spec("ghz1", 1).kind, StateSpec::Kind::Named);
  const StateSpec f = parse_state_spec("file:/tmp/x.json", 1);
  EXPECT_EQ(f.kind, StateSpec::Kind::File);
  EXPECT_EQ(f.path, "/tmp/x.json");
  const StateSpec r = parse_state_spec("random:12", 99);
  EXPECT_EQ(r.kind, StateSpec::Kind::Sampler);
  EXPECT_EQ(r.seed, 99u);
  EXPECT_EQ(r.index, 12u);
  const StateSpec g = parse_state_spec("graph:5:3", 99);
  EXPECT_EQ(g.name, "graph");
  EXPECT_EQ(g.seed, 5u);
  EXPECT_EQ(g.index, 3u);
  EXPECT_THROW(parse_state_spec("bell", 1), std::invalid_argument);
  EXPECT_THROW(parse_state_spec("random:-1", 1), std::invalid_argument);
  EXPECT_THROW(parse_state_spec("file:", 1), std::invalid_argument);
}

TEST(CmdGmn, NamedAndFileStates) {
  auto value_of = [](const CommandResult& r) {
    const auto rows = parse_csv(r.body);
    EXPECT_EQ(rows[0][1], "value");
    return std::stod(rows[1][1]);
  };
  EXPECT_NEAR(value_of(cmd_gmn(options("gmn", "ghz1"))), 0.5, 1e-4);
  EXPECT_NEAR(value_of(cmd_gmn(options("gmn", "w"))), 0.443, 5e-3);
  const std::string mixed = density_file("maximally_mixed.json", identity(8) / 8.0);
  EXPECT_EQ(value_of(cmd_gmn(options("gmn", "file:" + mixed))), 0.0);
}

TEST(CmdGmn, JsonFormatAndWitness) {
  RunOptions o = options("gmn", "ghz1");
  o.format = "json";
  o.witness = "w.json";
  const CommandResult r = cmd_gmn(o);
  const auto j = nlohmann::json::parse(r.body);
  EXPECT_NEAR(j.at("value").get<double>(), 0.5, 1e-4);
  EXPECT_EQ(j.at("status"), "Optimal");
  const auto w = nlohmann::json::parse(r.witness_body);
  EXPECT_EQ(w.at("witness").at("dim"), 8);
  EXPECT_TRUE(w.at("certificates").contains("B|AC"));
  ASSERT_EQ(r.results.size(), 1u);
  EXPECT_EQ(r.results[0].at("status"), "Optimal");
}

TEST(CmdSweep, DecayRatesInCsv) {
  auto etas = [](const std::string& state) {
    RunOptions o = options("sweep", state);
    const auto rows = parse_csv(cmd_sweep(o).body);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"gt", "E", "eta"}));
    EXPECT_EQ(rows.size(), 42u);
    std::vector<std::pair<double, double>> out;
    for (std::size_t k = 1; k < rows.size(); ++k) {
      out.push_back({std::stod(rows[k][0]), std::stod(rows[k][2])});
    }
    return out;
  };
  for (auto [gt, eta] : etas("ghz2")) EXPECT_NEAR(eta, -0.5, 0.01) << gt;
  for (auto [gt, eta] : etas("ghz1")) {
    if (gt >= 0.1 - 1e-9) {
      EXPECT_NEAR(eta, -4.5, 0.01) << gt;
    }
  }
  RunOptions o = options("sweep", "w");
  o.steps = 5;
  const auto rows = parse_csv(cmd_sweep(o).body);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_NEAR(std::stod(rows[k][1]), std::stod(rows[1][1]), 1e-5);
    EXPECT_NEAR(std::stod(rows[k][2]), 0.0, 1e-3);
  }
}

TEST(CmdSweep, GammaScalesTheGrid) {
  RunOptions o = options("sweep", "ghz2");
  o.gamma = 2.0;
  o.tmax = 1.0;
  o.steps = 3;
  const auto rows = parse_csv(cmd_sweep(o).body);
  EXPECT_EQ(rows[3][0], "2");
  EXPECT_NEAR(std::stod(rows[3][1]), 0.5 * std::exp(-1.0), 1e-6);
}

TEST(CmdSweep, RejectsBadGrid) {
  RunOptions o = options("sweep", "ghz1");
  o.steps = 1;
  EXPECT_THROW(cmd_sweep(o), std::invalid_argument);
}

TEST(CmdEnsemble, SingleStateBandsCollapse) {
  RunOptions o = options("ensemble");
  o.n = 1;
  o.steps = 4;
  o.tmax = 1.0;
  const auto rows = parse_csv(cmd_ensemble(o).body);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"gt", "mean_eta", "ci_low", "ci_high", "n_effective"}));
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k][1], rows[k][2]);
    EXPECT_EQ(rows[k][1], rows[k][3]);
    EXPECT_EQ(rows[k][4], "1");
  }
}

TEST(CmdEnsemble, DeterministicPerSeedAndPerStateFile) {
  RunOptions o = options("ensemble");
  o.kind = "graph";
  o.n = 3;
  o.steps = 3;
  o.per_state = "per_state.csv";
  const CommandResult a = cmd_ensemble(o);
  o.threads = 2;
  const CommandResult b = cmd_ensemble(o);
  EXPECT_EQ(a.body, b.body);
  EXPECT_EQ(a.per_state_body, b.per_state_body);
  const auto rows = parse_csv(a.per_state_body);
  ASSERT_EQ(rows.size(), 1u + 3u * 3u);
  // sorted by grid index, then state index
  EXPECT_EQ(rows[1][0], "0");
  EXPECT_EQ(rows[2][0], "1");
  EXPECT_EQ(rows[4][0], "0");
  EXPECT_EQ(rows[4][1], rows[5][1]);
  o.seed = 1;
  EXPECT_NE(cmd_ensemble(o).body, a.body);
}

TEST(CmdAsymptotic, FileProductStateIsZero) {
  const std::string path = density_file("zero.json", pure_to_density(basis_state(0)).matrix());
  RunOptions o = options("asymptotic", "file:" + path);
  const auto rows = parse_csv(cmd_asymptotic(o).body);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"index", "E_infinity"}));
  EXPECT_EQ(rows[1][1], "0");
}

TEST(CmdAsymptotic, EnsembleJson) {
  RunOptions o = options("asymptotic");
  o.n = 4;
  o.format = "json";
  const CommandResult r = cmd_asymptotic(o);
  const auto j = nlohmann::json::parse(r.body);
  EXPECT_EQ(j.at("E_infinity").size(), 4u);
  EXPECT_GT(j.at("min").get<double>(), 0.0);
  EXPECT_EQ(r.results.size(), 4u);
}

TEST(CmdEvolve, WritesLoadableState) {
  RunOptions o = options("evolve", "ghz1");
  o.t = 1.0;
  const LoadedState s = parse_state(cmd_evolve(o).body);
  EXPECT_NEAR(as_density(s)(0, 7).real(), 0.5 * std::exp(-4.5), 1e-15);
  o.asymptotic = true;
  EXPECT_EQ(as_density(parse_state(cmd_evolve(o).body))(0, 7), Complex(0.0));
}

TEST(Manifest, RoundTripsOptions) {
  RunOptions o = options("ensemble");
  o.kind = "graph";
  o.n = 7;
  o.seed = 123;
  o.settings.gap_tol = 1e-9;
  CommandResult r;
  const auto m = build_manifest(o, r);
  EXPECT_EQ(m.at("version"), kVersion);
  EXPECT_EQ(m.at("seed"), 123u);
  const RunOptions back = options_from_manifest(m);
  EXPECT_EQ(back.kind, "graph");
  EXPECT_EQ(back.n, 7);
  EXPECT_EQ(back.seed, 123u);
  EXPECT_EQ(back.settings.gap_tol, 1e-9);
  EXPECT_THROW(options_from_manifest(nlohmann::json::object()), Error);
}

// ---------------------------------------------------------------------------
// executable

TEST(Executable, ExitCodesAndMachineReadableErrors) {
  const fs::path dir = tmp_dir();
  ComplexMatrix trace_two = identity(8) / 4.0;
  const std::string bad = density_file("trace_two.json", trace_two);
  EXPECT_EQ(run_cli("gmn --state file:" + bad, dir / "o.txt", dir / "e.txt"), 2);
  const auto err = nlohmann::json::parse(read_file(dir / "e.txt"));
  EXPECT_EQ(err.at("error"), "BadTrace");

  const std::string small = density_file("small.json", identity(4) / 4.0);
  EXPECT_EQ(run_cli("gmn --state file:" + small, dir / "o.txt", dir / "e.txt"), 2);
  EXPECT_EQ(nlohmann::json::parse(read_file(dir / "e.txt")).at("error"), "BadDim");

  EXPECT_EQ(run_cli("gmn --state nonsense", dir / "o.txt", dir / "e.txt"), 2);
  EXPECT_EQ(run_cli("sweep --state ghz1 --steps 1", dir / "o.txt", dir / "e.txt"), 2);
  EXPECT_EQ(run_cli("gmn --state w --max-iter 1", dir / "o.txt", dir / "e.txt"), 3);
  EXPECT_EQ(run_cli("gmn --state ghz1", dir / "o.txt", dir / "e.txt"), 0);
  EXPECT_NE(read_file(dir / "o.txt").find("ghz1,0.5"), std::string::npos);
}

TEST(Executable, ManifestReplayReproducesOutput) {
  const fs::path dir = tmp_dir();
  const fs::path out = dir / "ens.csv";
  const fs::path replayed = dir / "ens_replay.csv";
  ASSERT_EQ(run_cli("ensemble --kind random --n 3 --steps 4 --tmax 1 --seed 9 --out " + out.string(),
                    dir / "o.txt", dir / "e.txt"),
            0);
  const fs::path manifest = out.string() + ".manifest.json";
  ASSERT_TRUE(fs::exists(manifest));
  const auto m = nlohmann::json::parse(read_file(manifest));
  EXPECT_EQ(m.at("command"), "ensemble");
  EXPECT_EQ(m.at("seed"), 9u);
  EXPECT_EQ(m.at("results").size(), 12u);
  EXPECT_EQ(m.at("results")[0].at("status"), "Optimal");
  ASSERT_EQ(run_cli("replay --manifest " + manifest.string() + " --out " + replayed.string(),
                    dir / "o.txt", dir / "e.txt"),
            0);
  EXPECT_EQ(read_file(out), read_file(replayed));
}

TEST(Executable, EvolveThenMeasure) {
  const fs::path dir = tmp_dir();
  const fs::path state = dir / "evolved.json";
  ASSERT_EQ(run_cli("evolve --state ghz2 --t 0.5 --out " + state.string(), dir / "o.txt", dir / "e.txt"), 0);
  ASSERT_EQ(run_cli("gmn --format json --state file:" + state.string(), dir / "o.txt", dir / "e.txt"), 0);
  const auto j = nlohmann::json::parse(read_file(dir / "o.txt"));
  EXPECT_NEAR(j.at("value").get<double>(), 0.5 * std::exp(-0.25), 1e-6);
}

}  // namespace
}  // namespace gmnlab::cli
