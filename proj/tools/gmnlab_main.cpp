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

// gmnlab: genuine multipartite negativity of three-qubit states under
// collective dephasing.
//
// Exit codes: 0 ok, 2 invalid input, 3 solver failure. Errors are reported
// on stderr as a single JSON object.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmnlab/cli.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

void report_error(const std::string& code, const std::string& message) {
  std::cerr << nlohmann::json({{"error", code}, {"message", message}}).dump() << "\n";
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gmnlab::Error(gmnlab::ErrorCode::ParseError, "cannot write '" + path + "'");
  out << text;
}

void add_common(CLI::App* sub, gmnlab::cli::RunOptions& o) {
  sub->add_option("--gap-tol", o.settings.gap_tol, "duality gap tolerance");
  sub->add_option("--feas-tol", o.settings.feas_tol, "constraint residual tolerance");
  sub->add_option("--max-iter", o.settings.max_iterations, "interior-point iteration cap");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", o.out, "output file (default stdout)");
  sub->add_option("--manifest", o.manifest,
                  "run manifest path (default OUT.manifest.json when --out is given)");
  sub->add_option("--threads", o.threads, "worker threads, 0 = all cores");
}

int run(gmnlab::cli::RunOptions o) {
  using namespace gmnlab;
  const cli::CommandResult r = cli::run_command(o);
  write_text(o.out, r.body);
  if (!o.witness.empty()) write_text(o.witness, r.witness_body);
  if (!o.per_state.empty()) write_text(o.per_state, r.per_state_body);
  std::string manifest_path = o.manifest;
  if (manifest_path.empty() && !o.out.empty()) manifest_path = o.out + ".manifest.json";
  if (!manifest_path.empty()) write_text(manifest_path, cli::build_manifest(o, r).dump(2) + "\n");
  if (!r.summary.empty()) std::cerr << r.summary << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gmnlab;
  cli::RunOptions o;
  std::string replay_manifest;

  CLI::App app{"Genuine multipartite negativity under collective dephasing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  auto* gmn = app.add_subcommand("gmn", "genuine negativity of one state");
  gmn->add_option("--state", o.state, "ghz1|ghz2|w|plus-product|file:PATH|random:[SEED:]I|graph:[SEED:]I")
      ->required();
  gmn->add_option("--gamma", o.gamma, "dephasing rate");
  gmn->add_option("--t", o.t, "evolve for time t before measuring");
  gmn->add_flag("--asymptotic", o.asymptotic, "measure the t = infinity state");
  gmn->add_option("--witness", o.witness, "write witness and certificates as JSON");
  gmn->add_option("--seed", o.seed, "seed for sampler states");
  add_common(gmn, o);

  auto* evolve_cmd = app.add_subcommand("evolve", "write the dephased density matrix");
  evolve_cmd->add_option("--state", o.state, "input state")->required();
  evolve_cmd->add_option("--gamma", o.gamma, "dephasing rate");
  evolve_cmd->add_option("--t", o.t, "time");
  evolve_cmd->add_flag("--asymptotic", o.asymptotic, "t = infinity");
  evolve_cmd->add_option("--seed", o.seed, "seed for sampler states");
  evolve_cmd->add_option("--out", o.out, "output file (default stdout)");
  evolve_cmd->add_option("--manifest", o.manifest, "run manifest path");

  auto* sweep_cmd = app.add_subcommand("sweep", "E and eta over a time grid");
  sweep_cmd->add_option("--state", o.state, "input state")->required();
  sweep_cmd->add_option("--gamma", o.gamma, "dephasing rate");
  sweep_cmd->add_option("--tmax", o.tmax, "last time point");
  sweep_cmd->add_option("--steps", o.steps, "number of time points (>= 2)");
  sweep_cmd->add_option("--seed", o.seed, "seed for sampler states");
  add_common(sweep_cmd, o);

  auto* ens = app.add_subcommand("ensemble", "mean eta and bands over sampled states");
  ens->add_option("--kind", o.kind, "random or graph")->check(CLI::IsMember({"random", "graph"}));
  ens->add_option("--n", o.n, "number of states");
  ens->add_option("--seed", o.seed, "ensemble seed");
  ens->add_option("--gamma", o.gamma, "dephasing rate");
  ens->add_option("--tmax", o.tmax, "last time point");
  ens->add_option("--steps", o.steps, "number of time points (>= 2)");
  ens->add_option("--per-state", o.per_state, "write per-state E and eta as CSV");
  add_common(ens, o);

  auto* asym = app.add_subcommand("asymptotic", "E at t = infinity for sampled states");
  asym->add_option("--kind", o.kind, "random or graph")->check(CLI::IsMember({"random", "graph"}));
  asym->add_option("--n", o.n, "number of states");
  asym->add_option("--seed", o.seed, "ensemble seed");
  asym->add_option("--state", o.state, "single state instead of an ensemble");
  add_common(asym, o);

  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay->add_option("--manifest", replay_manifest, "manifest to replay")->required();
  replay->add_option("--out", o.out, "override the recorded output path");
  replay->add_option("--threads", o.threads, "worker threads, 0 = all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("UsageError", e.what());
    return kExitInput;
  }

  try {
    if (replay->parsed()) {
      std::ifstream in(replay_manifest);
      if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + replay_manifest + "'");
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
      }
      cli::RunOptions recorded = cli::options_from_manifest(doc);
      if (!o.out.empty()) recorded.out = o.out;
      recorded.threads = o.threads;
      return run(recorded);
    }
    o.command = app.get_subcommands().front()->get_name();
    return run(o);
  } catch (const SolverError& e) {
    report_error(std::string(to_string(e.code())), e.what());
    return kExitSolver;
  } catch (const Error& e) {
    report_error(std::string(to_string(e.code())), e.what());
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    report_error("InvalidArgument", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    report_error("InternalError", e.what());
    return kExitSolver;
  }
}
