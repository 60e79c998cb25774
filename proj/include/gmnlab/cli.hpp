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

// Command implementations behind the gmnlab executable. Each command turns a
// RunOptions into output text plus a run manifest; the executable only does
// argument parsing, file writing and exit codes.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmnlab/channel.hpp"
#include "gmnlab/dynamics.hpp"
#include "gmnlab/gmn.hpp"
#include "gmnlab/state_io.hpp"
#include "gmnlab/states.hpp"
#include "gmnlab/version.hpp"

namespace gmnlab::cli {

inline constexpr std::uint64_t kDefaultSeed = 2014;

/// Parsed --state value: a named state, file:PATH, random:[SEED:]INDEX or
/// graph:[SEED:]INDEX.
struct StateSpec {
  enum class Kind { Named, File, Sampler };
  Kind kind = Kind::Named;
  std::string name;     // ghz1 | ghz2 | w | plus-product, or sampler random | graph
  std::string path;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t index = 0;
};

inline std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (s.empty() || pos != s.size() || s.front() == '-') {
    throw std::invalid_argument("invalid " + what + " '" + s + "'");
  }
  return v;
}

inline StateSpec parse_state_spec(const std::string& text, std::uint64_t default_seed) {
  StateSpec spec;
  if (text == "ghz1" || text == "ghz2" || text == "w" || text == "plus-product") {
    spec.name = text;
    return spec;
  }
  if (text.rfind("file:", 0) == 0) {
    spec.kind = StateSpec::Kind::File;
    spec.path = text.substr(5);
    if (spec.path.empty()) throw std::invalid_argument("empty path in --state file:");
    return spec;
  }
  for (const std::string sampler : {"random", "graph"}) {
    const std::string prefix = sampler + ":";
    if (text.rfind(prefix, 0) != 0) continue;
    spec.kind = StateSpec::Kind::Sampler;
    spec.name = sampler;
    spec.seed = default_seed;
    const std::string rest = text.substr(prefix.size());
    const auto colon = rest.find(':');
    if (colon == std::string::npos) {
      spec.index = parse_u64(rest, "sample index");
    } else {
      spec.seed = parse_u64(rest.substr(0, colon), "seed");
      spec.index = parse_u64(rest.substr(colon + 1), "sample index");
    }
    return spec;
  }
  throw std::invalid_argument("unknown state '" + text +
                              "' (expected ghz1, ghz2, w, plus-product, file:PATH, "
                              "random:[SEED:]INDEX or graph:[SEED:]INDEX)");
}

inline DensityMatrix resolve_state(const StateSpec& spec) {
  switch (spec.kind) {
    case StateSpec::Kind::Named:
      if (spec.name == "ghz1") return pure_to_density(ghz1());
      if (spec.name == "ghz2") return pure_to_density(ghz2());
      if (spec.name == "w") return pure_to_density(w_state());
      return pure_to_density(plus_product());
    case StateSpec::Kind::File:
      return as_density(load_state_file(spec.path));
    case StateSpec::Kind::Sampler:
      return pure_to_density(spec.name == "random"
                                 ? random_pure_at(RngSeed{spec.seed}, spec.index)
                                 : random_weighted_graph_at(RngSeed{spec.seed}, spec.index));
  }
  throw std::logic_error("unreachable");
}

struct RunOptions {
  std::string command;
  std::string state;
  double gamma = 1.0;
  double t = 0.0;
  double tmax = 2.0;
  int steps = 41;
  int n = 100;
  std::uint64_t seed = kDefaultSeed;
  std::string kind = "random";
  SdpSettings settings;
  std::string format = "csv";
  std::string out;
  std::string manifest;
  std::string witness;
  std::string per_state;
  bool asymptotic = false;
  unsigned threads = 0;
};

inline nlohmann::json settings_to_json(const SdpSettings& s) {
  return {{"max_iterations", s.max_iterations},
          {"gap_tol", s.gap_tol},
          {"feas_tol", s.feas_tol},
          {"value_floor", s.value_floor}};
}

inline nlohmann::json options_to_json(const RunOptions& o) {
  return {{"command", o.command},   {"state", o.state},         {"gamma", o.gamma},
          {"t", o.t},               {"tmax", o.tmax},           {"steps", o.steps},
          {"n", o.n},               {"seed", o.seed},           {"kind", o.kind},
          {"format", o.format},     {"out", o.out},             {"witness", o.witness},
          {"per_state", o.per_state}, {"asymptotic", o.asymptotic},
          {"settings", settings_to_json(o.settings)}};
}

inline RunOptions options_from_json(const nlohmann::json& j) {
  try {
    RunOptions o;
    o.command = j.at("command").get<std::string>();
    o.state = j.value("state", "");
    o.gamma = j.value("gamma", 1.0);
    o.t = j.value("t", 0.0);
    o.tmax = j.value("tmax", 2.0);
    o.steps = j.value("steps", 41);
    o.n = j.value("n", 100);
    o.seed = j.value("seed", kDefaultSeed);
    o.kind = j.value("kind", "random");
    o.format = j.value("format", "csv");
    o.out = j.value("out", "");
    o.witness = j.value("witness", "");
    o.per_state = j.value("per_state", "");
    o.asymptotic = j.value("asymptotic", false);
    if (j.contains("settings")) {
      const auto& s = j.at("settings");
      o.settings.max_iterations = s.value("max_iterations", o.settings.max_iterations);
      o.settings.gap_tol = s.value("gap_tol", o.settings.gap_tol);
      o.settings.feas_tol = s.value("feas_tol", o.settings.feas_tol);
      o.settings.value_floor = s.value("value_floor", o.settings.value_floor);
    }
    return o;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("manifest: ") + e.what());
  }
}

struct CommandResult {
  std::string body;             // main output (stdout or --out)
  std::string per_state_body;   // ensemble --per-state
  std::string witness_body;     // gmn --witness
  std::string summary;          // human-readable line for stderr
  nlohmann::json results = nlohmann::json::array();  // label, status, duality_gap
};

namespace detail {

inline nlohmann::json rounded(double v) {
  if (!std::isfinite(v)) return nullptr;
  return nlohmann::json::parse(format_number(v));
}

inline std::string optional_cell(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

inline std::string nan_cell(double v) { return std::isnan(v) ? std::string() : format_number(v); }

inline void check_settings(const SdpSettings& s) {
  if (!(s.gap_tol > 0) || !(s.feas_tol > 0) || !(s.value_floor > 0) || s.max_iterations < 1) {
    throw std::invalid_argument("solver tolerances must be > 0 and max iterations >= 1");
  }
}

inline void check_format(const RunOptions& o) {
  if (o.format != "csv" && o.format != "json") {
    throw std::invalid_argument("--format must be csv or json");
  }
}

/// Γt grid for t uniform on [0, tmax].
inline TimeGrid time_grid(const RunOptions& o) {
  if (o.steps < 2) throw std::invalid_argument("--steps must be >= 2");
  if (!(o.gamma > 0)) throw std::invalid_argument("--gamma must be > 0");
  if (!(o.tmax > 0)) throw std::invalid_argument("--tmax must be > 0");
  return TimeGrid::uniform(0.0, o.gamma * o.tmax, o.steps);
}

inline std::vector<PureState> sample(const RunOptions& o) {
  if (o.n < 1) throw std::invalid_argument("--n must be >= 1");
  if (o.kind == "random") return random_pure(RngSeed{o.seed}, o.n);
  if (o.kind == "graph") return random_weighted_graph(RngSeed{o.seed}, o.n);
  throw std::invalid_argument("--kind must be random or graph");
}

inline nlohmann::json result_entry(const std::string& label, GmnStatus status, double gap) {
  return {{"label", label}, {"status", to_string(status)}, {"duality_gap", gap}};
}

inline DensityMatrix required_state(const RunOptions& o) {
  if (o.state.empty()) throw std::invalid_argument("--state is required");
  return resolve_state(parse_state_spec(o.state, o.seed));
}

}  // namespace detail

inline CommandResult cmd_gmn(const RunOptions& o) {
  detail::check_settings(o.settings);
  detail::check_format(o);
  DensityMatrix rho = detail::required_state(o);
  if (o.t != 0.0) rho = evolve(rho, o.gamma * o.t);
  if (o.asymptotic) rho = asymptotic_map(rho);
  const GmnResult r = genuine_negativity(rho, o.settings);

  CommandResult out;
  out.results.push_back(detail::result_entry(o.state, r.status, r.duality_gap));
  if (o.format == "csv") {
    out.body = "state,value,objective,duality_gap,status,iterations\n" + o.state + "," +
               format_number(r.value) + "," + format_number(r.objective) + "," +
               format_number(r.duality_gap) + "," + to_string(r.status) + "," +
               std::to_string(r.iterations) + "\n";
  } else {
    nlohmann::json j = {{"state", o.state},
                        {"value", detail::rounded(r.value)},
                        {"objective", detail::rounded(r.objective)},
                        {"duality_gap", detail::rounded(r.duality_gap)},
                        {"status", to_string(r.status)},
                        {"iterations", r.iterations}};
    out.body = j.dump(2) + "\n";
  }
  if (!o.witness.empty()) {
    nlohmann::json w = density_to_json(r.witness);
    nlohmann::json certs = nlohmann::json::object();
    for (Bipartition m : kBipartitions) {
      certs[label(m)] = {{"P", density_to_json(r.certificate(m).p)},
                         {"Q", density_to_json(r.certificate(m).q)}};
    }
    out.witness_body = nlohmann::json({{"witness", w}, {"certificates", certs}}).dump(2) + "\n";
  }
  out.summary = "E = " + format_number(r.value) + " (" + to_string(r.status) + ", gap " +
                format_number(r.duality_gap) + ")";
  return out;
}

inline CommandResult cmd_evolve(const RunOptions& o) {
  DensityMatrix rho = detail::required_state(o);
  if (o.asymptotic) {
    rho = asymptotic_map(rho);
  } else {
    if (!(o.gamma >= 0) || !(o.t >= 0)) throw std::invalid_argument("--gamma and --t must be >= 0");
    rho = evolve(rho, o.gamma * o.t);
  }
  CommandResult out;
  out.body = density_to_json(rho.matrix()).dump(2) + "\n";
  return out;
}

inline CommandResult cmd_sweep(const RunOptions& o) {
  detail::check_settings(o.settings);
  detail::check_format(o);
  const TimeGrid grid = detail::time_grid(o);
  const DensityMatrix rho = detail::required_state(o);
  const EntanglementSeries s = sweep(rho, grid, o.settings, o.state, o.threads);

  CommandResult out;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.results.push_back(detail::result_entry(o.state + "@gt=" + format_number(grid[k]),
                                               s.statuses[k], s.duality_gaps[k]));
  }
  if (o.format == "csv") {
    std::string body = "gt,E,eta\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
      body += format_number(grid[k]) + "," + format_number(s.e_values[k]) + "," +
              detail::optional_cell(s.eta_values[k]) + "\n";
    }
    out.body = std::move(body);
  } else {
    nlohmann::json j = {{"gt", nlohmann::json::array()},
                        {"E", nlohmann::json::array()},
                        {"eta", nlohmann::json::array()}};
    for (std::size_t k = 0; k < grid.size(); ++k) {
      j["gt"].push_back(detail::rounded(grid[k]));
      j["E"].push_back(detail::rounded(s.e_values[k]));
      j["eta"].push_back(s.eta_values[k] ? detail::rounded(*s.eta_values[k]) : nullptr);
    }
    out.body = j.dump(2) + "\n";
  }
  return out;
}

inline CommandResult cmd_ensemble(const RunOptions& o) {
  detail::check_settings(o.settings);
  detail::check_format(o);
  const TimeGrid grid = detail::time_grid(o);
  const std::vector<PureState> states = detail::sample(o);
  const EnsembleSweep ens = ensemble_sweep(states, grid, o.settings, o.threads, o.kind + ":");
  const EnsembleStats& st = ens.stats;

  CommandResult out;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (const auto& s : ens.series) {
      out.results.push_back(detail::result_entry(s.state_label + "@gt=" + format_number(grid[k]),
                                                 s.statuses[k], s.duality_gaps[k]));
    }
  }
  if (o.format == "csv") {
    std::string body = "gt,mean_eta,ci_low,ci_high,n_effective\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
      body += format_number(grid[k]) + "," + detail::nan_cell(st.mean[k]) + "," +
              detail::nan_cell(st.ci_low[k]) + "," + detail::nan_cell(st.ci_high[k]) + "," +
              std::to_string(st.n_effective[k]) + "\n";
    }
    out.body = std::move(body);
  } else {
    nlohmann::json j = {{"gt", nlohmann::json::array()},       {"mean_eta", nlohmann::json::array()},
                        {"ci_low", nlohmann::json::array()},   {"ci_high", nlohmann::json::array()},
                        {"n_effective", nlohmann::json::array()}};
    for (std::size_t k = 0; k < grid.size(); ++k) {
      j["gt"].push_back(detail::rounded(grid[k]));
      j["mean_eta"].push_back(detail::rounded(st.mean[k]));
      j["ci_low"].push_back(detail::rounded(st.ci_low[k]));
      j["ci_high"].push_back(detail::rounded(st.ci_high[k]));
      j["n_effective"].push_back(st.n_effective[k]);
    }
    out.body = j.dump(2) + "\n";
  }
  if (!o.per_state.empty()) {
    std::string body = "state,gt,E,eta\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
      for (std::size_t i = 0; i < ens.series.size(); ++i) {
        const auto& s = ens.series[i];
        body += std::to_string(i) + "," + format_number(grid[k]) + "," +
                format_number(s.e_values[k]) + "," + detail::optional_cell(s.eta_values[k]) + "\n";
      }
    }
    out.per_state_body = std::move(body);
  }
  const std::size_t last = grid.size() - 1;
  out.summary = o.kind + " ensemble, n = " + std::to_string(o.n) + ": mean eta at gt = " +
                format_number(grid[last]) + " is " + format_number(st.mean[last]);
  return out;
}

inline CommandResult cmd_asymptotic(const RunOptions& o) {
  detail::check_settings(o.settings);
  detail::check_format(o);
  std::vector<AsymptoticEntry> entries;
  if (!o.state.empty()) {
    const DensityMatrix rho = detail::required_state(o);
    const GmnResult r = genuine_negativity(asymptotic_map(rho), o.settings);
    entries.push_back({o.state, r.value, r.duality_gap, r.status});
  } else {
    entries = asymptotic_ensemble(detail::sample(o), o.settings, o.threads, o.kind + ":");
  }

  double min_v = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  CommandResult out;
  for (const auto& e : entries) {
    min_v = std::min(min_v, e.value);
    sum += e.value;
    out.results.push_back(detail::result_entry(e.label, e.status, e.duality_gap));
  }
  const double mean = sum / static_cast<double>(entries.size());
  if (o.format == "csv") {
    std::string body = "index,E_infinity\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
      body += std::to_string(i) + "," + format_number(entries[i].value) + "\n";
    }
    out.body = std::move(body);
  } else {
    nlohmann::json j = {{"E_infinity", nlohmann::json::array()},
                        {"min", detail::rounded(min_v)},
                        {"mean", detail::rounded(mean)}};
    for (const auto& e : entries) j["E_infinity"].push_back(detail::rounded(e.value));
    out.body = j.dump(2) + "\n";
  }
  out.summary = "min E_infinity = " + format_number(min_v) + ", mean = " + format_number(mean);
  return out;
}

inline CommandResult run_command(const RunOptions& o) {
  if (o.command == "gmn") return cmd_gmn(o);
  if (o.command == "evolve") return cmd_evolve(o);
  if (o.command == "sweep") return cmd_sweep(o);
  if (o.command == "ensemble") return cmd_ensemble(o);
  if (o.command == "asymptotic") return cmd_asymptotic(o);
  throw std::invalid_argument("unknown command '" + o.command + "'");
}

inline nlohmann::json build_manifest(const RunOptions& o, const CommandResult& r) {
  return {{"tool", "gmnlab"},
          {"version", kVersion},
          {"command", o.command},
          {"parameters", options_to_json(o)},
          {"seed", o.seed},
          {"settings", settings_to_json(o.settings)},
          {"results", r.results}};
}

/// Options recorded in a manifest, ready to be run again.
inline RunOptions options_from_manifest(const nlohmann::json& manifest) {
  if (!manifest.is_object() || !manifest.contains("parameters")) {
    throw Error(ErrorCode::ParseError, "manifest has no 'parameters' object");
  }
  return options_from_json(manifest.at("parameters"));
}

}  // namespace gmnlab::cli
