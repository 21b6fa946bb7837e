// Copyright 2026 The qtpd Authors
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

#include "qtpd/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qtpd/analysis.hpp"
#include "qtpd/heisenberg.hpp"
#include "qtpd/io.hpp"
#include "qtpd/qtpd.hpp"
#include "qtpd/sweep.hpp"
#include "qtpd/tpd.hpp"

namespace qtpd {

namespace {

using nlohmann::json;

BipartiteSplit parse_split(const std::string& spec) {
  const auto comma = spec.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("--split expects nA,nB");
  }
  std::size_t n_a = 0, n_b = 0;
  try {
    n_a = std::stoul(spec.substr(0, comma));
    n_b = std::stoul(spec.substr(comma + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("--split expects nA,nB");
  }
  return BipartiteSplit(n_a, n_b);
}

void parse_couplings(const std::string& spec, double& jx, double& jy, double& jz) {
  std::istringstream in(spec);
  char c1 = 0, c2 = 0;
  if (!(in >> jx >> c1 >> jy >> c2 >> jz) || c1 != ',' || c2 != ',') {
    throw std::invalid_argument("--J expects jx,jy,jz");
  }
}

CVector parse_state(const std::string& spec) {
  const double r = 1.0 / std::sqrt(2.0);
  CVector amps{1.0};
  for (char c : spec) {
    CVector factor;
    switch (c) {
      case '0':
        factor = {1.0, 0.0};
        break;
      case '1':
        factor = {0.0, 1.0};
        break;
      case '+':
        factor = {r, r};
        break;
      case '-':
        factor = {r, -r};
        break;
      default:
        throw std::invalid_argument("--state characters must be 0, 1, + or -");
    }
    CVector next(amps.size() * 2);
    for (std::size_t v = 0; v < amps.size(); ++v) {
      next[2 * v] = amps[v] * factor[0];
      next[2 * v + 1] = amps[v] * factor[1];
    }
    amps = std::move(next);
  }
  return amps;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write output file: " + out_path);
  out << text;
}

std::uint64_t env_default_seed() {
  const char* env = std::getenv("QTPD_SEED");
  if (env == nullptr) return 0;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw std::invalid_argument("QTPD_SEED must be an unsigned integer");
  }
}

ExtractedFactors factors_from_tpd(const TensorProductDecomposition& tpd) {
  ExtractedFactors factors;
  factors.split = tpd.split;
  factors.s = tpd.s;
  factors.a_ops = tpd.a_ops;
  factors.threshold = 0.0;
  factors.clusters = tpd.clusters;
  return factors;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Tensor product decomposition toolkit"};
  app.require_subcommand(1);

  std::string matrix_path, split_spec, out_path;
  std::string mode = "choi-exact", state_spec, config_path, couplings_spec;
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double threshold = -1.0, tol = 1e-8, time_value = 0.0;
  int branch_index = -1;

  auto* tpd_cmd = app.add_subcommand("tpd", "Classical decomposition of a matrix");
  tpd_cmd->add_option("matrix", matrix_path, "matrix JSON file")->required();
  tpd_cmd->add_option("--split", split_spec, "qubit split nA,nB")->required();
  tpd_cmd->add_option("--out", out_path, "output path (default stdout)");

  auto* qtpd_cmd = app.add_subcommand("qtpd", "Quantum-pipeline factor extraction");
  qtpd_cmd->add_option("matrix", matrix_path, "matrix JSON file")->required();
  qtpd_cmd->add_option("--split", split_spec, "qubit split nA,nB")->required();
  qtpd_cmd->add_option("--mode", mode,
                       "choi-exact | choi-tomographic | sequential");
  qtpd_cmd->add_option("--shots", shots, "shots per tomography setting");
  qtpd_cmd->add_option("--seed", seed, "sampling seed")
      ->each([&](const std::string&) { seed_given = true; });
  qtpd_cmd->add_option("--threshold", threshold,
                       "eigenvalue cut (default: noise-derived)");
  qtpd_cmd->add_option("--out", out_path, "output path (default stdout)");

  auto* distill_cmd =
      app.add_subcommand("distill", "Distill B-side branch states");
  distill_cmd->add_option("matrix", matrix_path, "matrix JSON file")->required();
  distill_cmd->add_option("--split", split_spec, "qubit split nA,nB")->required();
  distill_cmd->add_option("--state", state_spec, "B input state, chars 01+-")
      ->required();
  distill_cmd->add_option("--k", branch_index, "report only branch k");
  distill_cmd->add_option("--out", out_path, "output path (default stdout)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a configured time sweep");
  sweep_cmd->add_option("config", config_path, "config JSON file")->required();
  sweep_cmd->add_option("--out", out_path, "CSV path (default stdout)");

  auto* analytic_cmd =
      app.add_subcommand("analytic2q", "Two-qubit closed-form quantities");
  analytic_cmd->add_option("--J", couplings_spec, "couplings jx,jy,jz")->required();
  analytic_cmd->add_option("--t", time_value, "evolution time")->required();
  analytic_cmd->add_option("--out", out_path, "output path (default stdout)");

  auto* dfs_cmd = app.add_subcommand(
      "dfs-check", "Additive-spectrum (conjugate-product) check");
  dfs_cmd->add_option("matrix", matrix_path, "matrix JSON file")->required();
  dfs_cmd->add_option("--split", split_spec, "qubit split nA,nB")->required();
  dfs_cmd->add_option("--tol", tol, "congruence tolerance");
  dfs_cmd->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!seed_given) seed = env_default_seed();

    if (tpd_cmd->parsed()) {
      const CMatrix u = read_matrix_file(matrix_path);
      const BipartiteSplit split = parse_split(split_spec);
      emit(out_path, tpd_to_json(classical_tpd(u, split)).dump(2) + "\n");
    } else if (qtpd_cmd->parsed()) {
      const CMatrix u = read_matrix_file(matrix_path);
      const BipartiteSplit split = parse_split(split_spec);
      ChoiReducedState snapshot;
      if (mode == "choi-exact") {
        snapshot = choi_reduced_exact(u, split);
      } else if (mode == "choi-tomographic") {
        if (shots == 0) throw std::invalid_argument("choi-tomographic needs --shots");
        snapshot = tomographic_snapshot(u, split, shots, seed);
      } else if (mode == "sequential") {
        snapshot = sequential_snapshot(u, split, shots, seed);
      } else {
        throw std::invalid_argument("unknown mode \"" + mode + "\"");
      }
      const double cut =
          threshold > 0.0 ? threshold : default_rank_threshold(snapshot);
      json result = factors_to_json(extract_factors(snapshot, cut));
      result["snapshot"] = snapshot_to_json(snapshot);
      emit(out_path, result.dump(2) + "\n");
    } else if (distill_cmd->parsed()) {
      const CMatrix u = read_matrix_file(matrix_path);
      const BipartiteSplit split = parse_split(split_spec);
      if (state_spec.size() != split.n_b) {
        throw std::invalid_argument("--state needs one character per B qubit");
      }
      const ExtractedFactors factors = factors_from_tpd(classical_tpd(u, split));
      const DistillationResult result = distill(u, factors, parse_state(state_spec));
      json j = distillation_to_json(result);
      if (branch_index >= 0) {
        if (static_cast<std::size_t>(branch_index) >= result.branches.size()) {
          throw std::invalid_argument("--k out of range");
        }
        j = j["branches"][branch_index];
      }
      emit(out_path, j.dump(2) + "\n");
    } else if (sweep_cmd->parsed()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot open config file: " + config_path);
      json j;
      try {
        in >> j;
      } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("invalid JSON config: ") + e.what());
      }
      ExperimentConfig config = config_from_json(j);
      if (!j.contains("seed")) config.seed = seed;
      const std::vector<SweepRow> rows = run_sweep(config);
      std::ostringstream csv;
      write_csv(rows, config.entangling_powers, csv);
      emit(out_path, csv.str());
    } else if (analytic_cmd->parsed()) {
      double jx = 0.0, jy = 0.0, jz = 0.0;
      parse_couplings(couplings_spec, jx, jy, jz);
      const AnalyticTwoQubit a = analytic_two_qubit(jx, jy, jz, time_value);
      const json j{{"g",
                    {{a.g0.real(), a.g0.imag()},
                     {a.gx.real(), a.gx.imag()},
                     {a.gy.real(), a.gy.imag()},
                     {a.gz.real(), a.gz.imag()}}},
                   {"s", a.s},
                   {"rho1", matrix_to_json(a.rho1)},
                   {"z_expectation", a.z_expectation},
                   {"entropy", a.entropy},
                   {"e1", a.e1}};
      emit(out_path, j.dump(2) + "\n");
    } else if (dfs_cmd->parsed()) {
      const CMatrix u = read_matrix_file(matrix_path);
      const BipartiteSplit split = parse_split(split_spec);
      const DfsCheckResult result = decoherence_free_check(u, split, tol);
      const json j{{"decomposable", result.decomposable},
                   {"phi", result.phi},
                   {"psi", result.psi},
                   {"nearest_miss", result.nearest_miss}};
      emit(out_path, j.dump(2) + "\n");
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qtpd
