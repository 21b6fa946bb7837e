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

#include "qtpd/io.hpp"

#include <fstream>
#include <stdexcept>

namespace qtpd {

using nlohmann::json;

namespace {

json clusters_to_json(const std::vector<std::pair<std::size_t, std::size_t>>& clusters) {
  json arr = json::array();
  for (const auto& [first, last] : clusters) arr.push_back({first, last});
  return arr;
}

json matrices_to_json(const std::vector<CMatrix>& mats) {
  json arr = json::array();
  for (const CMatrix& m : mats) arr.push_back(matrix_to_json(m));
  return arr;
}

json vector_to_json(const CVector& v) {
  json arr = json::array();
  for (const Complex& z : v) arr.push_back({z.real(), z.imag()});
  return arr;
}

}  // namespace

json matrix_to_json(const CMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("matrix_to_json: not square");
  json entries = json::array();
  for (const Complex& z : m.data()) entries.push_back({z.real(), z.imag()});
  return json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
    throw std::invalid_argument("matrix file needs {dim, entries}");
  }
  const std::size_t dim = j.at("dim").get<std::size_t>();
  const auto& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != dim * dim) {
    throw std::invalid_argument("matrix file: entries must hold dim*dim pairs");
  }
  CMatrix m(dim, dim);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& pair = entries[i];
    if (!pair.is_array() || pair.size() != 2) {
      throw std::invalid_argument("matrix file: each entry is [re, im]");
    }
    m(i / dim, i % dim) = Complex(pair[0].get<double>(), pair[1].get<double>());
  }
  return m;
}

CMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
  }
  return matrix_from_json(j);
}

void write_matrix_file(const std::string& path, const CMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file: " + path);
  out << matrix_to_json(m).dump(2) << "\n";
}

json tpd_to_json(const TensorProductDecomposition& tpd) {
  return json{{"split", {{"n_a", tpd.split.n_a}, {"n_b", tpd.split.n_b}}},
              {"s", tpd.s},
              {"a_ops", matrices_to_json(tpd.a_ops)},
              {"b_ops", matrices_to_json(tpd.b_ops)},
              {"clusters", clusters_to_json(tpd.clusters)}};
}

json factors_to_json(const ExtractedFactors& factors) {
  return json{{"split", {{"n_a", factors.split.n_a}, {"n_b", factors.split.n_b}}},
              {"s", factors.s},
              {"a_ops", matrices_to_json(factors.a_ops)},
              {"threshold", factors.threshold},
              {"clusters", clusters_to_json(factors.clusters)}};
}

json snapshot_to_json(const ChoiReducedState& snapshot) {
  json j{{"split", {{"n_a", snapshot.split.n_a}, {"n_b", snapshot.split.n_b}}},
         {"rho", matrix_to_json(snapshot.rho)}};
  switch (snapshot.method) {
    case SnapshotMethod::choi_exact:
      j["method"] = "choi-exact";
      break;
    case SnapshotMethod::choi_tomographic:
      j["method"] = "choi-tomographic";
      break;
    case SnapshotMethod::sequential_exact:
      j["method"] = "sequential-exact";
      break;
    case SnapshotMethod::sequential_sampled:
      j["method"] = "sequential-sampled";
      break;
  }
  if (snapshot.tomography.has_value()) {
    j["tomography"] = {{"shots_per_setting", snapshot.tomography->shots_per_setting},
                       {"seed", snapshot.tomography->seed},
                       {"n_settings", snapshot.tomography->n_settings}};
  }
  return j;
}

json distillation_to_json(const DistillationResult& result) {
  json branches = json::array();
  for (const auto& branch : result.branches) {
    json b{{"k", branch.k},
           {"probability", branch.probability},
           {"null_branch", branch.null_branch}};
    if (!branch.null_branch) {
      b["post_selection_cost"] = branch.post_selection_cost;
      b["state_b"] = vector_to_json(branch.state_b);
    }
    branches.push_back(std::move(b));
  }
  return json{{"branches", std::move(branches)},
              {"residual_probability", result.residual_probability}};
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected an object");
  if (!j.contains("schema") || j.at("schema").get<int>() != 1) {
    throw std::invalid_argument("config: unsupported schema (expected 1)");
  }

  ExperimentConfig config;
  const auto& model = j.at("model");
  config.model.n_qubits = model.at("n_qubits").get<std::size_t>();
  for (const auto& edge : model.at("edges")) {
    if (!edge.is_array() || edge.size() != 2) {
      throw std::invalid_argument("config: each edge is [i, j]");
    }
    config.model.edges.emplace_back(edge[0].get<std::size_t>(),
                                    edge[1].get<std::size_t>());
  }
  const auto& couplings = model.at("j");
  if (!couplings.is_array() || couplings.size() != 3) {
    throw std::invalid_argument("config: j must be [J_x, J_y, J_z]");
  }
  config.model.j_x = couplings[0].get<double>();
  config.model.j_y = couplings[1].get<double>();
  config.model.j_z = couplings[2].get<double>();

  config.a_qubits = j.at("a_qubits").get<std::vector<std::size_t>>();
  const auto& time = j.at("time");
  config.grid.start = time.at("start").get<double>();
  config.grid.end = time.at("end").get<double>();
  config.grid.points = time.at("points").get<std::size_t>();
  config.initial_state = j.at("initial_state").get<std::string>();

  const std::string pipeline = j.at("pipeline").get<std::string>();
  if (pipeline == "oracle") {
    config.pipeline = PipelineMode::oracle;
  } else if (pipeline == "choi-exact") {
    config.pipeline = PipelineMode::choi_exact;
  } else if (pipeline == "choi-tomographic") {
    config.pipeline = PipelineMode::choi_tomographic;
  } else if (pipeline == "sequential") {
    config.pipeline = PipelineMode::sequential;
  } else {
    throw std::invalid_argument("config: unknown pipeline \"" + pipeline + "\"");
  }

  config.shots = j.value("shots", std::size_t{0});
  config.seed = j.value("seed", std::uint64_t{0});
  config.entangling_powers = j.value("entangling_powers", false);
  return config;
}

ExperimentConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace qtpd
