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

#ifndef QTPD_IO_HPP_
#define QTPD_IO_HPP_

#include <string>

#include "json.hpp"
#include "qtpd/cmatrix.hpp"
#include "qtpd/qtpd.hpp"
#include "qtpd/sweep.hpp"
#include "qtpd/tpd.hpp"

namespace qtpd {

/// Matrix file format: {"dim": d, "entries": [[re, im], ...]} with d*d
/// row-major entries.  Doubles survive a write/read cycle bit exactly
/// (shortest-round-trip serialization).
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);
CMatrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const CMatrix& m);

nlohmann::json tpd_to_json(const TensorProductDecomposition& tpd);
nlohmann::json factors_to_json(const ExtractedFactors& factors);
nlohmann::json snapshot_to_json(const ChoiReducedState& snapshot);
nlohmann::json distillation_to_json(const DistillationResult& result);

/// Sweep config schema (versioned, "schema": 1):
///   {
///     "schema": 1,
///     "model": {"n_qubits": N, "edges": [[i, j], ...],
///               "j": [J_x, J_y, J_z]},
///     "a_qubits": [q, ...],
///     "time": {"start": t0, "end": t1, "points": P},
///     "initial_state": "<one char per qubit from 01+-, A block first>",
///     "pipeline": "oracle" | "choi-exact" | "choi-tomographic" | "sequential",
///     "shots": S,                  // optional, default 0 (exact)
///     "seed": R,                   // optional, default 0
///     "entangling_powers": bool    // optional, default false
///   }
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig read_config_file(const std::string& path);

}  // namespace qtpd

#endif  // QTPD_IO_HPP_
