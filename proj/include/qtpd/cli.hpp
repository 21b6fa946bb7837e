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

#ifndef QTPD_CLI_HPP_
#define QTPD_CLI_HPP_

namespace qtpd {

/// Command line driver.  Subcommands:
///   tpd <matrix.json> --split nA,nB            classical decomposition
///   qtpd <matrix.json> --split nA,nB --mode choi-exact|choi-tomographic|sequential
///        [--shots N] [--seed S] [--threshold x] quantum-pipeline factors
///   distill <matrix.json> --split nA,nB --state <chars> [--k idx]
///   sweep <config.json>                        time sweep, CSV output
///   analytic2q --J jx,jy,jz --t <time>         two-qubit closed forms
///   dfs-check <matrix.json> --split nA,nB [--tol x]
/// Results go to stdout (JSON, or CSV for sweep) or to --out <path>.
/// QTPD_SEED in the environment supplies the default seed where one is not
/// given explicitly.  Exit codes: 0 success, 1 usage or validation error,
/// 2 numerical failure.
int run_cli(int argc, const char* const* argv);

}  // namespace qtpd

#endif  // QTPD_CLI_HPP_
