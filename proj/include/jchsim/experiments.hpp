// Copyright 2026 The jchsim Authors
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

#ifndef JCHSIM_EXPERIMENTS_HPP
#define JCHSIM_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "jchsim/config.hpp"
#include "jchsim/hilbert.hpp"
#include "jchsim/model.hpp"
#include "jchsim/spin_map.hpp"

namespace jchsim {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// 17 significant digits, '.' decimal point; inf and nan spelled out.
std::string format_double(double v);

/// Header row plus one line per row, '\n' endings.
void write_csv(std::ostream& out, const Table& t);
/// {"columns": [...], "rows": [[...], ...]}; non-finite numbers as strings.
Json table_to_json(const Table& t);

struct ExperimentOutput {
  Table table;       // empty columns for JSON-only experiments
  Json data;         // estimate results
  Json summary;      // derived flags and scalars, stored in the manifest
};

ModelParams model_params(const ModelSection& m);
LatticeSpec make_lattice(const LatticeSection& l);

/// Label of a two-qubit gate up to global phase among SWAP.CP,
/// SWAP.(Z x Z).CP, CP, SWAP and identity; "other" otherwise.
std::string gate_label(const Matrix4c& u, double tol = 1e-6);

ExperimentOutput run_sweep(const RunConfig& c);
ExperimentOutput run_trajectory(const RunConfig& c);
ExperimentOutput run_gate(const RunConfig& c);
ExperimentOutput run_cluster(const RunConfig& c);
ExperimentOutput run_estimate(const RunConfig& c);
/// Dispatches on c.experiment.
ExperimentOutput run_experiment(const RunConfig& c);

/// Manifest written next to every data file.
Json make_manifest(const RunConfig& c, const ExperimentOutput& out, double wall_seconds,
                   const std::string& data_file);

std::string version_string();

}  // namespace jchsim

#endif  // JCHSIM_EXPERIMENTS_HPP
