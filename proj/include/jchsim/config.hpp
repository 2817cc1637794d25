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

#ifndef JCHSIM_CONFIG_HPP
#define JCHSIM_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace jchsim {

using Json = nlohmann::ordered_json;

// Detunings in the cavity sections are in units of g; times in 1/A.

struct ModelSection {
  double omega_d = 1e4;
  double g = 1.0;
  double A = 1e-2;
  double kappa = 1e-3;
  double gamma = 1e-3;
  friend bool operator==(const ModelSection&, const ModelSection&) = default;
};

struct LatticeSection {
  std::string geometry = "chain";  // chain | ring | grid
  std::size_t sites = 3;           // chain, ring
  std::size_t rows = 2;            // grid
  std::size_t cols = 2;
  friend bool operator==(const LatticeSection&, const LatticeSection&) = default;
};

struct SweepSection {
  int n_max = 2;
  int filling = 1;
  double delta_min = 1e-3;
  double delta_max = 1e2;
  std::size_t points = 40;
  friend bool operator==(const SweepSection&, const SweepSection&) = default;
};

struct RampSection {
  double delta_start = 1e-3;
  double delta_end = 1.0;
  double total_time = 50.0;
  std::string shape = "linear";  // linear | smoothstep
  std::size_t steps = 100;
  bool round_trip = false;
  friend bool operator==(const RampSection&, const RampSection&) = default;
};

struct EnsembleSection {
  std::size_t n_traj = 500;
  std::string mode = "during_ramp";  // during_ramp | at_fixed_delta
  double hold_time = 50.0;
  std::size_t hold_samples = 10;
  double jump_tol = 1e-8;
  friend bool operator==(const EnsembleSection&, const EnsembleSection&) = default;
};

struct GateSection {
  double A = 1.0;
  double t_max = 0.0;  // 0 means the mirror time
  std::size_t points = 400;
  std::string mediator = "plus";  // zero | one | plus
  double tol = 1e-9;
  friend bool operator==(const GateSection&, const GateSection&) = default;
};

struct ClusterSection {
  std::size_t rows = 3;
  std::size_t cols = 3;
  double delta_off_min = 5.0;  // units of A
  double delta_off_max = 500.0;
  std::size_t points = 20;
  std::vector<double> gammas{0.0, 0.05, 0.08};  // units of A
  bool include_infinite = true;
  bool postselect = true;
  std::string mediator_init = "plus";  // plus | zero
  std::string mode = "density";        // density | pure
  std::size_t n_traj = 200;
  double substep = 0.02;
  friend bool operator==(const ClusterSection&, const ClusterSection&) = default;
};

struct EstimateSection {
  std::size_t q = 6;
  std::size_t cluster_columns = 156;
  std::size_t circuit_steps = 15;
  double A = 1.0;
  std::vector<std::string> modes{"full", "row_reuse", "circuit"};
  friend bool operator==(const EstimateSection&, const EstimateSection&) = default;
};

struct RunConfig {
  std::string experiment = "sweep";  // sweep | trajectory | gate | cluster | estimate
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string output;            // empty: derived from the experiment name
  std::string format = "csv";    // csv | json
  ModelSection model;
  LatticeSection lattice;
  SweepSection sweep;
  RampSection ramp;
  EnsembleSection ensemble;
  GateSection gate;
  ClusterSection cluster;
  EstimateSection estimate;

  /// Throws ConfigError naming the offending key.
  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

const std::vector<std::string>& experiment_names();

/// Defaults for one experiment.
RunConfig default_config(const std::string& experiment);

/// Strict parse: unknown keys and wrong types raise ConfigError with the
/// dotted key path; syntax errors carry line and column. A "preset" key
/// inside "model" loads the named parameter set before the explicit fields.
RunConfig config_from_json(const Json& j);
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
Json to_json(const RunConfig& c);

}  // namespace jchsim

#endif  // JCHSIM_CONFIG_HPP
