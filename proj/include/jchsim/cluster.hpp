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

#ifndef JCHSIM_CLUSTER_HPP
#define JCHSIM_CLUSTER_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "jchsim/clifford.hpp"
#include "jchsim/hilbert.hpp"
#include "jchsim/spin_map.hpp"

namespace jchsim {

enum class SiteRole { Logical, Mediator, Switchable };

/// Electrode groups of the mediator sites. Switchable sites belong to none
/// and stay detuned.
enum class ElectrodeGroup { A = 0, B = 1, C = 2, D = 3, None = 4 };

enum class MediatorInit { Plus, Zero };

/// Entangling chain (logical, mediator, logical).
struct Chain {
  std::size_t a = 0;
  std::size_t mediator = 0;
  std::size_t b = 0;
  friend bool operator==(const Chain&, const Chain&) = default;
};

/// Grid of qubits driven through detuning steps. Times and energies are
/// absolute, in the units of A.
struct GridProtocol {
  std::size_t rows = 3;
  std::size_t cols = 3;
  std::vector<SiteRole> roles;
  std::vector<ElectrodeGroup> groups;
  /// Groups detuned in each step; the default sequence detunes
  /// {B,C,D}, {A,C,D}, {A,B,C}, {A,B,D}.
  std::vector<std::vector<ElectrodeGroup>> step_detuned;
  double A = 1.0;
  double delta_off = std::numeric_limits<double>::infinity();  // inf removes the detuned sites' edges
  double gamma = 0.0;                                           // amplitude damping rate per qubit
  double gate_time = 0.0;                                       // 0 means the mirror time
  double substep = 0.02;                                        // splitting step for gamma > 0, in 1/A
  bool postselect = true;                                       // keep only all-zero mediator outcomes
  MediatorInit mediator_init = MediatorInit::Plus;
  bool skip_empty_steps = true;

  std::size_t num_sites() const { return rows * cols; }
  std::size_t site(std::size_t r, std::size_t c) const { return r * cols + c; }
  double effective_gate_time() const;
  /// Logical sites in row-major order; logical qubit l starts at element l.
  std::vector<std::size_t> logical_sites() const;
  /// Sites detuned in step k.
  std::vector<bool> detuned_sites(std::size_t step) const;
  void validate() const;
};

/// Roles and electrode groups for an odd rows x cols grid (both >= 3):
/// logical qubits at (even, even), mediators between two logical
/// neighbours, switchable sites at (odd, odd).
GridProtocol assign_roles(std::size_t rows, std::size_t cols, double A = 1.0);

/// On-resonance chains of each step. Throws ConfigError naming the step
/// when an on-resonance component is not a (logical, mediator, logical)
/// path or an idle logical site.
std::vector<std::vector<Chain>> step_chains(const GridProtocol& p);

/// rho <- exp(t L) rho for the XY lattice with amplitude damping at rate
/// gamma on every qubit. gamma = 0 is exact; otherwise Strang splitting
/// with steps of at most substep_over_A / A.
void lindblad_evolve(CMatrix& rho, const QubitLattice& q, double t, double gamma, double substep_over_A = 0.02);

enum class SimulationMode { DensityMatrix, PureTrajectories };

struct ProtocolOptions {
  SimulationMode mode = SimulationMode::DensityMatrix;
  std::size_t max_density_qubits = 12;
  std::size_t max_pure_qubits = 22;
  std::size_t n_traj = 200;  // trajectory mode with gamma > 0
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

struct ProtocolResult {
  double fidelity = 0.0;              // with the frame correction; post-selected when requested
  double fidelity_uncorrected = 0.0;  // same state, no correction
  double postselect_probability = 0.0;  // probability of all-zero mediator outcomes
  double trace_error = 0.0;           // |sum of branch traces - 1|
  std::size_t branch_count = 0;       // outcome branches carried to the end
  std::vector<std::pair<std::size_t, std::size_t>> logical_edges;  // graph of the target state
  CliffordFrame frame;                // frame of the all-zero branch
  CMatrix logical_state;              // corrected logical state (normalized)
};

/// Runs every step of the protocol from |+> on all sites (mediators per
/// mediator_init), measuring the mediators of each step in the
/// computational basis. Fidelity is against the graph state of the
/// created edges after undoing the tracked Pauli byproducts.
ProtocolResult run_protocol(const GridProtocol& p, const ProtocolOptions& opts = {});

struct FidelityPoint {
  double delta_off = 0.0;  // in units of A; inf for removed edges
  double gamma = 0.0;      // in units of A
  double fidelity = 0.0;
  double postselect_probability = 0.0;
  std::size_t branch_count = 0;
};

/// Fidelity for each delta_off (units of A) at the protocol's gamma.
std::vector<FidelityPoint> delta_off_scan(const GridProtocol& base, const std::vector<double>& delta_off_over_A,
                                          const ProtocolOptions& opts = {});

/// Least-squares slope of log(1 - F) against log(delta_off) over the
/// finite points with 1 - F > floor.
double error_scaling_slope(const std::vector<FidelityPoint>& points, double floor = 1e-14);

/// True when 1 - F strictly decreases along the points.
bool error_strictly_decreasing(const std::vector<FidelityPoint>& points);

// Box cluster to linear cluster

/// H x H x Z x Z on the 3x3 logical order (0,0), (0,2), (2,0), (2,2).
CMatrix box_to_linear_unitary();
/// Linear path of the resulting cluster, as logical indices.
std::vector<std::size_t> box_to_linear_path();
/// sign * prod_k X_k^x Z_k^z (Z applied first on each qubit).
struct PauliString {
  std::vector<Pauli> ops;
  int sign = 1;
};
/// Stabilizer generators X_k Z_(neighbours) of a linear cluster along `path`.
std::vector<PauliString> linear_cluster_stabilizers(std::size_t n, const std::vector<std::size_t>& path);
/// Re <psi|S|psi>.
double expectation(const CVector& psi, const PauliString& s);
/// Dense operator of a Pauli string.
CMatrix pauli_string_matrix(const PauliString& s);

// Resources

enum class ResourceMode { Full, RowReuse, Circuit };

struct ResourceRequest {
  std::size_t q = 6;                 // logical qubits
  std::size_t cluster_columns = 156; // algorithm depth in cluster columns
  std::size_t circuit_steps = 15;    // entangling steps of the direct circuit
  double A = 1.0;
};

struct ResourceEstimate {
  ResourceMode mode = ResourceMode::Full;
  std::size_t q = 0;
  std::size_t cluster_width = 0;  // 2q - 1
  std::size_t array_rows = 0;
  std::size_t array_cols = 0;
  std::size_t steps = 0;
  double time_over_A = 0.0;       // wall time in units of 1/A
};

ResourceEstimate estimate_resources(const ResourceRequest& req, ResourceMode mode);
std::string to_string(ResourceMode mode);
ResourceMode resource_mode_from_string(const std::string& s);

// Row reuse

/// Three-column register: logical rows at even physical rows, column 0
/// holds the data, column 1 the mediators, column 2 the fresh qubits.
struct RowReuseConfig {
  std::size_t logical_rows = 1;
  double A = 1.0;
  double delta_off = std::numeric_limits<double>::infinity();
  double gamma = 0.0;
  double gate_time = 0.0;  // 0 means the mirror time
  double substep = 0.02;   // in 1/A
  MediatorInit mediator_init = MediatorInit::Plus;

  std::size_t physical_rows() const { return 2 * logical_rows - 1; }
  std::size_t num_sites() const { return 3 * physical_rows(); }
  void validate() const;
};

/// One cycle: vertical entangling of the fresh column, horizontal
/// mediated gates (the output moves to column 0), X measurement of the
/// old data, Pauli feed-forward, reinitialization. Input and output are
/// logical-register density matrices; ideally output = C rho C^dagger
/// with C = CZ(column graph) H^{x L}.
CMatrix row_reuse_step(const RowReuseConfig& cfg, const CMatrix& logical_rho);

/// States after 0, 1, ..., cycles cycles (element 0 is the input).
std::vector<CMatrix> row_reuse_cycles(const RowReuseConfig& cfg, const CMatrix& logical_rho, std::size_t cycles);

/// Ideal single-cycle Clifford for L logical rows.
CMatrix row_reuse_ideal_cycle(std::size_t logical_rows);

}  // namespace jchsim

#endif  // JCHSIM_CLUSTER_HPP
