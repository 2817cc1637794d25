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

#ifndef JCHSIM_SPIN_MAP_HPP
#define JCHSIM_SPIN_MAP_HPP

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <numbers>
#include <vector>

#include "jchsim/hilbert.hpp"
#include "jchsim/model.hpp"

namespace jchsim {

using Matrix4c = Eigen::Matrix4cd;
using Vector2c = Eigen::Vector2cd;

/// Qubits on a lattice with XY exchange A per edge. offsets[k] is the
/// on-site energy of |1>_k; an infinite offset removes the site's edges
/// (idealized switching).
struct QubitLattice {
  LatticeSpec lattice;
  std::vector<double> offsets;
  double A = 0.01;

  static QubitLattice uniform(LatticeSpec lattice, double A);
  std::size_t num_qubits() const { return lattice.num_sites(); }
  bool decoupled(std::size_t k) const;
  void validate() const;
};

/// Qubit k is bit (n - 1 - k) of the basis index, so qubit 0 is the most
/// significant one, matching the cavity basis ordering.
inline std::size_t qubit_bit(std::size_t n, std::size_t k) { return std::size_t{1} << (n - 1 - k); }

/// sum_k delta_k |1><1|_k + A sum_edges (s+_k s-_l + h.c.), s+ = |1><0|.
SparseMatrix build_xy_hamiltonian(const QubitLattice& q);
/// sum_k |1><1|_k.
SparseMatrix qubit_excitation_operator(std::size_t num_qubits);

/// Hamiltonian restricted to one excitation, site basis.
CMatrix single_excitation_hamiltonian(const QubitLattice& q);
/// exp(-i H t) in the single-excitation sector.
CMatrix single_excitation_propagator(const QubitLattice& q, double t);

/// |<N|exp(-iHt)|1>| on a uniform open chain of n sites.
double transfer_fidelity(std::size_t n, double t, double A);

/// Mirror time of the 3-site chain with the s+ = |1><0| convention.
inline double mirror_time(double A) { return std::numbers::pi / (std::numbers::sqrt2 * A); }
/// The same with a doubled coupling, as when s+ is read as sx + i sy.
inline double mirror_time_doubled_coupling(double A) { return std::numbers::pi / (2.0 * std::numbers::sqrt2 * A); }

/// Half the splitting of the two end-dominated single-excitation levels of
/// a 3-chain whose middle site is detuned by delta_off.
double end_to_end_coupling(double A, double delta_off);

// Mediated gate

struct ConditionalGate {
  int outcome = 0;
  double probability = 0.0;  // ||K||_F^2 / 4, the probability for a maximally mixed input
  Matrix4c kraus = Matrix4c::Zero();     // <outcome|_m U |mediator>
  Matrix4c gate = Matrix4c::Zero();      // kraus / sqrt(probability), zero when probability = 0
  double unitary_defect = 1.0;           // max |gate^dagger gate - 1|
  double cp_distance = 0.0;              // invariant distance of SWAP * gate from CZ
};

/// Three-qubit chain (a, mediator, b) with uniform coupling A evolved for
/// gate_time, mediator measured in the computational basis. Operators act
/// on (a, b) with a as the most significant qubit.
std::array<ConditionalGate, 2> mediated_gate(double gate_time, const Vector2c& mediator, double A);

/// Makhlin invariants (G1, G2) of a two-qubit unitary.
struct MakhlinInvariants {
  std::complex<double> g1;
  std::complex<double> g2;
};
MakhlinInvariants makhlin_invariants(const Matrix4c& u);
/// |G1(u) - G1(v)| + |G2(u) - G2(v)|.
double local_equivalence_distance(const Matrix4c& u, const Matrix4c& v);

Matrix4c swap_gate();
Matrix4c cz_gate();

struct GateScanRow {
  double time = 0.0;
  double p0 = 0.0;
  double p1 = 0.0;
  double unitary_defect_0 = 0.0;
  double unitary_defect_1 = 0.0;
  double cp_equiv_0 = 0.0;
  double cp_equiv_1 = 0.0;
};

/// t_k = k t_max / points for k = 1..points.
std::vector<GateScanRow> gate_time_scan(double A, double t_max, std::size_t points, const Vector2c& mediator,
                                        std::size_t threads = 1);

/// Rows where both conditional maps are unitary and CP-equivalent within tol.
std::vector<std::size_t> calibrated_rows(const std::vector<GateScanRow>& rows, double tol);

// Cavity model against the qubit model

struct MappingReport {
  double max_deviation = 0.0;  // max over times and sites of |P_jch - P_xy|
  double max_leakage = 0.0;    // max over times of 1 - population of the qubit subspace
  double coupling = 0.0;       // effective exchange used by the qubit model
  std::vector<double> times;
  std::vector<std::vector<double>> jch_populations;  // [time][site]
  std::vector<std::vector<double>> xy_populations;
};

/// Evolves a qubit bitstring (|0> = |g,0>, |1> = dressed |1->) under the
/// cavity model and under the XY model with the polariton exchange
/// A |<1-|a^dagger|g,0>|^2, comparing |1> populations on `points` times in
/// [0, t_max]. Both models start from the same product state.
MappingReport compare_jch_vs_xy(std::size_t n, const ModelParams& params, double t_max, std::size_t points,
                                const std::vector<int>& bits = {}, int n_max = 2);

}  // namespace jchsim

#endif  // JCHSIM_SPIN_MAP_HPP
