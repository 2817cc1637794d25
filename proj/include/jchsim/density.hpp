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

#ifndef JCHSIM_DENSITY_HPP
#define JCHSIM_DENSITY_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <utility>
#include <vector>

#include "jchsim/hilbert.hpp"

namespace jchsim {

// Registers of n qubits; qubit k is bit (n - 1 - k) of the basis index.

using Matrix2c = Eigen::Matrix2cd;

/// rho <- u_k rho u_k^dagger
void apply_single_qubit(CMatrix& rho, std::size_t n, std::size_t k, const Matrix2c& u);
/// psi <- u_k psi
void apply_single_qubit(CVector& psi, std::size_t n, std::size_t k, const Matrix2c& u);
/// rho <- sum_a K_a rho K_a^dagger on qubit k
void apply_kraus(CMatrix& rho, std::size_t n, std::size_t k, const std::vector<Matrix2c>& kraus);
/// Amplitude damping with decay probability p on qubit k.
void amplitude_damp(CMatrix& rho, std::size_t n, std::size_t k, double p);
/// P rho P for P = |outcome><outcome|_k; the trace drops accordingly.
CMatrix project(const CMatrix& rho, std::size_t n, std::size_t k, int outcome);
CVector project(const CVector& psi, std::size_t n, std::size_t k, int outcome);
/// Pauli string X^xmask Z^zmask (bitmasks over basis indices) applied on both sides.
void apply_pauli(CMatrix& rho, std::size_t xmask, std::size_t zmask);
void apply_pauli(CVector& psi, std::size_t xmask, std::size_t zmask);

/// Reduced state of the qubits in `keep`, in that order.
CMatrix reduced_density_matrix(const CMatrix& rho, std::size_t n, const std::vector<std::size_t>& keep);
CMatrix reduced_density_matrix(const CVector& psi, std::size_t n, const std::vector<std::size_t>& keep);

/// rho_part on `part` (in that order) tensored with the pure state `rest`
/// on the remaining qubits (ascending order).
CMatrix embed_register(const CMatrix& rho_part, std::size_t n, const std::vector<std::size_t>& part,
                       const CVector& rest);

/// Product state from per-qubit states.
CVector product_state(const std::vector<Eigen::Vector2cd>& qubits);

/// prod_edges CZ |+>^n
CVector graph_state(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

/// Hadamard gate.
Matrix2c hadamard();

/// exp(-i H t) for an excitation-conserving H on n qubits, stored as one
/// dense block per excitation number.
class BlockPropagator {
 public:
  BlockPropagator(const CMatrix& h, std::size_t n, double t);
  void apply(CMatrix& rho) const;  // rho <- U rho U^dagger
  void apply(CVector& psi) const;  // psi <- U psi
  /// Largest |H_ij| connecting different excitation numbers (0 if conserving).
  static double sector_leak(const CMatrix& h, std::size_t n);

 private:
  std::vector<std::vector<Eigen::Index>> index_;
  std::vector<CMatrix> blocks_;
};

}  // namespace jchsim

#endif  // JCHSIM_DENSITY_HPP
