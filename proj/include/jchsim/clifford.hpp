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

#ifndef JCHSIM_CLIFFORD_HPP
#define JCHSIM_CLIFFORD_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jchsim/hilbert.hpp"

namespace jchsim {

/// X^x Z^z on one qubit.
struct Pauli {
  bool x = false;
  bool z = false;
  char label() const { return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I'); }
  friend bool operator==(const Pauli&, const Pauli&) = default;
};

/// Pauli byproduct i^phase prod_l X_l^x Z_l^z on logical qubits plus the
/// sites currently holding each logical qubit. The physical state equals
/// byproduct * (ideal state); relabelings from SWAP gates only move
/// logical qubits between sites. All bookkeeping is exact.
class CliffordFrame {
 public:
  CliffordFrame() = default;
  /// Logical qubit l starts at sites[l].
  explicit CliffordFrame(std::vector<std::size_t> sites);

  std::size_t num_logical() const { return paulis_.size(); }
  const Pauli& byproduct(std::size_t logical) const { return paulis_.at(logical); }
  int phase() const { return phase_; }  // power of i, mod 4

  /// byproduct <- (X^x Z^z on `logical`) * byproduct
  void multiply(std::size_t logical, Pauli p);
  /// byproduct <- CZ byproduct CZ (a CZ applied after the byproduct)
  void conjugate_cz(std::size_t a, std::size_t b);
  /// byproduct <- H byproduct H
  void conjugate_h(std::size_t logical);

  std::size_t site_of(std::size_t logical) const { return sites_.at(logical); }
  std::optional<std::size_t> logical_at(std::size_t site) const;
  /// Exchange the contents of two sites (either may be a non-logical site).
  void swap_sites(std::size_t s1, std::size_t s2);

  /// Frame of applying *this first and then `later` (whose logical labels
  /// refer to the same logical qubits).
  CliffordFrame then(const CliffordFrame& later) const;

  /// Dense operator of the byproduct on the logical register, logical 0
  /// as the most significant qubit.
  CMatrix byproduct_matrix() const;

  std::string to_string() const;

  friend bool operator==(const CliffordFrame&, const CliffordFrame&) = default;

 private:
  std::vector<Pauli> paulis_;
  std::vector<std::size_t> sites_;
  int phase_ = 0;
};

}  // namespace jchsim

#endif  // JCHSIM_CLIFFORD_HPP
