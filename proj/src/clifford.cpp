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

#include "jchsim/clifford.hpp"

#include <algorithm>

#include "jchsim/errors.hpp"

namespace jchsim {

CliffordFrame::CliffordFrame(std::vector<std::size_t> sites) : paulis_(sites.size()), sites_(std::move(sites)) {
  auto sorted = sites_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ConfigError("CliffordFrame: two logical qubits on one site");
}

void CliffordFrame::multiply(std::size_t logical, Pauli p) {
  auto& b = paulis_.at(logical);
  // X^px Z^pz X^bx Z^bz = (-1)^(pz bx) X^(px+bx) Z^(pz+bz)
  if (p.z && b.x) phase_ = (phase_ + 2) % 4;
  b.x ^= p.x;
  b.z ^= p.z;
}

void CliffordFrame::conjugate_cz(std::size_t a, std::size_t b) {
  if (a == b) throw ConfigError("CliffordFrame: CZ on one qubit");
  auto& pa = paulis_.at(a);
  auto& pb = paulis_.at(b);
  // X_a -> X_a Z_b, X_b -> X_b Z_a; reordering Z_b past X_b costs a sign
  if (pa.x && pb.x) phase_ = (phase_ + 2) % 4;
  const bool za = pa.z ^ pb.x;
  const bool zb = pb.z ^ pa.x;
  pa.z = za;
  pb.z = zb;
}

void CliffordFrame::conjugate_h(std::size_t logical) {
  auto& p = paulis_.at(logical);
  // H X^x Z^z H = Z^x X^z = (-1)^(xz) X^z Z^x
  if (p.x && p.z) phase_ = (phase_ + 2) % 4;
  std::swap(p.x, p.z);
}

std::optional<std::size_t> CliffordFrame::logical_at(std::size_t site) const {
  auto it = std::find(sites_.begin(), sites_.end(), site);
  if (it == sites_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - sites_.begin());
}

void CliffordFrame::swap_sites(std::size_t s1, std::size_t s2) {
  for (auto& s : sites_) {
    if (s == s1)
      s = s2;
    else if (s == s2)
      s = s1;
  }
}

CliffordFrame CliffordFrame::then(const CliffordFrame& later) const {
  if (later.num_logical() != num_logical()) throw ConfigError("CliffordFrame::then: size mismatch");
  CliffordFrame out = *this;
  out.phase_ = (phase_ + later.phase_) % 4;
  for (std::size_t l = 0; l < num_logical(); ++l) out.multiply(l, later.paulis_[l]);
  // `later` starts where this frame ends
  out.sites_ = later.sites_;
  return out;
}

CMatrix CliffordFrame::byproduct_matrix() const {
  const std::size_t n = num_logical();
  const std::size_t dim = std::size_t{1} << n;
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  static constexpr cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (std::size_t col = 0; col < dim; ++col) {
    // Z^z first, then X^x
    std::size_t row = col;
    int sign = 0;
    for (std::size_t l = 0; l < n; ++l) {
      const std::size_t bit = std::size_t{1} << (n - 1 - l);
      if (paulis_[l].z && (col & bit)) sign ^= 1;
      if (paulis_[l].x) row ^= bit;
    }
    m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = kPhases[(phase_ + 2 * sign) % 4];
  }
  return m;
}

std::string CliffordFrame::to_string() const {
  static constexpr const char* kPhase[4] = {"+", "+i", "-", "-i"};
  std::string s = kPhase[phase_];
  for (const auto& p : paulis_) s += p.label();
  return s;
}

}  // namespace jchsim
