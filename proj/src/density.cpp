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

#include "jchsim/density.hpp"

#include <Eigen/Eigenvalues>

#include <bit>
#include <cmath>

#include "jchsim/errors.hpp"

namespace jchsim {

namespace {

using Index = Eigen::Index;

std::size_t bit_of(std::size_t n, std::size_t k) {
  if (k >= n) throw InvalidArgument("qubit index out of range");
  return std::size_t{1} << (n - 1 - k);
}

void check_dim(Index dim, std::size_t n) {
  if (n >= 8 * sizeof(std::size_t) - 1 || dim != static_cast<Index>(std::size_t{1} << n))
    throw InvalidArgument("register dimension does not match qubit count");
}

void left_multiply(CMatrix& rho, std::size_t bit, const Matrix2c& u) {
  const std::size_t dim = static_cast<std::size_t>(rho.rows());
  for (std::size_t i0 = 0; i0 < dim; ++i0) {
    if (i0 & bit) continue;
    const auto r0 = static_cast<Index>(i0);
    const auto r1 = static_cast<Index>(i0 | bit);
    for (Index c = 0; c < rho.cols(); ++c) {
      const cplx a = rho(r0, c);
      const cplx b = rho(r1, c);
      rho(r0, c) = u(0, 0) * a + u(0, 1) * b;
      rho(r1, c) = u(1, 0) * a + u(1, 1) * b;
    }
  }
}

// rho <- rho u^dagger
void right_multiply_adjoint(CMatrix& rho, std::size_t bit, const Matrix2c& u) {
  const std::size_t dim = static_cast<std::size_t>(rho.cols());
  for (std::size_t j0 = 0; j0 < dim; ++j0) {
    if (j0 & bit) continue;
    const auto c0 = static_cast<Index>(j0);
    const auto c1 = static_cast<Index>(j0 | bit);
    for (Index r = 0; r < rho.rows(); ++r) {
      const cplx a = rho(r, c0);
      const cplx b = rho(r, c1);
      rho(r, c0) = a * std::conj(u(0, 0)) + b * std::conj(u(0, 1));
      rho(r, c1) = a * std::conj(u(1, 0)) + b * std::conj(u(1, 1));
    }
  }
}

// full index of (kept bits a, remaining bits r)
std::vector<std::size_t> split_table(std::size_t n, const std::vector<std::size_t>& keep) {
  std::vector<bool> kept(n, false);
  for (auto k : keep) {
    if (k >= n || kept[k]) throw InvalidArgument("reduced state: bad or repeated qubit");
    kept[k] = true;
  }
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < n; ++k)
    if (!kept[k]) rest.push_back(k);
  const std::size_t na = std::size_t{1} << keep.size();
  const std::size_t nr = std::size_t{1} << rest.size();
  std::vector<std::size_t> table(na * nr, 0);
  for (std::size_t a = 0; a < na; ++a) {
    std::size_t base = 0;
    for (std::size_t q = 0; q < keep.size(); ++q)
      if (a & (std::size_t{1} << (keep.size() - 1 - q))) base |= bit_of(n, keep[q]);
    for (std::size_t r = 0; r < nr; ++r) {
      std::size_t full = base;
      for (std::size_t q = 0; q < rest.size(); ++q)
        if (r & (std::size_t{1} << (rest.size() - 1 - q))) full |= bit_of(n, rest[q]);
      table[a * nr + r] = full;
    }
  }
  return table;
}

}  // namespace

Matrix2c hadamard() {
  Matrix2c h;
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

void apply_single_qubit(CMatrix& rho, std::size_t n, std::size_t k, const Matrix2c& u) {
  check_dim(rho.rows(), n);
  const std::size_t bit = bit_of(n, k);
  left_multiply(rho, bit, u);
  right_multiply_adjoint(rho, bit, u);
}

void apply_single_qubit(CVector& psi, std::size_t n, std::size_t k, const Matrix2c& u) {
  check_dim(psi.size(), n);
  const std::size_t bit = bit_of(n, k);
  for (std::size_t i0 = 0; i0 < static_cast<std::size_t>(psi.size()); ++i0) {
    if (i0 & bit) continue;
    const cplx a = psi[static_cast<Index>(i0)];
    const cplx b = psi[static_cast<Index>(i0 | bit)];
    psi[static_cast<Index>(i0)] = u(0, 0) * a + u(0, 1) * b;
    psi[static_cast<Index>(i0 | bit)] = u(1, 0) * a + u(1, 1) * b;
  }
}

void apply_kraus(CMatrix& rho, std::size_t n, std::size_t k, const std::vector<Matrix2c>& kraus) {
  check_dim(rho.rows(), n);
  if (kraus.empty()) throw InvalidArgument("apply_kraus: no operators");
  const std::size_t bit = bit_of(n, k);
  CMatrix acc;
  for (std::size_t a = 0; a < kraus.size(); ++a) {
    CMatrix term = (a + 1 == kraus.size()) ? std::move(rho) : rho;
    left_multiply(term, bit, kraus[a]);
    right_multiply_adjoint(term, bit, kraus[a]);
    if (a == 0)
      acc = std::move(term);
    else
      acc += term;
  }
  rho = std::move(acc);
}

void amplitude_damp(CMatrix& rho, std::size_t n, std::size_t k, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("amplitude_damp: p outside [0, 1]");
  if (p == 0.0) return;
  check_dim(rho.rows(), n);
  // closed form of K0 = diag(1, sqrt(1-p)), K1 = sqrt(p)|0><1|
  const std::size_t bit = bit_of(n, k);
  const std::size_t dim = static_cast<std::size_t>(rho.rows());
  const double keep = std::sqrt(1.0 - p);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < dim; ++i) {
      const bool bi = i & bit;
      const bool bj = j & bit;
      if (bi && bj) {
        const cplx v = rho(static_cast<Index>(i), static_cast<Index>(j));
        rho(static_cast<Index>(i ^ bit), static_cast<Index>(j ^ bit)) += p * v;
        rho(static_cast<Index>(i), static_cast<Index>(j)) = (1.0 - p) * v;
      } else if (bi != bj) {
        rho(static_cast<Index>(i), static_cast<Index>(j)) *= keep;
      }
    }
  }
}

CMatrix project(const CMatrix& rho, std::size_t n, std::size_t k, int outcome) {
  check_dim(rho.rows(), n);
  const std::size_t bit = bit_of(n, k);
  const std::size_t want = outcome ? bit : 0;
  CMatrix out = rho;
  const std::size_t dim = static_cast<std::size_t>(rho.rows());
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < dim; ++i) {
      if ((i & bit) != want || (j & bit) != want) out(static_cast<Index>(i), static_cast<Index>(j)) = 0.0;
    }
  }
  return out;
}

CVector project(const CVector& psi, std::size_t n, std::size_t k, int outcome) {
  check_dim(psi.size(), n);
  const std::size_t bit = bit_of(n, k);
  const std::size_t want = outcome ? bit : 0;
  CVector out = psi;
  for (std::size_t i = 0; i < static_cast<std::size_t>(psi.size()); ++i)
    if ((i & bit) != want) out[static_cast<Index>(i)] = 0.0;
  return out;
}

void apply_pauli(CMatrix& rho, std::size_t xmask, std::size_t zmask) {
  if (xmask == 0 && zmask == 0) return;
  const std::size_t dim = static_cast<std::size_t>(rho.rows());
  CMatrix out(rho.rows(), rho.cols());
  // (P rho P^dagger)_{i^x, j^x} = s(i) s(j) rho_ij, s(i) = (-1)^popcount(i & z)
  for (std::size_t j = 0; j < dim; ++j) {
    const int sj = std::popcount(j & zmask) & 1;
    for (std::size_t i = 0; i < dim; ++i) {
      const int si = std::popcount(i & zmask) & 1;
      const cplx v = rho(static_cast<Index>(i), static_cast<Index>(j));
      out(static_cast<Index>(i ^ xmask), static_cast<Index>(j ^ xmask)) = (si ^ sj) ? -v : v;
    }
  }
  rho = std::move(out);
}

void apply_pauli(CVector& psi, std::size_t xmask, std::size_t zmask) {
  if (xmask == 0 && zmask == 0) return;
  CVector out(psi.size());
  for (std::size_t i = 0; i < static_cast<std::size_t>(psi.size()); ++i) {
    const cplx v = psi[static_cast<Index>(i)];
    out[static_cast<Index>(i ^ xmask)] = (std::popcount(i & zmask) & 1) ? -v : v;
  }
  psi = std::move(out);
}

CMatrix reduced_density_matrix(const CMatrix& rho, std::size_t n, const std::vector<std::size_t>& keep) {
  check_dim(rho.rows(), n);
  const auto table = split_table(n, keep);
  const std::size_t na = std::size_t{1} << keep.size();
  const std::size_t nr = table.size() / na;
  CMatrix out = CMatrix::Zero(static_cast<Index>(na), static_cast<Index>(na));
  for (std::size_t b = 0; b < na; ++b) {
    for (std::size_t a = 0; a < na; ++a) {
      cplx s = 0.0;
      for (std::size_t r = 0; r < nr; ++r)
        s += rho(static_cast<Index>(table[a * nr + r]), static_cast<Index>(table[b * nr + r]));
      out(static_cast<Index>(a), static_cast<Index>(b)) = s;
    }
  }
  return out;
}

CMatrix reduced_density_matrix(const CVector& psi, std::size_t n, const std::vector<std::size_t>& keep) {
  check_dim(psi.size(), n);
  const auto table = split_table(n, keep);
  const std::size_t na = std::size_t{1} << keep.size();
  const std::size_t nr = table.size() / na;
  CMatrix m(static_cast<Index>(na), static_cast<Index>(nr));
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t r = 0; r < nr; ++r)
      m(static_cast<Index>(a), static_cast<Index>(r)) = psi[static_cast<Index>(table[a * nr + r])];
  return m * m.adjoint();
}

CMatrix embed_register(const CMatrix& rho_part, std::size_t n, const std::vector<std::size_t>& part,
                       const CVector& rest) {
  const auto table = split_table(n, part);
  const std::size_t na = std::size_t{1} << part.size();
  const std::size_t nr = table.size() / na;
  if (static_cast<std::size_t>(rho_part.rows()) != na || static_cast<std::size_t>(rest.size()) != nr)
    throw InvalidArgument("embed_register: dimension mismatch");
  const std::size_t dim = std::size_t{1} << n;
  CMatrix out = CMatrix::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  for (std::size_t b = 0; b < na; ++b)
    for (std::size_t s = 0; s < nr; ++s)
      for (std::size_t a = 0; a < na; ++a)
        for (std::size_t r = 0; r < nr; ++r)
          out(static_cast<Index>(table[a * nr + r]), static_cast<Index>(table[b * nr + s])) =
              rho_part(static_cast<Index>(a), static_cast<Index>(b)) * rest[static_cast<Index>(r)] *
              std::conj(rest[static_cast<Index>(s)]);
  return out;
}

CVector product_state(const std::vector<Eigen::Vector2cd>& qubits) {
  CVector v = CVector::Ones(1);
  for (const auto& q : qubits) {
    CVector next(2 * v.size());
    // kron(v, q): earlier qubits more significant
    for (Index i = 0; i < v.size(); ++i) {
      next[2 * i] = v[i] * q[0];
      next[2 * i + 1] = v[i] * q[1];
    }
    v = std::move(next);
  }
  return v;
}

CVector graph_state(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  const std::size_t dim = std::size_t{1} << n;
  const double amp = std::pow(2.0, -0.5 * static_cast<double>(n));
  CVector v(static_cast<Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    int parity = 0;
    for (const auto& [a, b] : edges) {
      if (a == b) throw InvalidArgument("graph_state: self loop");
      if ((i & bit_of(n, a)) && (i & bit_of(n, b))) parity ^= 1;
    }
    v[static_cast<Index>(i)] = parity ? -amp : amp;
  }
  return v;
}

BlockPropagator::BlockPropagator(const CMatrix& h, std::size_t n, double t) {
  check_dim(h.rows(), n);
  index_.resize(n + 1);
  for (std::size_t i = 0; i < static_cast<std::size_t>(h.rows()); ++i)
    index_[static_cast<std::size_t>(std::popcount(i))].push_back(static_cast<Index>(i));
  for (const auto& idx : index_) {
    const CMatrix hb = h(idx, idx);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hb);
    if (es.info() != Eigen::Success) throw NumericalError("BlockPropagator: eigensolver failed");
    CVector phases(hb.rows());
    for (Index k = 0; k < hb.rows(); ++k) phases[k] = std::exp(cplx(0.0, -es.eigenvalues()[k] * t));
    blocks_.push_back(es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
  }
}

double BlockPropagator::sector_leak(const CMatrix& h, std::size_t n) {
  check_dim(h.rows(), n);
  double worst = 0.0;
  for (Index j = 0; j < h.cols(); ++j)
    for (Index i = 0; i < h.rows(); ++i)
      if (std::popcount(static_cast<std::size_t>(i)) != std::popcount(static_cast<std::size_t>(j)))
        worst = std::max(worst, std::abs(h(i, j)));
  return worst;
}

void BlockPropagator::apply(CMatrix& rho) const {
  for (std::size_t w = 0; w < blocks_.size(); ++w) {
    const auto& idx = index_[w];
    const CMatrix rows = blocks_[w] * rho(idx, Eigen::all);
    rho(idx, Eigen::all) = rows;
  }
  for (std::size_t w = 0; w < blocks_.size(); ++w) {
    const auto& idx = index_[w];
    const CMatrix cols = rho(Eigen::all, idx) * blocks_[w].adjoint();
    rho(Eigen::all, idx) = cols;
  }
}

void BlockPropagator::apply(CVector& psi) const {
  for (std::size_t w = 0; w < blocks_.size(); ++w) {
    const auto& idx = index_[w];
    const CVector part = blocks_[w] * psi(idx);
    psi(idx) = part;
  }
}

}  // namespace jchsim
