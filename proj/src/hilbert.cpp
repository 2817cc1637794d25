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

#include "jchsim/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "jchsim/errors.hpp"

namespace jchsim {

// ---------------------------------------------------------------------------
// LatticeSpec

LatticeSpec LatticeSpec::chain(std::size_t n, bool periodic) {
  if (n == 0) throw InvalidArgument("chain: need at least one site");
  LatticeSpec l;
  l.geometry_ = Geometry::Chain;
  l.num_sites_ = n;
  l.rows_ = 1;
  l.cols_ = n;
  l.periodic_ = periodic;
  for (std::size_t k = 0; k + 1 < n; ++k) l.edges_.push_back({k, k + 1});
  if (periodic && n > 2) l.edges_.push_back({n - 1, 0});
  return l;
}

LatticeSpec LatticeSpec::grid(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw InvalidArgument("grid: dimensions must be positive");
  LatticeSpec l;
  l.geometry_ = Geometry::Grid;
  l.num_sites_ = rows * cols;
  l.rows_ = rows;
  l.cols_ = cols;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) l.edges_.push_back({l.site(r, c), l.site(r, c + 1)});
      if (r + 1 < rows) l.edges_.push_back({l.site(r, c), l.site(r + 1, c)});
    }
  }
  return l;
}

LatticeSpec LatticeSpec::custom(std::size_t num_sites, std::vector<Edge> edges) {
  if (num_sites == 0) throw InvalidArgument("lattice: need at least one site");
  for (const auto& e : edges) {
    if (e.a >= num_sites || e.b >= num_sites || e.a == e.b) {
      throw InvalidArgument("lattice: edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                            ") does not join two valid sites");
    }
  }
  LatticeSpec l;
  l.geometry_ = Geometry::Chain;
  l.num_sites_ = num_sites;
  l.rows_ = 1;
  l.cols_ = num_sites;
  l.edges_ = std::move(edges);
  return l;
}

// ---------------------------------------------------------------------------
// BasisIndexer

BasisIndexer::BasisIndexer(std::size_t num_sites, int n_max, std::optional<int> sector)
    : num_sites_(num_sites), n_max_(n_max), sector_(sector) {
  if (num_sites == 0) throw InvalidArgument("basis: need at least one site");
  if (n_max < 1) throw InvalidArgument("basis: n_max must be >= 1");
  if (sector && *sector < 0) throw InvalidArgument("basis: sector must be >= 0");
  local_dim_ = 2 * static_cast<std::size_t>(n_max + 1);

  place_.assign(num_sites, 1);
  std::uint64_t full = 1;
  for (std::size_t k = 0; k < num_sites; ++k) {
    if (full > (std::uint64_t{1} << 40) / local_dim_) {
      throw CapacityError("basis: full product dimension exceeds 2^40");
    }
    full *= local_dim_;
  }
  full_dim_ = full;
  for (std::size_t k = num_sites; k-- > 0;) {
    place_[k] = (k + 1 == num_sites) ? 1 : place_[k + 1] * local_dim_;
  }

  if (!sector) {
    dim_ = static_cast<std::size_t>(full_dim_);
    return;
  }
  const int max_exc = static_cast<int>(num_sites) * (n_max + 1);
  if (*sector > max_exc) {
    throw EmptySectorError("basis: sector " + std::to_string(*sector) +
                           " exceeds the maximum of " + std::to_string(max_exc) +
                           " excitations for " + std::to_string(num_sites) + " sites");
  }
  // Offline filter over the full enumeration; codes come out sorted.
  std::vector<int> digit_exc(local_dim_);
  for (std::size_t li = 0; li < local_dim_; ++li) digit_exc[li] = local_from_index(li).excitations();
  std::vector<std::size_t> digits(num_sites, 0);
  int exc = 0;
  for (std::uint64_t c = 0; c < full_dim_; ++c) {
    if (exc == *sector) codes_.push_back(c);
    // increment mixed-radix counter, keeping the running excitation count
    for (std::size_t k = num_sites; k-- > 0;) {
      exc -= digit_exc[digits[k]];
      if (++digits[k] < local_dim_) {
        exc += digit_exc[digits[k]];
        break;
      }
      digits[k] = 0;
      exc += digit_exc[0];
    }
  }
  dim_ = codes_.size();
}

std::optional<std::size_t> BasisIndexer::index_of_code(std::uint64_t code) const {
  if (code >= full_dim_) return std::nullopt;
  if (codes_.empty() && !sector_) return static_cast<std::size_t>(code);
  auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
  if (it == codes_.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

LocalState BasisIndexer::local(std::size_t i, std::size_t site) const {
  const std::uint64_t c = code(i);
  return local_from_index(static_cast<std::size_t>((c / place_[site]) % local_dim_));
}

std::uint64_t BasisIndexer::with_local(std::uint64_t code, std::size_t site, LocalState s) const {
  const std::uint64_t old = (code / place_[site]) % local_dim_;
  return code - old * place_[site] + local_index(s) * place_[site];
}

std::vector<LocalState> BasisIndexer::decode(std::size_t i) const {
  if (i >= dim_) throw InvalidArgument("basis: index out of range");
  std::vector<LocalState> out(num_sites_);
  for (std::size_t k = 0; k < num_sites_; ++k) out[k] = local(i, k);
  return out;
}

std::optional<std::size_t> BasisIndexer::encode(std::span<const LocalState> sites) const {
  if (sites.size() != num_sites_) throw InvalidArgument("basis: wrong number of sites in encode");
  std::uint64_t c = 0;
  for (std::size_t k = 0; k < num_sites_; ++k) {
    const auto& s = sites[k];
    if (s.atom < 0 || s.atom > 1 || s.photons < 0 || s.photons > n_max_) return std::nullopt;
    c += local_index(s) * place_[k];
  }
  return index_of_code(c);
}

int BasisIndexer::total_excitations(std::size_t i) const {
  int n = 0;
  for (std::size_t k = 0; k < num_sites_; ++k) n += local(i, k).excitations();
  return n;
}

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix::SparseMatrix(std::size_t dim, std::span<const Triplet> entries, bool hermitian)
    : hermitian_(hermitian) {
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.row >= dim || e.col >= dim) throw InvalidArgument("sparse: triplet outside matrix");
    t.emplace_back(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col), e.value);
  }
  m_.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m_.setFromTriplets(t.begin(), t.end());
  m_.makeCompressed();
}

SparseMatrix::SparseMatrix(Storage m, bool hermitian) : m_(std::move(m)), hermitian_(hermitian) {
  if (m_.rows() != m_.cols()) throw InvalidArgument("sparse: matrix must be square");
  m_.makeCompressed();
}

SparseMatrix SparseMatrix::identity(std::size_t dim) {
  Storage m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setIdentity();
  return SparseMatrix(std::move(m), true);
}

SparseMatrix SparseMatrix::diagonal(const Eigen::VectorXd& d) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(d.size()));
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d[i] != 0.0) t.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i), d[i]});
  }
  return SparseMatrix(static_cast<std::size_t>(d.size()), t, true);
}

SparseMatrix SparseMatrix::adjoint() const {
  Storage a = m_.adjoint();
  return SparseMatrix(std::move(a), hermitian_);
}

void SparseMatrix::multiply(const CVector& x, CVector& y) const {
  if (static_cast<std::size_t>(x.size()) != dim()) {
    throw InvalidArgument("sparse: dimension mismatch (" + std::to_string(dim()) + " vs " +
                          std::to_string(x.size()) + ")");
  }
  y.resize(x.size());
  const auto* outer = m_.outerIndexPtr();
  const auto* inner = m_.innerIndexPtr();
  const auto* vals = m_.valuePtr();
  for (Eigen::Index r = 0; r < m_.rows(); ++r) {
    cplx acc{0.0, 0.0};
    for (auto p = outer[r]; p < outer[r + 1]; ++p) acc += vals[p] * x[inner[p]];
    y[r] = acc;
  }
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& o) const {
  if (o.dim() != dim()) throw InvalidArgument("sparse: dimension mismatch in sum");
  Storage s = m_ + o.m_;
  return SparseMatrix(std::move(s), hermitian_ && o.hermitian_);
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& o) const {
  if (o.dim() != dim()) throw InvalidArgument("sparse: dimension mismatch in difference");
  Storage s = m_ - o.m_;
  return SparseMatrix(std::move(s), hermitian_ && o.hermitian_);
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
  if (o.dim() != dim()) throw InvalidArgument("sparse: dimension mismatch in product");
  Storage s = m_ * o.m_;
  return SparseMatrix(std::move(s), false);
}

SparseMatrix SparseMatrix::scaled(cplx s) const {
  Storage m = m_ * s;
  return SparseMatrix(std::move(m), hermitian_ && s.imag() == 0.0);
}

SparseMatrix SparseMatrix::with_hermitian_flag_checked() const {
  if (hermiticity_violations() != 0) throw InvalidArgument("sparse: matrix is not hermitian");
  return SparseMatrix(m_, true);
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (Eigen::Index k = 0; k < m_.nonZeros(); ++k) m = std::max(m, std::abs(m_.valuePtr()[k]));
  return m;
}

std::size_t SparseMatrix::hermiticity_violations() const {
  Storage d = m_ - Storage(m_.adjoint());
  std::size_t n = 0;
  for (Eigen::Index k = 0; k < d.outerSize(); ++k) {
    for (Storage::InnerIterator it(d, k); it; ++it) {
      if (it.value() != cplx{0.0, 0.0}) ++n;
    }
  }
  return n;
}

std::size_t commutator_nonzeros(const SparseMatrix& a, const SparseMatrix& b, double tol) {
  if (a.dim() != b.dim()) throw InvalidArgument("commutator: dimension mismatch");
  SparseMatrix::Storage c = a.storage() * b.storage() - b.storage() * a.storage();
  std::size_t n = 0;
  for (Eigen::Index k = 0; k < c.outerSize(); ++k) {
    for (SparseMatrix::Storage::InnerIterator it(c, k); it; ++it) {
      if (std::abs(it.value()) > tol) ++n;
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// States

void StateVector::normalize() {
  const double n = amplitudes.norm();
  if (n == 0.0) throw NumericalError("state: cannot normalize the zero vector");
  amplitudes /= n;
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

StateVector StateVector::basis_state(BasisPtr b, std::size_t index) {
  if (!b) throw InvalidArgument("state: null basis");
  if (index >= b->dim()) throw InvalidArgument("state: basis index out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(b->dim()));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(std::move(v), std::move(b));
}

StateVector StateVector::product(BasisPtr b, std::span<const LocalState> sites) {
  if (!b) throw InvalidArgument("state: null basis");
  auto idx = b->encode(sites);
  if (!idx) throw InvalidArgument("state: product state lies outside the basis");
  return basis_state(std::move(b), *idx);
}

StateVector apply(const SparseMatrix& op, const StateVector& v) {
  StateVector out;
  out.basis = v.basis;
  op.multiply(v.amplitudes, out.amplitudes);
  return out;
}

cplx expectation(const SparseMatrix& op, const StateVector& v) {
  CVector w;
  op.multiply(v.amplitudes, w);
  cplx e = v.amplitudes.dot(w);  // conjugates the first argument
  if (op.hermitian()) e.imag(0.0);
  return e;
}

double cutoff_population(const StateVector& v) {
  if (!v.basis) throw InvalidArgument("state: null basis");
  const auto& b = *v.basis;
  double w = 0.0;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    for (std::size_t k = 0; k < b.num_sites(); ++k) {
      if (b.local(i, k).photons == b.n_max()) {
        w += std::norm(v.amplitudes[static_cast<Eigen::Index>(i)]);
        break;
      }
    }
  }
  return w;
}

StateVector embed(const StateVector& v, BasisPtr target) {
  if (!v.basis || !target) throw InvalidArgument("embed: null basis");
  if (v.basis->num_sites() != target->num_sites() || v.basis->n_max() != target->n_max()) {
    throw InvalidArgument("embed: bases must share sites and photon cutoff");
  }
  CVector out = CVector::Zero(static_cast<Eigen::Index>(target->dim()));
  for (std::size_t i = 0; i < v.basis->dim(); ++i) {
    const cplx a = v.amplitudes[static_cast<Eigen::Index>(i)];
    if (a == cplx{0.0, 0.0}) continue;
    auto j = target->index_of_code(v.basis->code(i));
    if (!j) throw InvalidArgument("embed: state has weight outside the target basis");
    out[static_cast<Eigen::Index>(*j)] = a;
  }
  return StateVector(std::move(out), std::move(target));
}

}  // namespace jchsim
