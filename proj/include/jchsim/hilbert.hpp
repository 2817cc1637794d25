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

#ifndef JCHSIM_HILBERT_HPP
#define JCHSIM_HILBERT_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace jchsim {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Lattice geometry

enum class Geometry { Chain, Grid };

struct Edge {
  std::size_t a;
  std::size_t b;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Sites and the hopping graph. Sites of a grid are numbered row-major.
class LatticeSpec {
 public:
  static LatticeSpec chain(std::size_t n, bool periodic = false);
  static LatticeSpec grid(std::size_t rows, std::size_t cols);
  /// Arbitrary graph; every edge must reference sites < num_sites.
  static LatticeSpec custom(std::size_t num_sites, std::vector<Edge> edges);

  Geometry geometry() const { return geometry_; }
  std::size_t num_sites() const { return num_sites_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool periodic() const { return periodic_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::size_t site(std::size_t row, std::size_t col) const { return row * cols_ + col; }
  std::size_t middle_site() const { return num_sites_ / 2; }

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;

 private:
  Geometry geometry_ = Geometry::Chain;
  std::size_t num_sites_ = 0;
  std::size_t rows_ = 1;
  std::size_t cols_ = 0;
  bool periodic_ = false;
  std::vector<Edge> edges_;
};

// Basis

/// State of one atom-cavity site.
struct LocalState {
  int atom = 0;     // 0 = |g>, 1 = |e>
  int photons = 0;  // Fock occupation, <= n_max
  int excitations() const { return atom + photons; }
  friend bool operator==(const LocalState&, const LocalState&) = default;
};

/// Enumerates product states of the lattice, optionally restricted to a
/// fixed total number of excitations.
///
/// Local ordering per site is (atom bit, photon count): local index
/// atom * (n_max + 1) + photons. Site 0 is the most significant digit, so
/// dense indices follow lexicographic order of the per-site tuples.
class BasisIndexer {
 public:
  BasisIndexer(std::size_t num_sites, int n_max, std::optional<int> sector = std::nullopt);
  BasisIndexer(const LatticeSpec& lattice, int n_max, std::optional<int> sector = std::nullopt)
      : BasisIndexer(lattice.num_sites(), n_max, sector) {}

  std::size_t num_sites() const { return num_sites_; }
  int n_max() const { return n_max_; }
  std::optional<int> sector() const { return sector_; }
  std::size_t dim() const { return dim_; }
  std::size_t local_dim() const { return local_dim_; }
  std::uint64_t full_dim() const { return full_dim_; }

  /// Code of the full (unrestricted) product basis for dense index i.
  std::uint64_t code(std::size_t i) const { return codes_.empty() ? i : codes_[i]; }
  /// Dense index of a full-basis code, or nullopt when outside the sector.
  std::optional<std::size_t> index_of_code(std::uint64_t code) const;

  std::vector<LocalState> decode(std::size_t i) const;
  std::optional<std::size_t> encode(std::span<const LocalState> sites) const;

  LocalState local(std::size_t i, std::size_t site) const;
  /// Replace the local state of one site inside a full-basis code.
  std::uint64_t with_local(std::uint64_t code, std::size_t site, LocalState s) const;

  std::size_t local_index(LocalState s) const {
    return static_cast<std::size_t>(s.atom) * static_cast<std::size_t>(n_max_ + 1) +
           static_cast<std::size_t>(s.photons);
  }
  LocalState local_from_index(std::size_t li) const {
    const auto np = static_cast<std::size_t>(n_max_ + 1);
    return {static_cast<int>(li / np), static_cast<int>(li % np)};
  }

  int total_excitations(std::size_t i) const;

 private:
  std::size_t num_sites_;
  int n_max_;
  std::optional<int> sector_;
  std::size_t local_dim_;
  std::uint64_t full_dim_;
  std::vector<std::uint64_t> place_;   // local_dim^(N-1-site)
  std::vector<std::uint64_t> codes_;   // sorted; empty when unrestricted
  std::size_t dim_;
};

using BasisPtr = std::shared_ptr<const BasisIndexer>;

// Operators

/// Complex sparse operator. The hermitian flag is only set by builders that
/// emit every off-diagonal entry together with its conjugate partner.
class SparseMatrix {
 public:
  using Storage = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
  struct Triplet {
    std::size_t row;
    std::size_t col;
    cplx value;
  };

  SparseMatrix() = default;
  SparseMatrix(std::size_t dim, std::span<const Triplet> entries, bool hermitian);
  SparseMatrix(Storage m, bool hermitian);

  static SparseMatrix identity(std::size_t dim);
  static SparseMatrix diagonal(const Eigen::VectorXd& d);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t nonzeros() const { return static_cast<std::size_t>(m_.nonZeros()); }
  bool hermitian() const { return hermitian_; }
  const Storage& storage() const { return m_; }

  CMatrix to_dense() const { return CMatrix(m_); }
  SparseMatrix adjoint() const;

  /// y = this * x, fixed row-wise reduction order.
  void multiply(const CVector& x, CVector& y) const;

  SparseMatrix operator+(const SparseMatrix& o) const;
  SparseMatrix operator-(const SparseMatrix& o) const;
  SparseMatrix operator*(const SparseMatrix& o) const;
  SparseMatrix scaled(cplx s) const;
  /// Mark a product/sum as hermitian after an explicit structural check.
  SparseMatrix with_hermitian_flag_checked() const;

  /// Largest absolute entry, 0 for an empty matrix.
  double max_abs() const;
  /// Entries of this - this^dagger with magnitude above zero.
  std::size_t hermiticity_violations() const;

 private:
  Storage m_;
  bool hermitian_ = false;
};

/// Number of nonzero entries left in [a, b] after exact cancellation.
std::size_t commutator_nonzeros(const SparseMatrix& a, const SparseMatrix& b, double tol = 0.0);

// States

struct StateVector {
  CVector amplitudes;
  BasisPtr basis;

  StateVector() = default;
  StateVector(CVector amps, BasisPtr b) : amplitudes(std::move(amps)), basis(std::move(b)) {}

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
  double norm() const { return amplitudes.norm(); }
  void normalize();
  bool is_normalized(double tol = 1e-10) const;

  static StateVector basis_state(BasisPtr b, std::size_t index);
  static StateVector product(BasisPtr b, std::span<const LocalState> sites);
};

StateVector apply(const SparseMatrix& op, const StateVector& v);
cplx expectation(const SparseMatrix& op, const StateVector& v);

/// Weight of basis states with a site at the photon cutoff; a leakage monitor
/// for the hard truncation of creation operators at n_max.
double cutoff_population(const StateVector& v);

/// Embed a sector-restricted state into a basis over the same sites with a
/// larger or unrestricted range (codes are shared between the two).
StateVector embed(const StateVector& v, BasisPtr target);

}  // namespace jchsim

#endif  // JCHSIM_HILBERT_HPP
