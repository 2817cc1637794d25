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

#include "jchsim/eigensolver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jchsim/errors.hpp"
#include "jchsim/rng.hpp"

namespace jchsim {

Eigenpairs dense_lowest(const SparseMatrix& h, std::size_t count) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  if (n == 0) throw InvalidArgument("eigensolver: empty matrix");
  const CMatrix dense = h.to_dense();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(dense);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver: dense diagonalization failed");
  Eigenpairs out;
  const auto k = std::min<Eigen::Index>(static_cast<Eigen::Index>(count), n);
  for (Eigen::Index j = 0; j < k; ++j) {
    out.values.push_back(es.eigenvalues()[j]);
    out.vectors.emplace_back(es.eigenvectors().col(j));
    out.residuals.push_back((dense * es.eigenvectors().col(j) - es.eigenvalues()[j] * es.eigenvectors().col(j)).norm());
  }
  return out;
}

namespace {

// Orthogonalize w against the first k columns of V, twice.
void orthogonalize(const CMatrix& V, Eigen::Index k, CVector& w) {
  for (int pass = 0; pass < 2; ++pass) {
    if (k == 0) return;
    const CVector c = V.leftCols(k).adjoint() * w;
    w.noalias() -= V.leftCols(k) * c;
  }
}

}  // namespace

Eigenpairs lanczos_lowest(const SparseMatrix& h, const LanczosOptions& opts) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  if (n == 0) throw InvalidArgument("eigensolver: empty matrix");
  const auto want = static_cast<Eigen::Index>(std::max<std::size_t>(1, opts.count));
  if (n <= std::max<Eigen::Index>(2 * want + 2, 8)) return dense_lowest(h, opts.count);

  const Eigen::Index m = std::min<Eigen::Index>(
      n, std::max<Eigen::Index>(static_cast<Eigen::Index>(opts.krylov_dim), 2 * want + 4));
  const Eigen::Index keep = std::min<Eigen::Index>(want + 2, m - 2);

  CMatrix V(n, m + 1);
  CMatrix T = CMatrix::Zero(m, m);
  CVector w(n);
  Eigenpairs out;

  CounterRng rng(opts.start_seed, static_cast<std::uint64_t>(n));
  CVector v0(n);
  for (Eigen::Index i = 0; i < n; ++i) v0[i] = cplx(rng.uniform() - 0.5, 0.0);
  V.col(0) = v0 / v0.norm();

  Eigen::Index k = 0;  // number of locked Ritz vectors at the front of V
  double worst = 0.0;
  for (std::size_t restart = 0; restart <= opts.max_restarts; ++restart) {
    // Expand from column k to m.
    Eigen::Index j = k;
    double beta = 0.0;
    for (; j < m; ++j) {
      h.multiply(V.col(j), w);
      ++out.matvecs;
      T.col(j).head(j + 1) = V.leftCols(j + 1).adjoint() * w;
      orthogonalize(V, j + 1, w);
      beta = w.norm();
      if (beta < 1e-14 * std::max(1.0, T.col(j).head(j + 1).norm())) {
        ++j;
        beta = 0.0;
        break;
      }
      V.col(j + 1) = w / beta;
    }
    const Eigen::Index size = j;
    // only the upper triangle is computed; mirror it
    CMatrix Ts(size, size);
    for (Eigen::Index c = 0; c < size; ++c) {
      for (Eigen::Index r = c + 1; r < size; ++r) Ts(r, c) = std::conj(T(c, r));
      for (Eigen::Index r = 0; r <= c; ++r) Ts(r, c) = T(r, c);
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(Ts);
    const Eigen::Index got = std::min(want, size);

    bool converged = true;
    worst = 0.0;
    for (Eigen::Index q = 0; q < got; ++q) {
      const double theta = es.eigenvalues()[q];
      const double res = beta * std::abs(es.eigenvectors()(size - 1, q));
      worst = std::max(worst, res / std::max(1.0, std::abs(theta)));
      if (res > opts.tol * std::max(1.0, std::abs(theta))) converged = false;
    }
    if (converged || size < m) {
      for (Eigen::Index q = 0; q < got; ++q) {
        CVector y = V.leftCols(size) * es.eigenvectors().col(q);
        y /= y.norm();
        h.multiply(y, w);
        ++out.matvecs;
        const double theta = es.eigenvalues()[q];
        out.values.push_back(theta);
        out.residuals.push_back((w - theta * y).norm());
        out.vectors.push_back(std::move(y));
      }
      return out;
    }

    // Thick restart: keep the lowest `keep` Ritz vectors and the residual direction.
    const CMatrix Y = V.leftCols(size) * es.eigenvectors().leftCols(keep);
    const CVector next = V.col(size);
    V.leftCols(keep) = Y;
    V.col(keep) = next;
    T.setZero();
    for (Eigen::Index q = 0; q < keep; ++q) T(q, q) = es.eigenvalues()[q];
    k = keep;
  }
  std::ostringstream msg;
  msg << "lanczos: no convergence after " << opts.max_restarts << " restarts, relative residual "
      << worst;
  throw NumericalError(msg.str());
}

}  // namespace jchsim
