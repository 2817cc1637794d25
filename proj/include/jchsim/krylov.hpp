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

#ifndef JCHSIM_KRYLOV_HPP
#define JCHSIM_KRYLOV_HPP

#include <cstddef>

#include "jchsim/hilbert.hpp"

namespace jchsim {

struct KrylovOptions {
  std::size_t krylov_dim = 30;
  // local error allowed per unit time; the global error is about t * tol
  double tol = 1e-12;
  std::size_t max_rejections = 50;
};

struct KrylovStats {
  std::size_t substeps = 0;
  std::size_t rejections = 0;
  std::size_t matvecs = 0;
};

/// One accepted substep of the Arnoldi approximation of exp(-i s M) v.
/// The projection can be re-evaluated for any s in [0, tau] without new
/// matrix-vector products.
class KrylovSubstep {
 public:
  double tau() const { return tau_; }
  /// State at the end of the substep.
  const CVector& end() const { return end_; }
  CVector at(double s) const;

 private:
  friend class KrylovPropagator;
  double tau_ = 0.0;
  double beta_ = 0.0;
  std::size_t cols_ = 0;  // basis vectors used for the result
  CMatrix basis_;         // n x cols_
  CMatrix hess_;          // augmented Hessenberg matrix
  CVector end_;
};

/// Computes exp(-i t M) v for a sparse (not necessarily hermitian) M with
/// adaptive substeps, following the corrected Arnoldi scheme with the
/// classic two-term error estimate.
class KrylovPropagator {
 public:
  explicit KrylovPropagator(SparseMatrix m, KrylovOptions opts = {});

  CVector apply(const CVector& v, double t, KrylovStats* stats = nullptr) const;

  /// One accepted substep from v with length at most max_tau. `hint` carries
  /// the proposed step size between calls (0 = choose a fresh one).
  KrylovSubstep step(const CVector& v, double max_tau, double& hint, KrylovStats* stats = nullptr) const;

  double norm_estimate() const { return anorm_; }

 private:
  SparseMatrix m_;
  KrylovOptions opts_;
  double anorm_ = 0.0;
};

}  // namespace jchsim

#endif  // JCHSIM_KRYLOV_HPP
