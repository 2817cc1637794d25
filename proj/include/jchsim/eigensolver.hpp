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

#ifndef JCHSIM_EIGENSOLVER_HPP
#define JCHSIM_EIGENSOLVER_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "jchsim/hilbert.hpp"

namespace jchsim {

struct Eigenpairs {
  std::vector<double> values;   // ascending
  std::vector<CVector> vectors;
  std::vector<double> residuals;  // ||H v - lambda v||
  std::size_t matvecs = 0;
};

/// Full dense diagonalization; returns the `count` lowest pairs.
Eigenpairs dense_lowest(const SparseMatrix& h, std::size_t count);

struct LanczosOptions {
  std::size_t count = 2;         // wanted pairs
  std::size_t krylov_dim = 40;   // basis size before a restart
  std::size_t max_restarts = 500;
  double tol = 1e-10;            // residual relative to max(1, |lambda|)
  std::uint64_t start_seed = 0x5EEDu;
};

/// Thick-restart Lanczos with full reorthogonalization for the lowest pairs
/// of a hermitian operator. Deterministic: the start vector comes from a
/// fixed-seed generator. Throws NumericalError with the residual when the
/// restart cap is reached.
Eigenpairs lanczos_lowest(const SparseMatrix& h, const LanczosOptions& opts = {});

}  // namespace jchsim

#endif  // JCHSIM_EIGENSOLVER_HPP
