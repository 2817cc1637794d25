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

#ifndef JCHSIM_GROUNDSTATE_HPP
#define JCHSIM_GROUNDSTATE_HPP

#include <cstddef>
#include <vector>

#include "jchsim/hilbert.hpp"
#include "jchsim/model.hpp"

namespace jchsim {

enum class EigenMethod { Auto, Dense, Iterative };

struct GroundStateOptions {
  EigenMethod method = EigenMethod::Auto;
  std::size_t dense_limit = 4096;  // Auto uses the dense solver up to this dimension
  double degeneracy_tol = 1e-9;    // relative gap below which the ground level is flagged
  double tol = 1e-11;
};

struct GroundState {
  double energy = 0.0;
  StateVector state;
  double gap = 0.0;          // E1 - E0, +inf for dim 1
  bool degenerate = false;
  double residual = 0.0;
};

/// Lowest eigenpair of a hermitian H. The eigenvector phase is fixed so the
/// largest-magnitude amplitude is real and positive.
GroundState ground_state(const SparseMatrix& h, BasisPtr basis, const GroundStateOptions& opts = {});

/// <N_k^2> - <N_k>^2 for a normalized state.
double excitation_variance(const StateVector& state, std::size_t site);
/// <N_k>.
double mean_excitations(const StateVector& state, std::size_t site);

/// Population of the dressed |1-> state at `site` for the detuning in `params`.
double lower_polariton_population(const StateVector& state, std::size_t site, const ModelParams& params);

struct SweepRow {
  double delta = 0.0;
  double delta_over_g = 0.0;
  double var_mid = 0.0;
  double pop_1minus = 0.0;
  double energy = 0.0;
  std::size_t num_sites = 0;
  bool degenerate = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// log-spaced grid of `points` detunings between lo and hi (inclusive).
std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// Ground-state order parameter across a detuning grid at fixed filling.
/// The middle site is floor(N/2). Errors are rethrown with the offending
/// detuning in the message. `threads` caps worker count; rows keep grid order.
SweepResult sweep_order_parameter(const ModelParams& params, const LatticeSpec& lattice, int n_max,
                                  int filling, const std::vector<double>& delta_grid,
                                  const GroundStateOptions& opts = {}, std::size_t threads = 1);

/// Largest finite-difference slope d var / d log10(delta) over a sweep.
double transition_steepness(const SweepResult& sweep);

struct SteepnessResult {
  double slope = 0.0;     // max d var_mid / d log10(delta)
  double delta = 0.0;     // where it is attained
  std::size_t evaluations = 0;
};

/// Refines the steepest interval of a coarse sweep: golden-section search
/// for the maximum of the central-difference slope inside the bracket
/// around it, down to a bracket width of `width` decades.
SteepnessResult refine_transition_steepness(const ModelParams& params, const LatticeSpec& lattice, int n_max,
                                            int filling, const SweepResult& coarse,
                                            const GroundStateOptions& opts = {}, double width = 1e-4);

}  // namespace jchsim

#endif  // JCHSIM_GROUNDSTATE_HPP
