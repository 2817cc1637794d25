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

#ifndef JCHSIM_DYNAMICS_HPP
#define JCHSIM_DYNAMICS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "jchsim/groundstate.hpp"
#include "jchsim/hilbert.hpp"
#include "jchsim/krylov.hpp"
#include "jchsim/model.hpp"
#include "jchsim/rng.hpp"

namespace jchsim {

/// exp(-i H t) v for hermitian H.
StateVector evolve_unitary(const SparseMatrix& h, const StateVector& v, double t, const KrylovOptions& opts = {},
                           KrylovStats* stats = nullptr);

enum class RampShape { Linear, Smoothstep };

/// Piecewise-constant detuning path. Segment s (1-based) holds the value
/// of the continuous profile at its right end. With round_trip the path
/// returns to delta_start over a second leg of the same length and step
/// count. total_time is per leg, in units of 1/A.
struct RampSchedule {
  double delta_start = 1e-3;
  double delta_end = 1.0;
  double total_time = 50.0;
  RampShape shape = RampShape::Linear;
  std::size_t steps = 200;
  bool round_trip = false;

  void validate() const;
  std::size_t num_segments() const { return round_trip ? 2 * steps : steps; }
  /// Detuning held during segment s in [0, num_segments()).
  double segment_delta(std::size_t s) const;
  /// Duration of one segment in the time unit of the Hamiltonian (1/A scaled by A).
  double segment_duration(double A) const;
};

struct RampPoint {
  double time = 0.0;
  double delta = 0.0;
  double overlap = 0.0;  // |<ground(delta)|psi>|^2
  double var_mid = 0.0;
};

struct RampResult {
  StateVector final_state;
  std::vector<RampPoint> trace;  // one row per segment boundary, starting at t = 0
};

/// Unitary propagation through `schedule`. The t = 0 row compares v0 with
/// the ground state at delta_start.
RampResult adiabatic_ramp(const ModelParams& params, const LatticeSpec& lattice, BasisPtr basis,
                          const RampSchedule& schedule, const StateVector& v0, const KrylovOptions& opts = {});

/// Where decay acts: throughout the ramp, or only while holding at
/// delta_end for hold_time after a closed-system ramp.
enum class DecayMode { DuringRamp, AtFixedDelta };

struct EnsembleOptions {
  std::size_t n_traj = 500;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  DecayMode mode = DecayMode::DuringRamp;
  double hold_time = 0.0;         // 1/A units, AtFixedDelta only
  std::size_t hold_samples = 10;  // AtFixedDelta only
  std::size_t site = static_cast<std::size_t>(-1);  // observed site; default middle
  double jump_tol = 1e-8;         // bisection tolerance on the squared norm
  KrylovOptions krylov;
  // dissipative segments of bases up to this dimension use a cached dense
  // propagator; Krylov substeps are still used to locate jumps
  std::size_t dense_limit = 256;
  bool keep_final_states = true;
};

struct JumpEvent {
  double time = 0.0;
  std::size_t channel = 0;  // index into jump_operators()
  friend bool operator==(const JumpEvent&, const JumpEvent&) = default;
};

/// Per-sample single-trajectory moments of the observed site.
struct TrajectorySample {
  double mean_n = 0.0;
  double mean_n2 = 0.0;
  double pop_1minus = 0.0;
  double total_excitations = 0.0;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::size_t index = 0;
  std::vector<JumpEvent> jumps;
  StateVector final_state;
  std::vector<TrajectorySample> samples;
};

struct EnsembleRow {
  double time = 0.0;   // in units of 1/A
  double delta = 0.0;
  double mean_var_mid = 0.0;
  double stderr_var_mid = 0.0;
  double mean_pop_1minus = 0.0;
  double stderr_pop_1minus = 0.0;
  double mean_excitations = 0.0;
  std::size_t jumps_total = 0;  // jumps up to this sample, summed over trajectories
};

/// Advances an unnormalized quantum-jump state from `now` to `end` under
/// the non-hermitian drift `eff`. A jump happens when the squared norm
/// falls to `threshold` (located by bisection within jump_tol); the
/// channel is drawn with weight ||L psi||^2, psi is renormalized and a new
/// threshold drawn. Jump times use the drift's time unit.
void propagate_with_jumps(const KrylovPropagator& eff, const std::vector<SparseMatrix>& channels, CVector& psi,
                          double& now, double end, double& threshold, CounterRng& rng, double jump_tol,
                          std::vector<JumpEvent>& jumps);

struct EnsembleResult {
  std::vector<EnsembleRow> rows;
  std::vector<TrajectoryRecord> trajectories;
  std::vector<JumpOperator> channels;
};

/// Monte-Carlo wavefunction ensemble over the ramp. `basis` must be
/// unrestricted (decay changes the excitation number); v0 may live in a
/// sector basis over the same sites and is embedded. var is the variance
/// of the ensemble density matrix, sum p<N^2> - (sum p<N>)^2, with a
/// delta-method standard error. With kappa = gamma = 0 every trajectory is
/// the unitary evolution.
EnsembleResult mcwf_ensemble(const ModelParams& params, const LatticeSpec& lattice, BasisPtr basis,
                             const RampSchedule& schedule, const StateVector& v0, const EnsembleOptions& opts);

}  // namespace jchsim

#endif  // JCHSIM_DYNAMICS_HPP
