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

#include "jchsim/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <memory>
#include <optional>

#include "jchsim/errors.hpp"
#include "jchsim/parallel.hpp"
#include "jchsim/rng.hpp"

namespace jchsim {

StateVector evolve_unitary(const SparseMatrix& h, const StateVector& v, double t, const KrylovOptions& opts,
                           KrylovStats* stats) {
  if (!h.hermitian()) throw InvalidArgument("evolve_unitary: operator is not flagged hermitian");
  if (h.dim() != v.dim()) throw InvalidArgument("evolve_unitary: dimension mismatch");
  if (t == 0.0) return v;
  KrylovPropagator prop(h, opts);
  return StateVector(prop.apply(v.amplitudes, t, stats), v.basis);
}

// Ramp schedule

void RampSchedule::validate() const {
  if (!std::isfinite(delta_start) || !std::isfinite(delta_end)) throw InvalidArgument("ramp: detunings must be finite");
  if (!(total_time >= 0.0) || !std::isfinite(total_time)) throw InvalidArgument("ramp: total_time must be >= 0");
  if (steps < 1) throw InvalidArgument("ramp: steps must be >= 1");
}

double RampSchedule::segment_delta(std::size_t s) const {
  if (s >= num_segments()) throw InvalidArgument("ramp: segment index out of range");
  const double n = static_cast<double>(steps);
  const double x = s < steps ? static_cast<double>(s + 1) / n : 1.0 - static_cast<double>(s - steps + 1) / n;
  const double f = shape == RampShape::Linear ? x : x * x * (3.0 - 2.0 * x);
  if (f == 1.0) return delta_end;
  if (f == 0.0) return delta_start;
  return delta_start + (delta_end - delta_start) * f;
}

double RampSchedule::segment_duration(double A) const {
  if (total_time == 0.0) return 0.0;
  if (!(A > 0.0)) throw InvalidArgument("ramp: time is measured in 1/A and needs A > 0");
  return total_time / (A * static_cast<double>(steps));
}

// Closed-system ramp

RampResult adiabatic_ramp(const ModelParams& params, const LatticeSpec& lattice, BasisPtr basis,
                          const RampSchedule& schedule, const StateVector& v0, const KrylovOptions& opts) {
  schedule.validate();
  if (!basis || v0.basis != basis) {
    if (!basis || !v0.basis || v0.basis->dim() != basis->dim()) throw InvalidArgument("ramp: v0 must live in `basis`");
  }
  if (!v0.is_normalized()) throw InvalidArgument("ramp: v0 must be normalized");
  const std::size_t mid = lattice.middle_site();
  const double dt = schedule.segment_duration(params.A);

  auto record = [&](double time, double delta, const StateVector& psi) {
    const ModelParams p = params.with_detuning(delta);
    const GroundState gs = ground_state(build_hamiltonian(p, lattice, *basis), basis);
    RampPoint pt;
    pt.time = time * params.A;
    pt.delta = delta;
    pt.overlap = std::norm(gs.state.amplitudes.dot(psi.amplitudes));
    pt.var_mid = excitation_variance(psi, mid);
    return pt;
  };

  RampResult out;
  StateVector psi(v0.amplitudes, basis);
  out.trace.push_back(record(0.0, schedule.delta_start, psi));
  double now = 0.0;
  for (std::size_t s = 0; s < schedule.num_segments(); ++s) {
    const double delta = schedule.segment_delta(s);
    if (dt > 0.0) {
      psi = evolve_unitary(build_hamiltonian(params.with_detuning(delta), lattice, *basis), psi, dt, opts);
    }
    now += dt;
    out.trace.push_back(record(now, delta, psi));
  }
  out.final_state = std::move(psi);
  return out;
}

// Quantum-jump ensemble

void propagate_with_jumps(const KrylovPropagator& eff, const std::vector<SparseMatrix>& channels, CVector& psi,
                          double& now, double end, double& threshold, CounterRng& rng, double jump_tol,
                          std::vector<JumpEvent>& jumps) {
  double hint = 0.0;
  CVector scratch;
  while (end - now > 1e-15 * std::max(1.0, end)) {
    KrylovSubstep st = eff.step(psi, end - now, hint);
    if (st.end().squaredNorm() > threshold) {
      psi = st.end();
      now += st.tau();
      continue;
    }
    // locate the crossing of the squared norm
    double lo = 0.0;
    double hi = st.tau();
    CVector at_hi = st.end();
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      CVector v = st.at(mid);
      const double n2 = v.squaredNorm();
      if (std::abs(n2 - threshold) <= jump_tol) {
        hi = mid;
        at_hi = std::move(v);
        break;
      }
      if (n2 > threshold) {
        lo = mid;
      } else {
        hi = mid;
        at_hi = std::move(v);
      }
      if (hi - lo <= 1e-15 * std::max(1.0, now)) break;
    }
    now += hi;
    psi = std::move(at_hi);
    // channel with probability proportional to ||L psi||^2
    std::vector<double> weights(channels.size());
    double total = 0.0;
    for (std::size_t c = 0; c < channels.size(); ++c) {
      channels[c].multiply(psi, scratch);
      weights[c] = scratch.squaredNorm();
      total += weights[c];
    }
    if (!(total > 0.0)) throw NumericalError("quantum jump with vanishing rate");
    const double u = rng.uniform() * total;
    std::size_t chosen = 0;
    double acc = weights[0];
    while (u >= acc && chosen + 1 < weights.size()) acc += weights[++chosen];
    while (weights[chosen] == 0.0 && chosen > 0) --chosen;
    channels[chosen].multiply(psi, scratch);
    psi = scratch / std::sqrt(weights[chosen]);
    jumps.push_back({now, chosen});
    threshold = rng.uniform();
    hint = 0.0;
  }
  now = end;
}

namespace {

struct Segment {
  double delta = 0.0;
  double duration = 0.0;
  bool dissipative = false;
};

std::vector<Segment> build_segments(const ModelParams& params, const RampSchedule& schedule,
                                    const EnsembleOptions& opts) {
  std::vector<Segment> segs;
  const double dt = schedule.segment_duration(params.A);
  const bool ramp_decays = opts.mode == DecayMode::DuringRamp;
  for (std::size_t s = 0; s < schedule.num_segments(); ++s) {
    segs.push_back({schedule.segment_delta(s), dt, ramp_decays});
  }
  if (opts.mode == DecayMode::AtFixedDelta) {
    if (!(opts.hold_time >= 0.0) || opts.hold_samples < 1) {
      throw InvalidArgument("mcwf: hold_time must be >= 0 and hold_samples >= 1");
    }
    if (!(params.A > 0.0)) throw InvalidArgument("mcwf: time is measured in 1/A and needs A > 0");
    const double last = schedule.num_segments() ? schedule.segment_delta(schedule.num_segments() - 1) : schedule.delta_start;
    const double h = opts.hold_time / (params.A * static_cast<double>(opts.hold_samples));
    for (std::size_t k = 0; k < opts.hold_samples; ++k) segs.push_back({last, h, true});
  }
  return segs;
}

struct SegmentOps {
  SparseMatrix h;
  std::optional<KrylovPropagator> eff;   // non-hermitian drift
  std::shared_ptr<const CMatrix> dense;  // exp(-i H_eff duration)
  ModelParams params;
};

TrajectorySample measure(const CVector& psi, const BasisIndexer& b, std::size_t site, const ModelParams& p,
                         const BasisPtr& bp) {
  TrajectorySample s;
  const double norm2 = psi.squaredNorm();
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const double w = std::norm(psi[static_cast<Eigen::Index>(i)]) / norm2;
    if (w == 0.0) continue;
    const double n = b.local(i, site).excitations();
    s.mean_n += w * n;
    s.mean_n2 += w * n * n;
    s.total_excitations += w * b.total_excitations(i);
  }
  StateVector st(psi / std::sqrt(norm2), bp);
  s.pop_1minus = lower_polariton_population(st, site, p);
  return s;
}

}  // namespace

EnsembleResult mcwf_ensemble(const ModelParams& params, const LatticeSpec& lattice, BasisPtr basis,
                             const RampSchedule& schedule, const StateVector& v0, const EnsembleOptions& opts) {
  params.validate();
  schedule.validate();
  if (opts.n_traj < 1) throw InvalidArgument("mcwf: n_traj must be >= 1");
  if (!(opts.jump_tol > 0.0)) throw InvalidArgument("mcwf: jump_tol must be positive");
  if (!basis) throw InvalidArgument("mcwf: null basis");
  if (basis->sector()) throw InvalidArgument("mcwf: decay needs an unrestricted basis");
  if (!v0.basis || v0.basis->num_sites() != lattice.num_sites()) throw InvalidArgument("mcwf: v0 has the wrong lattice");
  if (!v0.is_normalized()) throw InvalidArgument("mcwf: v0 must be normalized");
  const StateVector start = v0.basis == basis ? v0 : embed(v0, basis);
  const std::size_t site = opts.site == static_cast<std::size_t>(-1) ? lattice.middle_site() : opts.site;
  if (site >= lattice.num_sites()) throw InvalidArgument("mcwf: observed site out of range");

  EnsembleResult out;
  out.channels = jump_operators(params, lattice, *basis);
  const bool open = !out.channels.empty();
  const std::vector<Segment> segs = build_segments(params, schedule, opts);

  // operators per segment; shared read-only by all trajectories
  std::optional<SparseMatrix> decay_sum;
  if (open) {
    SparseMatrix acc;
    bool first = true;
    for (const auto& c : out.channels) {
      SparseMatrix term = c.op.adjoint() * c.op;
      acc = first ? term : acc + term;
      first = false;
    }
    decay_sum = acc.scaled(cplx(0.0, -0.5));
  }
  std::vector<SegmentOps> ops(segs.size());
  for (std::size_t s = 0; s < segs.size(); ++s) {
    ops[s].params = params.with_detuning(segs[s].delta);
    ops[s].h = build_hamiltonian(ops[s].params, lattice, *basis);
    if (open && segs[s].dissipative) {
      SparseMatrix eff = ops[s].h + *decay_sum;
      if (basis->dim() <= opts.dense_limit && segs[s].duration > 0.0) {
        if (s > 0 && ops[s - 1].dense && segs[s - 1].delta == segs[s].delta && segs[s - 1].duration == segs[s].duration) {
          ops[s].dense = ops[s - 1].dense;
        } else {
          const CMatrix gen = cplx(0.0, -segs[s].duration) * eff.to_dense();
          ops[s].dense = std::make_shared<const CMatrix>(gen.exp());
        }
      }
      ops[s].eff.emplace(std::move(eff), opts.krylov);
    }
  }
  std::vector<double> sample_times(segs.size() + 1, 0.0);
  std::vector<double> sample_delta(segs.size() + 1, schedule.delta_start);
  for (std::size_t s = 0; s < segs.size(); ++s) {
    sample_times[s + 1] = sample_times[s] + segs[s].duration;
    sample_delta[s + 1] = segs[s].delta;
  }
  const ModelParams p0 = params.with_detuning(schedule.delta_start);
  std::vector<SparseMatrix> channel_ops;
  for (const auto& c : out.channels) channel_ops.push_back(c.op);

  auto run = [&](std::size_t index) {
    TrajectoryRecord rec;
    rec.seed = opts.seed;
    rec.index = index;
    CounterRng rng(opts.seed, index);
    CVector psi = start.amplitudes;
    rec.samples.push_back(measure(psi, *basis, site, p0, basis));
    double threshold = rng.uniform();
    double now = 0.0;
    for (std::size_t s = 0; s < segs.size(); ++s) {
      const Segment& seg = segs[s];
      const double seg_end = sample_times[s + 1];
      if (!ops[s].eff) {
        if (seg.duration > 0.0) psi = evolve_unitary(ops[s].h, StateVector(psi, basis), seg.duration, opts.krylov).amplitudes;
        now = seg_end;
      } else {
        if (ops[s].dense) {
          // the squared norm only decreases, so no crossing means no jump
          CVector next = (*ops[s].dense) * psi;
          if (next.squaredNorm() > threshold) {
            psi = std::move(next);
            now = seg_end;
          }
        }
        const std::size_t before = rec.jumps.size();
        propagate_with_jumps(*ops[s].eff, channel_ops, psi, now, seg_end, threshold, rng, opts.jump_tol, rec.jumps);
        for (std::size_t j = before; j < rec.jumps.size(); ++j) rec.jumps[j].time *= params.A;
        now = seg_end;
      }
      rec.samples.push_back(measure(psi, *basis, site, ops[s].params, basis));
    }
    if (opts.keep_final_states) rec.final_state = StateVector(psi / psi.norm(), basis);
    return rec;
  };

  out.trajectories.resize(opts.n_traj);
  if (!open) {
    TrajectoryRecord base = run(0);
    for (std::size_t i = 0; i < opts.n_traj; ++i) {
      out.trajectories[i] = base;
      out.trajectories[i].index = i;
    }
  } else {
    parallel_for(opts.n_traj, opts.threads, [&](std::size_t i) { out.trajectories[i] = run(i); });
  }

  // ensemble statistics in trajectory order
  const double n = static_cast<double>(opts.n_traj);
  out.rows.resize(sample_times.size());
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    double m1 = 0.0;
    double m2 = 0.0;
    double mp = 0.0;
    double mt = 0.0;
    for (const auto& t : out.trajectories) {
      m1 += t.samples[k].mean_n;
      m2 += t.samples[k].mean_n2;
      mp += t.samples[k].pop_1minus;
      mt += t.samples[k].total_excitations;
    }
    m1 /= n;
    m2 /= n;
    mp /= n;
    mt /= n;
    double sx = 0.0;
    double sp = 0.0;
    const double mx = m2 - 2.0 * m1 * m1;
    for (const auto& t : out.trajectories) {
      const double x = t.samples[k].mean_n2 - 2.0 * m1 * t.samples[k].mean_n;
      sx += (x - mx) * (x - mx);
      sp += (t.samples[k].pop_1minus - mp) * (t.samples[k].pop_1minus - mp);
    }
    EnsembleRow& row = out.rows[k];
    row.time = sample_times[k] * params.A;
    row.delta = sample_delta[k];
    row.mean_var_mid = m2 - m1 * m1;
    row.mean_pop_1minus = mp;
    row.mean_excitations = mt;
    if (opts.n_traj > 1) {
      row.stderr_var_mid = std::sqrt(sx / (n - 1.0) / n);
      row.stderr_pop_1minus = std::sqrt(sp / (n - 1.0) / n);
    }
    const double limit = row.time * (1.0 + 1e-12);
    for (const auto& t : out.trajectories) {
      for (const auto& j : t.jumps) {
        if (j.time <= limit) ++row.jumps_total;
      }
    }
  }
  return out;
}

}  // namespace jchsim
