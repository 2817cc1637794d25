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

#include "jchsim/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>

#include "jchsim/density.hpp"
#include "jchsim/dynamics.hpp"
#include "jchsim/errors.hpp"
#include "jchsim/groundstate.hpp"
#include "jchsim/krylov.hpp"
#include "jchsim/parallel.hpp"
#include "jchsim/rng.hpp"
#include "jchsim/spin_map.hpp"

namespace jchsim {

namespace {

using Index = Eigen::Index;
using Edge2 = std::pair<std::size_t, std::size_t>;

Eigen::Vector2cd plus_state() {
  const double s = 1.0 / std::sqrt(2.0);
  return Eigen::Vector2cd(s, s);
}

Eigen::Vector2cd mediator_state(MediatorInit init) {
  return init == MediatorInit::Plus ? plus_state() : Eigen::Vector2cd(1.0, 0.0);
}

std::size_t bit_of(std::size_t n, std::size_t k) { return std::size_t{1} << (n - 1 - k); }

std::string step_name(std::size_t k) { return "step " + std::to_string(k + 1); }

// Dissipative or unitary evolution of a qubit register for a fixed time.
class RegisterEvolution {
 public:
  RegisterEvolution(const QubitLattice& q, double duration, double gamma, double substep_over_A)
      : n_(q.num_qubits()), gamma_(gamma) {
    const CMatrix h = build_xy_hamiltonian(q).to_dense();
    if (gamma_ == 0.0 || duration == 0.0) {
      substeps_ = 0;
      exact_.emplace(h, n_, duration);
      return;
    }
    substeps_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(duration * q.A / substep_over_A - 1e-9)));
    const double dt = duration / static_cast<double>(substeps_);
    exact_.emplace(h, n_, dt);
    p_half_ = -std::expm1(-0.5 * gamma_ * dt);
    p_full_ = -std::expm1(-gamma_ * dt);
  }

  void apply(CMatrix& rho) const {
    if (substeps_ == 0) {
      exact_->apply(rho);
      return;
    }
    // Strang splitting; damping commutes with the on-site energies
    damp_all(rho, p_half_);
    for (std::size_t s = 0; s < substeps_; ++s) {
      exact_->apply(rho);
      damp_all(rho, s + 1 == substeps_ ? p_half_ : p_full_);
    }
  }

 private:
  void damp_all(CMatrix& rho, double p) const {
    for (std::size_t k = 0; k < n_; ++k) amplitude_damp(rho, n_, k, p);
  }

  std::size_t n_;
  double gamma_;
  std::size_t substeps_ = 0;
  double p_half_ = 0.0;
  double p_full_ = 0.0;
  std::optional<BlockPropagator> exact_;
};

QubitLattice step_lattice(const GridProtocol& p, std::size_t step) {
  QubitLattice q = QubitLattice::uniform(LatticeSpec::grid(p.rows, p.cols), p.A);
  const auto off = p.detuned_sites(step);
  for (std::size_t s = 0; s < p.num_sites(); ++s) q.offsets[s] = off[s] ? p.delta_off : 0.0;
  return q;
}

SparseMatrix lowering_operator(std::size_t n, std::size_t k, double scale) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t bit = bit_of(n, k);
  std::vector<SparseMatrix::Triplet> t;
  for (std::size_t i = 0; i < dim; ++i)
    if (i & bit) t.push_back({i ^ bit, i, cplx(scale, 0.0)});
  return SparseMatrix(dim, t, false);
}

// Frame update of one mediated gate with the given outcome.
void record_gate(CliffordFrame& frame, const Chain& c, int outcome, std::vector<Edge2>* edges) {
  const auto la = frame.logical_at(c.a);
  const auto lb = frame.logical_at(c.b);
  if (!la || !lb) throw InvalidArgument("chain end without a logical qubit");
  frame.conjugate_cz(*la, *lb);
  if (outcome == 0) {
    frame.multiply(*la, Pauli{false, true});
    frame.multiply(*lb, Pauli{false, true});
  }
  frame.swap_sites(c.a, c.b);
  if (edges) edges->emplace_back(std::min(*la, *lb), std::max(*la, *lb));
}

std::vector<std::size_t> frame_sites(const CliffordFrame& f) {
  std::vector<std::size_t> s(f.num_logical());
  for (std::size_t l = 0; l < s.size(); ++l) s[l] = f.site_of(l);
  return s;
}

CVector initial_grid_state(const GridProtocol& p) {
  std::vector<Eigen::Vector2cd> q(p.num_sites());
  for (std::size_t s = 0; s < p.num_sites(); ++s)
    q[s] = p.roles[s] == SiteRole::Mediator ? mediator_state(p.mediator_init) : plus_state();
  return product_state(q);
}

struct DensityBranch {
  CMatrix rho;
  CliffordFrame frame;
  bool all_zero = true;
};

ProtocolResult finish(const GridProtocol& p, std::vector<DensityBranch>& branches, double discarded,
                      const std::vector<Edge2>& edges) {
  const std::size_t n = p.num_sites();
  const std::size_t L = p.logical_sites().size();
  const CVector target = graph_state(L, edges);
  ProtocolResult out;
  out.logical_edges = edges;
  out.branch_count = branches.size();
  double total_trace = 0.0;
  double f_sum = 0.0;
  double u_sum = 0.0;
  CMatrix acc = CMatrix::Zero(static_cast<Index>(std::size_t{1} << L), static_cast<Index>(std::size_t{1} << L));
  for (auto& b : branches) {
    const double tr = b.rho.trace().real();
    total_trace += tr;
    if (b.all_zero) {
      out.postselect_probability = tr;
      out.frame = b.frame;
    }
    const CMatrix raw = reduced_density_matrix(b.rho, n, frame_sites(b.frame));
    const CMatrix bm = b.frame.byproduct_matrix();
    const CMatrix corrected = bm.adjoint() * raw * bm;
    f_sum += target.dot(corrected * target).real();
    u_sum += target.dot(raw * target).real();
    acc += corrected;
  }
  out.trace_error = std::abs(total_trace + discarded - 1.0);
  if (!(total_trace > 0.0)) throw NumericalError("run_protocol: no weight left after post-selection");
  out.fidelity = f_sum / total_trace;
  out.fidelity_uncorrected = u_sum / total_trace;
  out.logical_state = acc / total_trace;
  return out;
}

ProtocolResult run_density(const GridProtocol& p, const std::vector<std::vector<Chain>>& chains) {
  const std::size_t n = p.num_sites();
  const CVector psi0 = initial_grid_state(p);
  std::vector<DensityBranch> branches;
  branches.push_back({psi0 * psi0.adjoint(), CliffordFrame(p.logical_sites()), true});
  std::vector<Edge2> edges;
  double discarded = 0.0;
  const double T = p.effective_gate_time();
  for (std::size_t step = 0; step < chains.size(); ++step) {
    if (chains[step].empty() && p.skip_empty_steps) continue;
    const RegisterEvolution evo(step_lattice(p, step), T, p.gamma, p.substep);
    for (auto& b : branches) evo.apply(b.rho);
    for (const Chain& c : chains[step]) {
      std::vector<DensityBranch> next;
      for (auto& b : branches) {
        for (int o = 0; o < 2; ++o) {
          if (p.postselect && o == 1) {
            discarded += project(b.rho, n, c.mediator, 1).trace().real();
            continue;
          }
          DensityBranch nb{project(b.rho, n, c.mediator, o), b.frame, b.all_zero && o == 0};
          record_gate(nb.frame, c, o, (nb.all_zero && b.all_zero) ? &edges : nullptr);
          next.push_back(std::move(nb));
        }
      }
      branches = std::move(next);
    }
  }
  return finish(p, branches, discarded, edges);
}

struct PureBranch {
  CVector psi;
  CliffordFrame frame;
  bool all_zero = true;
};

ProtocolResult run_pure_closed(const GridProtocol& p, const std::vector<std::vector<Chain>>& chains) {
  const std::size_t n = p.num_sites();
  std::vector<PureBranch> branches;
  branches.push_back({initial_grid_state(p), CliffordFrame(p.logical_sites()), true});
  std::vector<Edge2> edges;
  double discarded = 0.0;
  const double T = p.effective_gate_time();
  for (std::size_t step = 0; step < chains.size(); ++step) {
    if (chains[step].empty() && p.skip_empty_steps) continue;
    const KrylovPropagator prop(build_xy_hamiltonian(step_lattice(p, step)));
    for (auto& b : branches)
      if (T > 0.0) b.psi = prop.apply(b.psi, T);
    for (const Chain& c : chains[step]) {
      std::vector<PureBranch> next;
      for (auto& b : branches) {
        for (int o = 0; o < 2; ++o) {
          CVector v = project(b.psi, n, c.mediator, o);
          if (p.postselect && o == 1) {
            discarded += v.squaredNorm();
            continue;
          }
          PureBranch nb{std::move(v), b.frame, b.all_zero && o == 0};
          record_gate(nb.frame, c, o, (nb.all_zero && b.all_zero) ? &edges : nullptr);
          next.push_back(std::move(nb));
        }
      }
      branches = std::move(next);
    }
  }
  const std::size_t L = p.logical_sites().size();
  const CVector target = graph_state(L, edges);
  ProtocolResult out;
  out.logical_edges = edges;
  out.branch_count = branches.size();
  double total = 0.0;
  double f_sum = 0.0;
  double u_sum = 0.0;
  CMatrix acc = CMatrix::Zero(static_cast<Index>(std::size_t{1} << L), static_cast<Index>(std::size_t{1} << L));
  for (const auto& b : branches) {
    const double w = b.psi.squaredNorm();
    total += w;
    if (b.all_zero) {
      out.postselect_probability = w;
      out.frame = b.frame;
    }
    const CMatrix raw = reduced_density_matrix(b.psi, n, frame_sites(b.frame));
    const CMatrix bm = b.frame.byproduct_matrix();
    const CMatrix corrected = bm.adjoint() * raw * bm;
    f_sum += target.dot(corrected * target).real();
    u_sum += target.dot(raw * target).real();
    acc += corrected;
  }
  if (!(total > 0.0)) throw NumericalError("run_protocol: no weight left after post-selection");
  out.trace_error = std::abs(total + discarded - 1.0);
  out.fidelity = f_sum / total;
  out.fidelity_uncorrected = u_sum / total;
  out.logical_state = acc / total;
  return out;
}

ProtocolResult run_trajectories(const GridProtocol& p, const std::vector<std::vector<Chain>>& chains,
                                const ProtocolOptions& opts) {
  const std::size_t n = p.num_sites();
  const std::size_t L = p.logical_sites().size();
  const double T = p.effective_gate_time();
  std::vector<SparseMatrix> channels;
  for (std::size_t k = 0; k < n; ++k) channels.push_back(lowering_operator(n, k, std::sqrt(p.gamma)));
  const SparseMatrix damping = qubit_excitation_operator(n).scaled(cplx(0.0, -0.5 * p.gamma));
  std::vector<std::optional<KrylovPropagator>> drift(chains.size());
  for (std::size_t step = 0; step < chains.size(); ++step) {
    if (chains[step].empty() && p.skip_empty_steps) continue;
    drift[step].emplace(build_xy_hamiltonian(step_lattice(p, step)) + damping);
  }
  // edges are outcome independent
  std::vector<Edge2> edges;
  {
    CliffordFrame f(p.logical_sites());
    for (std::size_t step = 0; step < chains.size(); ++step)
      for (const Chain& c : chains[step]) record_gate(f, c, 0, &edges);
  }
  const CVector target = graph_state(L, edges);

  struct Outcome {
    bool kept = false;
    bool all_zero = true;
    double fidelity = 0.0;
    double uncorrected = 0.0;
    CMatrix corrected;
    CliffordFrame frame;
  };
  std::vector<Outcome> results(opts.n_traj);
  parallel_for(opts.n_traj, opts.threads, [&](std::size_t i) {
    CounterRng rng(opts.seed, i);
    CVector psi = initial_grid_state(p);
    CliffordFrame frame(p.logical_sites());
    double threshold = rng.uniform();
    std::vector<JumpEvent> jumps;
    Outcome& res = results[i];
    for (std::size_t step = 0; step < chains.size(); ++step) {
      if (!drift[step]) continue;
      double now = 0.0;
      propagate_with_jumps(*drift[step], channels, psi, now, T, threshold, rng, 1e-8, jumps);
      // measurement acts on the normalized state; the jump clock restarts
      psi /= psi.norm();
      threshold = rng.uniform();
      for (const Chain& c : chains[step]) {
        CVector v0 = project(psi, n, c.mediator, 0);
        const double p0 = v0.squaredNorm();
        const int o = rng.uniform() < p0 ? 0 : 1;
        if (o == 1) {
          res.all_zero = false;
          if (p.postselect) return;
          psi = project(psi, n, c.mediator, 1);
        } else {
          psi = std::move(v0);
        }
        psi /= psi.norm();
        record_gate(frame, c, o, nullptr);
      }
    }
    const CMatrix raw = reduced_density_matrix(psi, n, frame_sites(frame));
    const CMatrix bm = frame.byproduct_matrix();
    res.corrected = bm.adjoint() * raw * bm;
    res.fidelity = target.dot(res.corrected * target).real();
    res.uncorrected = target.dot(raw * target).real();
    res.frame = frame;
    res.kept = true;
  });

  ProtocolResult out;
  out.logical_edges = edges;
  std::size_t kept = 0;
  std::size_t zeros = 0;
  CMatrix acc = CMatrix::Zero(static_cast<Index>(std::size_t{1} << L), static_cast<Index>(std::size_t{1} << L));
  for (const auto& r : results) {
    if (r.all_zero) {
      ++zeros;
      out.frame = r.frame;
    }
    if (!r.kept) continue;
    ++kept;
    out.fidelity += r.fidelity;
    out.fidelity_uncorrected += r.uncorrected;
    acc += r.corrected;
  }
  if (kept == 0) throw NumericalError("run_protocol: every trajectory was rejected by post-selection");
  out.fidelity /= static_cast<double>(kept);
  out.fidelity_uncorrected /= static_cast<double>(kept);
  out.logical_state = acc / static_cast<double>(kept);
  out.postselect_probability = static_cast<double>(zeros) / static_cast<double>(opts.n_traj);
  out.branch_count = kept;
  return out;
}

}  // namespace

void lindblad_evolve(CMatrix& rho, const QubitLattice& q, double t, double gamma, double substep_over_A) {
  q.validate();
  if (!(t >= 0.0) || !(gamma >= 0.0) || !(substep_over_A > 0.0))
    throw InvalidArgument("lindblad_evolve: need t >= 0, gamma >= 0, substep > 0");
  RegisterEvolution(q, t, gamma, substep_over_A).apply(rho);
}

// Grid

double GridProtocol::effective_gate_time() const { return gate_time > 0.0 ? gate_time : mirror_time(A); }

std::vector<std::size_t> GridProtocol::logical_sites() const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < roles.size(); ++s)
    if (roles[s] == SiteRole::Logical) out.push_back(s);
  return out;
}

std::vector<bool> GridProtocol::detuned_sites(std::size_t step) const {
  if (step >= step_detuned.size()) throw InvalidArgument("detuned_sites: no such step");
  std::vector<bool> off(num_sites(), false);
  for (std::size_t s = 0; s < num_sites(); ++s) {
    if (roles[s] == SiteRole::Switchable) {
      off[s] = true;
    } else if (roles[s] == SiteRole::Mediator) {
      const auto& d = step_detuned[step];
      off[s] = std::find(d.begin(), d.end(), groups[s]) != d.end();
    }
  }
  return off;
}

void GridProtocol::validate() const {
  if (rows < 1 || cols < 1) throw ConfigError("grid: empty");
  if (roles.size() != num_sites() || groups.size() != num_sites()) throw ConfigError("grid: role map has wrong size");
  if (!(A > 0.0) || !std::isfinite(A)) throw ConfigError("grid: A must be positive");
  if (!(delta_off >= 0.0)) throw ConfigError("grid: delta_off must be >= 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("grid: gamma must be >= 0");
  if (!(gate_time >= 0.0) || !std::isfinite(gate_time)) throw ConfigError("grid: gate_time must be >= 0");
  if (!(substep > 0.0)) throw ConfigError("grid: substep must be positive");
  if (step_detuned.empty()) throw ConfigError("grid: no steps");
}

GridProtocol assign_roles(std::size_t rows, std::size_t cols, double A) {
  if (rows < 3 || cols < 3 || rows % 2 == 0 || cols % 2 == 0)
    throw ConfigError("grid dimensions must be odd and >= 3, got " + std::to_string(rows) + "x" + std::to_string(cols));
  GridProtocol p;
  p.rows = rows;
  p.cols = cols;
  p.A = A;
  p.roles.resize(rows * cols);
  p.groups.resize(rows * cols, ElectrodeGroup::None);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t s = p.site(r, c);
      if (r % 2 == 0 && c % 2 == 0) {
        p.roles[s] = SiteRole::Logical;
      } else if (r % 2 == 1 && c % 2 == 1) {
        p.roles[s] = SiteRole::Switchable;
      } else if (r % 2 == 0) {
        p.roles[s] = SiteRole::Mediator;
        p.groups[s] = c % 4 == 1 ? ElectrodeGroup::A : ElectrodeGroup::B;
      } else {
        p.roles[s] = SiteRole::Mediator;
        p.groups[s] = r % 4 == 1 ? ElectrodeGroup::D : ElectrodeGroup::C;
      }
    }
  }
  using G = ElectrodeGroup;
  p.step_detuned = {{G::B, G::C, G::D}, {G::A, G::C, G::D}, {G::A, G::B, G::C}, {G::A, G::B, G::D}};
  return p;
}

std::vector<std::vector<Chain>> step_chains(const GridProtocol& p) {
  p.validate();
  const LatticeSpec lat = LatticeSpec::grid(p.rows, p.cols);
  std::vector<std::vector<std::size_t>> adj(p.num_sites());
  for (const auto& e : lat.edges()) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<std::vector<Chain>> out(p.step_detuned.size());
  for (std::size_t step = 0; step < p.step_detuned.size(); ++step) {
    const auto off = p.detuned_sites(step);
    std::vector<bool> seen(p.num_sites(), false);
    for (std::size_t s0 = 0; s0 < p.num_sites(); ++s0) {
      if (off[s0] || seen[s0]) continue;
      std::vector<std::size_t> comp;
      std::queue<std::size_t> todo;
      todo.push(s0);
      seen[s0] = true;
      while (!todo.empty()) {
        const std::size_t s = todo.front();
        todo.pop();
        comp.push_back(s);
        for (auto t : adj[s])
          if (!off[t] && !seen[t]) {
            seen[t] = true;
            todo.push(t);
          }
      }
      if (comp.size() == 1 && p.roles[comp[0]] == SiteRole::Logical) continue;
      std::sort(comp.begin(), comp.end());
      std::vector<std::size_t> mids, ends;
      for (auto s : comp) (p.roles[s] == SiteRole::Logical ? ends : mids).push_back(s);
      auto linked = [&](std::size_t a, std::size_t b) {
        return std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end();
      };
      const bool ok = comp.size() == 3 && mids.size() == 1 && ends.size() == 2 &&
                      p.roles[mids[0]] == SiteRole::Mediator && linked(mids[0], ends[0]) && linked(mids[0], ends[1]);
      if (!ok)
        throw ConfigError(step_name(step) + ": on-resonance component of " + std::to_string(comp.size()) +
                          " sites around site " + std::to_string(comp[0]) + " is not a logical-mediator-logical chain");
      out[step].push_back({ends[0], mids[0], ends[1]});
    }
  }
  return out;
}

ProtocolResult run_protocol(const GridProtocol& p, const ProtocolOptions& opts) {
  const auto chains = step_chains(p);
  const std::size_t n = p.num_sites();
  if (opts.mode == SimulationMode::DensityMatrix) {
    if (n > opts.max_density_qubits)
      throw CapacityError("run_protocol: " + std::to_string(n) + " qubits exceed the density-matrix limit of " +
                          std::to_string(opts.max_density_qubits) + "; use the pure-state trajectory mode");
    return run_density(p, chains);
  }
  if (n > opts.max_pure_qubits)
    throw CapacityError("run_protocol: " + std::to_string(n) + " qubits exceed the pure-state limit of " +
                        std::to_string(opts.max_pure_qubits));
  if (p.gamma == 0.0) return run_pure_closed(p, chains);
  if (opts.n_traj < 1) throw InvalidArgument("run_protocol: n_traj must be >= 1");
  return run_trajectories(p, chains, opts);
}

std::vector<FidelityPoint> delta_off_scan(const GridProtocol& base, const std::vector<double>& delta_off_over_A,
                                          const ProtocolOptions& opts) {
  std::vector<FidelityPoint> out(delta_off_over_A.size());
  ProtocolOptions inner = opts;
  const bool outer_parallel = opts.mode == SimulationMode::DensityMatrix || base.gamma == 0.0;
  if (outer_parallel) inner.threads = 1;
  parallel_for(out.size(), outer_parallel ? opts.threads : 1, [&](std::size_t i) {
    GridProtocol p = base;
    p.delta_off = delta_off_over_A[i] * base.A;
    const ProtocolResult r = run_protocol(p, inner);
    out[i] = {delta_off_over_A[i], base.gamma / base.A, r.fidelity, r.postselect_probability, r.branch_count};
  });
  return out;
}

double error_scaling_slope(const std::vector<FidelityPoint>& points, double floor) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (const auto& pt : points) {
    const double err = 1.0 - pt.fidelity;
    if (!std::isfinite(pt.delta_off) || !(pt.delta_off > 0.0) || !(err > floor)) continue;
    const double x = std::log(pt.delta_off);
    const double y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) throw NumericalError("error_scaling_slope: fewer than two usable points");
  const double md = static_cast<double>(m);
  const double den = md * sxx - sx * sx;
  if (den == 0.0) throw NumericalError("error_scaling_slope: degenerate abscissae");
  return (md * sxy - sx * sy) / den;
}

bool error_strictly_decreasing(const std::vector<FidelityPoint>& points) {
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(1.0 - points[i].fidelity < 1.0 - points[i - 1].fidelity)) return false;
  return true;
}

// Box to linear

CMatrix box_to_linear_unitary() {
  const Matrix2c h = hadamard();
  Matrix2c z;
  z << 1, 0, 0, -1;
  const std::array<Matrix2c, 4> ops = {h, h, z, z};
  CMatrix u = CMatrix::Ones(1, 1);
  for (const auto& op : ops) {
    CMatrix next(2 * u.rows(), 2 * u.cols());
    for (Index i = 0; i < u.rows(); ++i)
      for (Index j = 0; j < u.cols(); ++j)
        next.block(2 * i, 2 * j, 2, 2) = u(i, j) * op;
    u = std::move(next);
  }
  return u;
}

std::vector<std::size_t> box_to_linear_path() { return {2, 1, 0, 3}; }

std::vector<PauliString> linear_cluster_stabilizers(std::size_t n, const std::vector<std::size_t>& path) {
  std::vector<PauliString> out;
  for (std::size_t k = 0; k < path.size(); ++k) {
    PauliString s;
    s.ops.assign(n, Pauli{});
    if (path[k] >= n) throw InvalidArgument("linear_cluster_stabilizers: qubit out of range");
    s.ops[path[k]].x = true;
    if (k > 0) s.ops[path[k - 1]].z = true;
    if (k + 1 < path.size()) s.ops[path[k + 1]].z = true;
    out.push_back(std::move(s));
  }
  return out;
}

CMatrix pauli_string_matrix(const PauliString& s) {
  const std::size_t n = s.ops.size();
  const std::size_t dim = std::size_t{1} << n;
  CMatrix m = CMatrix::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t row = col;
    int sign = s.sign;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t bit = bit_of(n, k);
      // X Z convention: Z acts first
      if (s.ops[k].z && (col & bit)) sign = -sign;
      if (s.ops[k].x) row ^= bit;
    }
    m(static_cast<Index>(row), static_cast<Index>(col)) = static_cast<double>(sign);
  }
  return m;
}

double expectation(const CVector& psi, const PauliString& s) {
  return psi.dot(pauli_string_matrix(s) * psi).real();
}

// Resources

std::string to_string(ResourceMode mode) {
  switch (mode) {
    case ResourceMode::Full: return "full";
    case ResourceMode::RowReuse: return "row_reuse";
    case ResourceMode::Circuit: return "circuit";
  }
  return "full";
}

ResourceMode resource_mode_from_string(const std::string& s) {
  if (s == "full") return ResourceMode::Full;
  if (s == "row_reuse") return ResourceMode::RowReuse;
  if (s == "circuit") return ResourceMode::Circuit;
  throw ConfigError("unknown resource mode '" + s + "' (expected full, row_reuse or circuit)");
}

namespace {
// entangling layers needed along one direction of an array of extent m
std::size_t layers(std::size_t m) { return (m >= 3 ? 1 : 0) + (m >= 5 ? 1 : 0); }
}  // namespace

ResourceEstimate estimate_resources(const ResourceRequest& req, ResourceMode mode) {
  if (req.q < 1) throw ConfigError("estimate: q must be >= 1");
  if (req.cluster_columns < 1) throw ConfigError("estimate: cluster_columns must be >= 1");
  if (!(req.A > 0.0)) throw ConfigError("estimate: A must be positive");
  ResourceEstimate e;
  e.mode = mode;
  e.q = req.q;
  e.cluster_width = 2 * req.q - 1;
  const double gate = mirror_time(req.A) * req.A;
  switch (mode) {
    case ResourceMode::Full:
      e.array_rows = 2 * e.cluster_width - 1;
      e.array_cols = 2 * req.cluster_columns - 1;
      e.steps = layers(e.array_rows) + layers(e.array_cols);
      e.time_over_A = static_cast<double>(e.steps) * gate;
      break;
    case ResourceMode::RowReuse:
      e.array_rows = 2 * e.cluster_width - 1;
      e.array_cols = 3;
      e.steps = req.cluster_columns;
      // each cycle: vertical layers of the fresh column plus one horizontal layer
      e.time_over_A = static_cast<double>(e.steps * (layers(e.array_rows) + 1)) * gate;
      break;
    case ResourceMode::Circuit:
      e.array_rows = 2 * ((req.q + 1) / 2) - 1;
      e.array_cols = 3;
      e.steps = req.circuit_steps;
      e.time_over_A = static_cast<double>(e.steps) * gate;
      break;
  }
  return e;
}

// Row reuse

void RowReuseConfig::validate() const {
  if (logical_rows < 1) throw ConfigError("row reuse: logical_rows must be >= 1");
  if (!(A > 0.0) || !std::isfinite(A)) throw ConfigError("row reuse: A must be positive");
  if (!(delta_off >= 0.0)) throw ConfigError("row reuse: delta_off must be >= 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("row reuse: gamma must be >= 0");
  if (!(gate_time >= 0.0)) throw ConfigError("row reuse: gate_time must be >= 0");
  if (!(substep > 0.0)) throw ConfigError("row reuse: substep must be positive");
}

namespace {

struct ColumnPlan {
  std::vector<std::vector<Chain>> vertical;  // chains of the fresh column, per layer
  std::vector<Edge2> graph;                  // resulting graph on logical rows
};

ColumnPlan plan_column(std::size_t logical_rows, std::size_t cols) {
  ColumnPlan plan;
  auto site = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
  std::vector<Chain> even, odd;
  for (std::size_t i = 0; i + 1 < logical_rows; ++i) {
    Chain ch{site(2 * i, 2), site(2 * i + 1, 2), site(2 * i + 2, 2)};
    (i % 2 == 0 ? even : odd).push_back(ch);
  }
  if (!even.empty()) plan.vertical.push_back(even);
  if (!odd.empty()) plan.vertical.push_back(odd);
  // track the graph through the relabelling SWAPs, on logical rows
  std::vector<Edge2> g;
  for (const auto& layer : plan.vertical) {
    for (const auto& ch : layer) {
      const std::size_t a = ch.a / cols / 2;
      const std::size_t b = ch.b / cols / 2;
      auto it = std::find(g.begin(), g.end(), Edge2{a, b});
      if (it != g.end())
        g.erase(it);
      else
        g.emplace_back(a, b);
      for (auto& e : g) {
        for (auto* v : {&e.first, &e.second}) {
          if (*v == a)
            *v = b;
          else if (*v == b)
            *v = a;
        }
        if (e.first > e.second) std::swap(e.first, e.second);
      }
    }
  }
  plan.graph = g;
  return plan;
}

CMatrix cz_graph_matrix(std::size_t n, const std::vector<Edge2>& edges) {
  const std::size_t dim = std::size_t{1} << n;
  CMatrix m = CMatrix::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    int parity = 0;
    for (const auto& [a, b] : edges)
      if ((i & bit_of(n, a)) && (i & bit_of(n, b))) parity ^= 1;
    m(static_cast<Index>(i), static_cast<Index>(i)) = parity ? -1.0 : 1.0;
  }
  return m;
}

// Measure qubit k in Z and apply (xmask, zmask) on outcome `flip_on`.
void measure_with_feedforward(CMatrix& rho, std::size_t n, std::size_t k, int flip_on, std::size_t xmask,
                              std::size_t zmask) {
  CMatrix r0 = project(rho, n, k, 0);
  CMatrix r1 = project(rho, n, k, 1);
  if (flip_on == 0)
    apply_pauli(r0, xmask, zmask);
  else
    apply_pauli(r1, xmask, zmask);
  rho = r0 + r1;
}

}  // namespace

CMatrix row_reuse_ideal_cycle(std::size_t logical_rows) {
  if (logical_rows < 1) throw InvalidArgument("row_reuse_ideal_cycle: need at least one row");
  const ColumnPlan plan = plan_column(logical_rows, 3);
  CMatrix hn = CMatrix::Ones(1, 1);
  const Matrix2c h = hadamard();
  for (std::size_t l = 0; l < logical_rows; ++l) {
    CMatrix next(2 * hn.rows(), 2 * hn.cols());
    for (Index i = 0; i < hn.rows(); ++i)
      for (Index j = 0; j < hn.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = hn(i, j) * h;
    hn = std::move(next);
  }
  return cz_graph_matrix(logical_rows, plan.graph) * hn;
}

std::vector<CMatrix> row_reuse_cycles(const RowReuseConfig& cfg, const CMatrix& logical_rho, std::size_t cycles) {
  std::vector<CMatrix> out{logical_rho};
  for (std::size_t k = 0; k < cycles; ++k) out.push_back(row_reuse_step(cfg, out.back()));
  return out;
}

CMatrix row_reuse_step(const RowReuseConfig& cfg, const CMatrix& logical_rho) {
  cfg.validate();
  const std::size_t L = cfg.logical_rows;
  const std::size_t R = cfg.physical_rows();
  const std::size_t cols = 3;
  const std::size_t n = cfg.num_sites();
  if (n > 12)
    throw CapacityError("row_reuse_step: " + std::to_string(n) + " qubits exceed the density-matrix limit of 12");
  if (logical_rho.rows() != static_cast<Index>(std::size_t{1} << L) || logical_rho.cols() != logical_rho.rows())
    throw InvalidArgument("row_reuse_step: input has the wrong dimension");
  auto site = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
  const double T = cfg.gate_time > 0.0 ? cfg.gate_time : mirror_time(cfg.A);

  std::vector<std::size_t> data, fresh, hmed;
  for (std::size_t i = 0; i < L; ++i) {
    data.push_back(site(2 * i, 0));
    hmed.push_back(site(2 * i, 1));
    fresh.push_back(site(2 * i, 2));
  }
  // rest of the register in ascending site order
  std::vector<Eigen::Vector2cd> rest;
  for (std::size_t s = 0; s < n; ++s) {
    if (std::find(data.begin(), data.end(), s) != data.end()) continue;
    const std::size_t r = s / cols;
    const std::size_t c = s % cols;
    if (r % 2 == 0 && c == 2)
      rest.push_back(plus_state());
    else if (r % 2 == 0 || c == 2)
      rest.push_back(mediator_state(cfg.mediator_init));
    else
      rest.push_back(Eigen::Vector2cd(1.0, 0.0));  // switchable sites stay empty
  }
  CMatrix rho = embed_register(logical_rho, n, data, product_state(rest));

  const ColumnPlan plan = plan_column(L, cols);
  const LatticeSpec lattice = LatticeSpec::grid(R, cols);
  auto lattice_with = [&](const std::vector<bool>& on) {
    QubitLattice q = QubitLattice::uniform(lattice, cfg.A);
    for (std::size_t s = 0; s < n; ++s) q.offsets[s] = on[s] ? 0.0 : cfg.delta_off;
    return q;
  };

  // vertical layers on the fresh column
  for (const auto& layer : plan.vertical) {
    std::vector<bool> on(n, false);
    for (auto s : data) on[s] = true;  // idle
    for (auto s : fresh) on[s] = true;
    for (const auto& ch : layer) on[ch.mediator] = true;
    RegisterEvolution(lattice_with(on), T, cfg.gamma, cfg.substep).apply(rho);
    for (const auto& ch : layer)
      measure_with_feedforward(rho, n, ch.mediator, 0, 0, bit_of(n, ch.a) | bit_of(n, ch.b));
  }
  // horizontal layer: data and fresh exchange places
  {
    std::vector<bool> on(n, false);
    for (std::size_t i = 0; i < L; ++i) on[data[i]] = on[hmed[i]] = on[fresh[i]] = true;
    RegisterEvolution(lattice_with(on), T, cfg.gamma, cfg.substep).apply(rho);
    for (std::size_t i = 0; i < L; ++i)
      measure_with_feedforward(rho, n, hmed[i], 0, 0, bit_of(n, data[i]) | bit_of(n, fresh[i]));
  }
  // old data now in column 2: X measurement, byproduct X on the output and
  // Z on its column neighbours
  for (std::size_t i = 0; i < L; ++i) {
    std::size_t zmask = 0;
    for (const auto& [a, b] : plan.graph) {
      if (a == i) zmask |= bit_of(n, data[b]);
      if (b == i) zmask |= bit_of(n, data[a]);
    }
    apply_single_qubit(rho, n, fresh[i], hadamard());
    measure_with_feedforward(rho, n, fresh[i], 1, bit_of(n, data[i]), zmask);
  }
  return reduced_density_matrix(rho, n, data);
}

}  // namespace jchsim
