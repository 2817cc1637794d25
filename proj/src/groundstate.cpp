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

#include "jchsim/groundstate.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "jchsim/eigensolver.hpp"
#include "jchsim/errors.hpp"
#include "jchsim/parallel.hpp"

namespace jchsim {

namespace {

void fix_phase(CVector& v) {
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    // first index wins ties so the choice is deterministic
    if (std::abs(v[i]) > mag * (1.0 + 1e-12)) {
      mag = std::abs(v[i]);
      best = i;
    }
  }
  if (mag > 0.0) v *= std::conj(v[best]) / mag;
}

void check_site(const StateVector& s, std::size_t site) {
  if (!s.basis) throw InvalidArgument("state: null basis");
  if (site >= s.basis->num_sites()) {
    throw InvalidArgument("site " + std::to_string(site) + " out of range");
  }
}

}  // namespace

GroundState ground_state(const SparseMatrix& h, BasisPtr basis, const GroundStateOptions& opts) {
  if (!basis) throw InvalidArgument("ground_state: null basis");
  if (h.dim() != basis->dim()) throw InvalidArgument("ground_state: basis and operator dimensions differ");
  if (!h.hermitian()) throw InvalidArgument("ground_state: operator is not flagged hermitian");

  bool dense = opts.method == EigenMethod::Dense ||
               (opts.method == EigenMethod::Auto && h.dim() <= opts.dense_limit);
  Eigenpairs ep;
  if (dense) {
    ep = dense_lowest(h, 2);
  } else {
    LanczosOptions lo;
    lo.count = 2;
    lo.tol = opts.tol;
    ep = lanczos_lowest(h, lo);
  }

  GroundState gs;
  gs.energy = ep.values.front();
  CVector v = ep.vectors.front();
  fix_phase(v);
  gs.state = StateVector(std::move(v), std::move(basis));
  gs.residual = ep.residuals.front();
  gs.gap = ep.values.size() > 1 ? ep.values[1] - ep.values[0] : std::numeric_limits<double>::infinity();
  gs.degenerate = gs.gap <= opts.degeneracy_tol * std::max(1.0, std::abs(gs.energy));
  return gs;
}

double mean_excitations(const StateVector& state, std::size_t site) {
  check_site(state, site);
  const auto& b = *state.basis;
  double m = 0.0;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    m += std::norm(state.amplitudes[static_cast<Eigen::Index>(i)]) * b.local(i, site).excitations();
  }
  return m;
}

double excitation_variance(const StateVector& state, std::size_t site) {
  check_site(state, site);
  const auto& b = *state.basis;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const double p = std::norm(state.amplitudes[static_cast<Eigen::Index>(i)]);
    const double n = b.local(i, site).excitations();
    m1 += p * n;
    m2 += p * n * n;
  }
  return m2 - m1 * m1;
}

double lower_polariton_population(const StateVector& state, std::size_t site, const ModelParams& params) {
  check_site(state, site);
  const auto& b = *state.basis;
  const Eigen::Vector2d chi = dressed_state(1, params).eigvec_minus;
  const LocalState g1{0, 1};
  const LocalState e0{1, 0};
  double pop = 0.0;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    if (b.local(i, site) != g1) continue;
    cplx amp = chi[0] * state.amplitudes[static_cast<Eigen::Index>(i)];
    if (auto j = b.index_of_code(b.with_local(b.code(i), site, e0))) {
      amp += chi[1] * state.amplitudes[static_cast<Eigen::Index>(*j)];
    }
    pop += std::norm(amp);
  }
  return pop;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    throw InvalidArgument("log_grid: need 0 < lo < hi and at least two points");
  }
  std::vector<double> g(points);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

SweepResult sweep_order_parameter(const ModelParams& params, const LatticeSpec& lattice, int n_max,
                                  int filling, const std::vector<double>& delta_grid,
                                  const GroundStateOptions& opts, std::size_t threads) {
  if (filling < 0) throw InvalidArgument("sweep: filling must be >= 0");
  if (delta_grid.empty()) throw InvalidArgument("sweep: empty detuning grid");
  for (std::size_t i = 1; i < delta_grid.size(); ++i) {
    if (!(delta_grid[i] > delta_grid[i - 1])) {
      throw InvalidArgument("sweep: detuning grid must be strictly increasing");
    }
  }
  const int sector = filling * static_cast<int>(lattice.num_sites());
  auto basis = std::make_shared<const BasisIndexer>(lattice, n_max, sector);
  const std::size_t mid = lattice.middle_site();

  SweepResult out;
  out.rows.resize(delta_grid.size());
  parallel_for(delta_grid.size(), threads, [&](std::size_t i) {
    const double delta = delta_grid[i];
    try {
      const ModelParams p = params.with_detuning(delta);
      const SparseMatrix h = build_hamiltonian(p, lattice, *basis);
      const GroundState gs = ground_state(h, basis, opts);
      SweepRow& row = out.rows[i];
      row.delta = delta;
      row.delta_over_g = params.g != 0.0 ? delta / params.g : delta;
      row.var_mid = excitation_variance(gs.state, mid);
      row.pop_1minus = lower_polariton_population(gs.state, mid, p);
      row.energy = gs.energy;
      row.num_sites = lattice.num_sites();
      row.degenerate = gs.degenerate;
    } catch (const NumericalError& e) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "sweep at delta=" << delta << ": " << e.what();
      throw NumericalError(msg.str());
    }
  });
  return out;
}

double transition_steepness(const SweepResult& sweep) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sweep.rows.size(); ++i) {
    const auto& a = sweep.rows[i - 1];
    const auto& b = sweep.rows[i];
    const double slope = (b.var_mid - a.var_mid) / (std::log10(b.delta) - std::log10(a.delta));
    best = std::max(best, slope);
  }
  return best;
}

SteepnessResult refine_transition_steepness(const ModelParams& params, const LatticeSpec& lattice, int n_max,
                                            int filling, const SweepResult& coarse, const GroundStateOptions& opts,
                                            double width) {
  const auto& rows = coarse.rows;
  if (rows.size() < 2) throw InvalidArgument("steepness: need a sweep with at least two rows");
  if (!(width > 0.0)) throw InvalidArgument("steepness: width must be positive");
  std::size_t j = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double s = (rows[i + 1].var_mid - rows[i].var_mid) / (std::log10(rows[i + 1].delta) - std::log10(rows[i].delta));
    if (s > best) {
      best = s;
      j = i;
    }
  }
  auto basis = std::make_shared<const BasisIndexer>(lattice, n_max, filling * static_cast<int>(lattice.num_sites()));
  const std::size_t mid = lattice.middle_site();
  SteepnessResult out;
  auto var_at = [&](double x) {
    const ModelParams p = params.with_detuning(std::pow(10.0, x));
    ++out.evaluations;
    return excitation_variance(ground_state(build_hamiltonian(p, lattice, *basis), basis, opts).state, mid);
  };
  const double h = 0.25 * width;
  auto slope_at = [&](double x) { return (var_at(x + h) - var_at(x - h)) / (2.0 * h); };

  double a = std::log10(rows[j > 0 ? j - 1 : 0].delta);
  double b = std::log10(rows[std::min(j + 2, rows.size() - 1)].delta);
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = slope_at(c);
  double fd = slope_at(d);
  while (b - a > width) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = slope_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = slope_at(d);
    }
  }
  const double x = fc > fd ? c : d;
  out.slope = std::max(fc, fd);
  out.delta = std::pow(10.0, x);
  return out;
}

}  // namespace jchsim
