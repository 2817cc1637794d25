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

#include "jchsim/spin_map.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "jchsim/dynamics.hpp"
#include "jchsim/errors.hpp"
#include "jchsim/groundstate.hpp"
#include "jchsim/parallel.hpp"

namespace jchsim {

namespace {

// below this the outcome is treated as impossible
constexpr double kMinProbability = 1e-12;

CMatrix spectral_propagator(const CMatrix& h, double t) {
  if (t == 0.0) return CMatrix::Identity(h.rows(), h.cols());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const CVector phases = (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

// Qubit lattice

QubitLattice QubitLattice::uniform(LatticeSpec lattice, double A) {
  QubitLattice q;
  q.offsets.assign(lattice.num_sites(), 0.0);
  q.lattice = std::move(lattice);
  q.A = A;
  q.validate();
  return q;
}

bool QubitLattice::decoupled(std::size_t k) const { return std::isinf(offsets.at(k)); }

void QubitLattice::validate() const {
  if (offsets.size() != lattice.num_sites()) throw InvalidArgument("qubit lattice: one offset per site required");
  for (double d : offsets) {
    if (!(d >= 0.0)) throw InvalidArgument("qubit lattice: offsets must be >= 0");
  }
  if (!(A > 0.0) || !std::isfinite(A)) throw InvalidArgument("qubit lattice: coupling A must be positive");
  if (lattice.num_sites() < 1 || lattice.num_sites() > 30) throw InvalidArgument("qubit lattice: 1..30 qubits supported");
}

SparseMatrix build_xy_hamiltonian(const QubitLattice& q) {
  q.validate();
  const std::size_t n = q.num_qubits();
  const std::size_t dim = std::size_t{1} << n;
  std::vector<SparseMatrix::Triplet> t;
  for (std::size_t i = 0; i < dim; ++i) {
    double diag = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if ((i & qubit_bit(n, k)) && !q.decoupled(k)) diag += q.offsets[k];
    }
    if (diag != 0.0) t.push_back({i, i, diag});
    for (const auto& e : q.lattice.edges()) {
      if (q.decoupled(e.a) || q.decoupled(e.b)) continue;
      const std::size_t ba = qubit_bit(n, e.a);
      const std::size_t bb = qubit_bit(n, e.b);
      // one excitation on the edge: hop it across; the partner entry is
      // emitted when the loop reaches j
      if (((i & ba) != 0) != ((i & bb) != 0)) t.push_back({i ^ ba ^ bb, i, q.A});
    }
  }
  return SparseMatrix(dim, t, true);
}

SparseMatrix qubit_excitation_operator(std::size_t num_qubits) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  Eigen::VectorXd d(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) d[static_cast<Eigen::Index>(i)] = std::popcount(i);
  return SparseMatrix::diagonal(d);
}

CMatrix single_excitation_hamiltonian(const QubitLattice& q) {
  q.validate();
  const auto n = static_cast<Eigen::Index>(q.num_qubits());
  CMatrix h = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!q.decoupled(static_cast<std::size_t>(k))) h(k, k) = q.offsets[static_cast<std::size_t>(k)];
  }
  for (const auto& e : q.lattice.edges()) {
    if (q.decoupled(e.a) || q.decoupled(e.b)) continue;
    h(static_cast<Eigen::Index>(e.a), static_cast<Eigen::Index>(e.b)) += q.A;
    h(static_cast<Eigen::Index>(e.b), static_cast<Eigen::Index>(e.a)) += q.A;
  }
  return h;
}

CMatrix single_excitation_propagator(const QubitLattice& q, double t) {
  return spectral_propagator(single_excitation_hamiltonian(q), t);
}

double transfer_fidelity(std::size_t n, double t, double A) {
  if (n < 1) throw InvalidArgument("transfer: need at least one site");
  const CMatrix u = single_excitation_propagator(QubitLattice::uniform(LatticeSpec::chain(n), A), t);
  return std::abs(u(static_cast<Eigen::Index>(n - 1), 0));
}

double end_to_end_coupling(double A, double delta_off) {
  if (!(A > 0.0) || !(delta_off >= 0.0) || !std::isfinite(delta_off)) {
    throw InvalidArgument("end_to_end_coupling: need A > 0 and finite delta_off >= 0");
  }
  QubitLattice q = QubitLattice::uniform(LatticeSpec::chain(3), A);
  q.offsets[1] = delta_off;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(single_excitation_hamiltonian(q));
  // the two levels with the least weight on the middle site
  std::array<Eigen::Index, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::norm(es.eigenvectors()(1, a)) < std::norm(es.eigenvectors()(1, b));
  });
  return 0.5 * std::abs(es.eigenvalues()[order[0]] - es.eigenvalues()[order[1]]);
}

// Two-qubit invariants

Matrix4c swap_gate() {
  Matrix4c s = Matrix4c::Zero();
  s(0, 0) = s(3, 3) = 1.0;
  s(1, 2) = s(2, 1) = 1.0;
  return s;
}

Matrix4c cz_gate() {
  Matrix4c c = Matrix4c::Identity();
  c(3, 3) = -1.0;
  return c;
}

MakhlinInvariants makhlin_invariants(const Matrix4c& u) {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  Matrix4c q;
  q << 1, 0, 0, i,
       0, i, 1, 0,
       0, i, -1, 0,
       1, 0, 0, -i;
  q *= r;
  const Matrix4c ub = q.adjoint() * u * q;
  const Matrix4c m = ub.transpose() * ub;
  const cplx det = u.determinant();
  const cplx tr = m.trace();
  const cplx tr2 = (m * m).trace();
  return {tr * tr / (16.0 * det), (tr * tr - tr2) / (4.0 * det)};
}

double local_equivalence_distance(const Matrix4c& u, const Matrix4c& v) {
  const auto a = makhlin_invariants(u);
  const auto b = makhlin_invariants(v);
  return std::abs(a.g1 - b.g1) + std::abs(a.g2 - b.g2);
}

// Mediated gate

std::array<ConditionalGate, 2> mediated_gate(double gate_time, const Vector2c& mediator, double A) {
  if (!(gate_time >= 0.0) || !std::isfinite(gate_time)) throw InvalidArgument("mediated_gate: gate_time must be >= 0");
  if (std::abs(mediator.norm() - 1.0) > 1e-10) throw InvalidArgument("mediated_gate: mediator state must be normalized");
  const QubitLattice q = QubitLattice::uniform(LatticeSpec::chain(3), A);
  const CMatrix u = spectral_propagator(build_xy_hamiltonian(q).to_dense(), gate_time);
  auto idx = [](int a, int m, int b) { return static_cast<Eigen::Index>(4 * a + 2 * m + b); };

  std::array<ConditionalGate, 2> out;
  const Matrix4c cz = cz_gate();
  const Matrix4c sw = swap_gate();
  for (int o = 0; o < 2; ++o) {
    ConditionalGate& g = out[static_cast<std::size_t>(o)];
    g.outcome = o;
    for (int a2 = 0; a2 < 2; ++a2) {
      for (int b2 = 0; b2 < 2; ++b2) {
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            cplx s = 0.0;
            for (int m = 0; m < 2; ++m) s += u(idx(a2, o, b2), idx(a, m, b)) * mediator[m];
            g.kraus(2 * a2 + b2, 2 * a + b) = s;
          }
        }
      }
    }
    g.probability = g.kraus.squaredNorm() / 4.0;
    if (g.probability > kMinProbability) {
      g.gate = g.kraus / std::sqrt(g.probability);
      g.unitary_defect = (g.gate.adjoint() * g.gate - Matrix4c::Identity()).cwiseAbs().maxCoeff();
      g.cp_distance = local_equivalence_distance(sw * g.gate, cz);
    } else {
      g.gate.setZero();
      g.unitary_defect = 1.0;
      g.cp_distance = std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

std::vector<GateScanRow> gate_time_scan(double A, double t_max, std::size_t points, const Vector2c& mediator,
                                        std::size_t threads) {
  if (points < 1) throw InvalidArgument("gate scan: need at least one point");
  if (!(t_max > 0.0)) throw InvalidArgument("gate scan: t_max must be positive");
  std::vector<GateScanRow> rows(points);
  parallel_for(points, threads, [&](std::size_t k) {
    const double t = k + 1 == points ? t_max : t_max * static_cast<double>(k + 1) / static_cast<double>(points);
    const auto g = mediated_gate(t, mediator, A);
    rows[k] = {t, g[0].probability, g[1].probability, g[0].unitary_defect, g[1].unitary_defect,
               g[0].cp_distance, g[1].cp_distance};
  });
  return rows;
}

std::vector<std::size_t> calibrated_rows(const std::vector<GateScanRow>& rows, double tol) {
  std::vector<std::size_t> hits;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (r.unitary_defect_0 <= tol && r.unitary_defect_1 <= tol && r.cp_equiv_0 <= tol && r.cp_equiv_1 <= tol) {
      hits.push_back(k);
    }
  }
  return hits;
}

// Cavity model against the qubit model

MappingReport compare_jch_vs_xy(std::size_t n, const ModelParams& params, double t_max, std::size_t points,
                                const std::vector<int>& bits_in, int n_max) {
  params.validate();
  if (n < 1 || n > 8) throw InvalidArgument("compare: 1..8 sites supported");
  if (points < 2 || !(t_max >= 0.0)) throw InvalidArgument("compare: need t_max >= 0 and at least two points");
  std::vector<int> bits = bits_in;
  if (bits.empty()) {
    bits.assign(n, 0);
    bits[0] = 1;
  }
  if (bits.size() != n) throw InvalidArgument("compare: one bit per site required");
  int ones = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw InvalidArgument("compare: bits must be 0 or 1");
    ones += b;
  }

  const auto lattice = LatticeSpec::chain(n);
  auto basis = std::make_shared<const BasisIndexer>(lattice, n_max, ones);
  const Eigen::Vector2d chi = dressed_state(1, params).eigvec_minus;

  // qubit-subspace vectors in the cavity basis, indexed by bitstring
  const std::size_t qdim = std::size_t{1} << n;
  std::vector<std::pair<std::size_t, CVector>> embedded;
  for (std::size_t s = 0; s < qdim; ++s) {
    if (std::popcount(s) != ones) continue;
    CVector v = CVector::Zero(static_cast<Eigen::Index>(basis->dim()));
    for (std::size_t i = 0; i < basis->dim(); ++i) {
      cplx amp = 1.0;
      for (std::size_t k = 0; k < n && amp != 0.0; ++k) {
        const LocalState l = basis->local(i, k);
        if (s & qubit_bit(n, k)) {
          if (l == LocalState{0, 1}) amp *= chi[0];
          else if (l == LocalState{1, 0}) amp *= chi[1];
          else amp = 0.0;
        } else if (!(l == LocalState{0, 0})) {
          amp = 0.0;
        }
      }
      v[static_cast<Eigen::Index>(i)] = amp;
    }
    embedded.emplace_back(s, std::move(v));
  }
  std::size_t start_code = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (bits[k]) start_code |= qubit_bit(n, k);
  }
  CVector jch0;
  for (const auto& [s, v] : embedded) {
    if (s == start_code) jch0 = v;
  }

  MappingReport rep;
  rep.coupling = params.A * chi[0] * chi[0];
  const SparseMatrix h = build_hamiltonian(params, lattice, *basis);

  CMatrix hxy;
  if (rep.coupling > 0.0) {
    hxy = build_xy_hamiltonian(QubitLattice::uniform(lattice, rep.coupling)).to_dense();
  } else {
    hxy = CMatrix::Zero(static_cast<Eigen::Index>(qdim), static_cast<Eigen::Index>(qdim));
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> xy_es(hxy);
  CVector xy0 = CVector::Zero(static_cast<Eigen::Index>(qdim));
  xy0[static_cast<Eigen::Index>(start_code)] = 1.0;
  const CVector xy_coeff = xy_es.eigenvectors().adjoint() * xy0;

  StateVector psi(jch0, basis);
  double prev = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double t = t_max * static_cast<double>(k) / static_cast<double>(points - 1);
    if (t > prev) psi = evolve_unitary(h, psi, t - prev);
    prev = t;
    const CVector phases = (xy_es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
    const CVector xy = xy_es.eigenvectors() * phases.cwiseProduct(xy_coeff);

    std::vector<double> pj(n);
    std::vector<double> px(n, 0.0);
    for (std::size_t site = 0; site < n; ++site) pj[site] = lower_polariton_population(psi, site, params);
    for (std::size_t s = 0; s < qdim; ++s) {
      const double w = std::norm(xy[static_cast<Eigen::Index>(s)]);
      for (std::size_t site = 0; site < n; ++site) {
        if (s & qubit_bit(n, site)) px[site] += w;
      }
    }
    double inside = 0.0;
    for (const auto& [s, v] : embedded) inside += std::norm(v.dot(psi.amplitudes));
    rep.max_leakage = std::max(rep.max_leakage, 1.0 - inside);
    for (std::size_t site = 0; site < n; ++site) {
      rep.max_deviation = std::max(rep.max_deviation, std::abs(pj[site] - px[site]));
    }
    rep.times.push_back(t);
    rep.jch_populations.push_back(std::move(pj));
    rep.xy_populations.push_back(std::move(px));
  }
  return rep;
}

}  // namespace jchsim
