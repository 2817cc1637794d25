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

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "jchsim/clifford.hpp"
#include "jchsim/cluster.hpp"
#include "jchsim/density.hpp"
#include "jchsim/errors.hpp"
#include "jchsim/groundstate.hpp"
#include "jchsim/rng.hpp"
#include "jchsim/spin_map.hpp"

using namespace jchsim;

namespace {

using Index = Eigen::Index;

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

CMatrix pauli(char c) {
  CMatrix m(2, 2);
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1;
  }
  return m;
}

// Dense operator from a string like "XIZ"; the first letter is qubit 0.
CMatrix pauli_word(const std::string& w) {
  CMatrix m = CMatrix::Ones(1, 1);
  for (char c : w) m = kron(m, pauli(c));
  return m;
}

CMatrix one_qubit_on(std::size_t n, std::size_t k, const CMatrix& u) {
  CMatrix m = CMatrix::Ones(1, 1);
  for (std::size_t q = 0; q < n; ++q) m = kron(m, q == k ? u : CMatrix(CMatrix::Identity(2, 2)));
  return m;
}

CMatrix cz_on(std::size_t n, std::size_t a, std::size_t b) {
  const std::size_t dim = std::size_t{1} << n;
  CMatrix m = CMatrix::Identity(static_cast<Index>(dim), static_cast<Index>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    if ((i >> (n - 1 - a) & 1) && (i >> (n - 1 - b) & 1)) m(static_cast<Index>(i), static_cast<Index>(i)) = -1.0;
  return m;
}

CMatrix hadamard_dense() {
  CMatrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

// Symplectic stabilizer propagation (x, z, sign; x = z = 1 means Y).
struct Stab {
  std::vector<int> x, z;
  int r = 0;
};

void tableau_h(Stab& s, std::size_t a) {
  s.r ^= s.x[a] & s.z[a];
  std::swap(s.x[a], s.z[a]);
}

void tableau_cnot(Stab& s, std::size_t a, std::size_t b) {
  s.r ^= s.x[a] & s.z[b] & (s.x[b] ^ s.z[a] ^ 1);
  s.x[b] ^= s.x[a];
  s.z[a] ^= s.z[b];
}

void tableau_cz(Stab& s, std::size_t a, std::size_t b) {
  tableau_h(s, b);
  tableau_cnot(s, a, b);
  tableau_h(s, b);
}

CMatrix stab_matrix(const Stab& s) {
  std::string w;
  for (std::size_t k = 0; k < s.x.size(); ++k) w += s.x[k] ? (s.z[k] ? 'Y' : 'X') : (s.z[k] ? 'Z' : 'I');
  return (s.r ? -1.0 : 1.0) * pauli_word(w);
}

// Lindblad right-hand side with amplitude damping on every qubit.
CMatrix lindblad_rhs(const CMatrix& h, const std::vector<CMatrix>& lowers, double gamma, const CMatrix& rho) {
  const cplx i(0.0, 1.0);
  CMatrix d = -i * (h * rho - rho * h);
  for (const auto& l : lowers) {
    const CMatrix ld = l.adjoint();
    d += gamma * (l * rho * ld - 0.5 * (ld * l * rho + rho * ld * l));
  }
  return d;
}

CMatrix rk4_lindblad(const CMatrix& h, std::size_t n, double gamma, CMatrix rho, double t, std::size_t steps) {
  CMatrix lower(2, 2);
  lower << 0, 1, 0, 0;
  std::vector<CMatrix> lowers;
  for (std::size_t k = 0; k < n; ++k) lowers.push_back(one_qubit_on(n, k, lower));
  const double dt = t / static_cast<double>(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    const CMatrix k1 = lindblad_rhs(h, lowers, gamma, rho);
    const CMatrix k2 = lindblad_rhs(h, lowers, gamma, rho + 0.5 * dt * k1);
    const CMatrix k3 = lindblad_rhs(h, lowers, gamma, rho + 0.5 * dt * k2);
    const CMatrix k4 = lindblad_rhs(h, lowers, gamma, rho + dt * k3);
    rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

CMatrix random_state(std::size_t n, CounterRng& rng) {
  const auto dim = static_cast<Index>(std::size_t{1} << n);
  CMatrix m(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) m(i, j) = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
  CMatrix rho = m * m.adjoint();
  return rho / rho.trace();
}

}  // namespace

TEST_CASE("clifford frame conjugation matches dense matrices") {
  CounterRng rng(11, 0);
  const std::size_t n = 3;
  CliffordFrame f({0, 1, 2});
  for (int step = 0; step < 60; ++step) {
    const CMatrix before = f.byproduct_matrix();
    const std::size_t a = static_cast<std::size_t>(rng.uniform() * n);
    std::size_t b = static_cast<std::size_t>(rng.uniform() * n);
    if (b == a) b = (a + 1) % n;
    CMatrix expected;
    switch (static_cast<int>(rng.uniform() * 3)) {
      case 0: {
        const Pauli p{rng.uniform() < 0.5, rng.uniform() < 0.5};
        f.multiply(a, p);
        CMatrix op = (p.x ? pauli('X') : pauli('I')) * (p.z ? pauli('Z') : pauli('I'));
        expected = one_qubit_on(n, a, op) * before;
        break;
      }
      case 1:
        f.conjugate_cz(a, b);
        expected = cz_on(n, a, b) * before * cz_on(n, a, b);
        break;
      default:
        f.conjugate_h(a);
        expected = one_qubit_on(n, a, hadamard_dense()) * before * one_qubit_on(n, a, hadamard_dense());
    }
    REQUIRE((f.byproduct_matrix() - expected).norm() < 1e-12);
  }
}

TEST_CASE("clifford frame composition is associative and multiplies byproducts") {
  CounterRng rng(12, 0);
  auto random_frame = [&] {
    CliffordFrame f({0, 1, 2, 3});
    for (int k = 0; k < 6; ++k) {
      const auto l = static_cast<std::size_t>(rng.uniform() * 4);
      f.multiply(l, Pauli{rng.uniform() < 0.5, rng.uniform() < 0.5});
      f.conjugate_cz(l, (l + 1) % 4);
    }
    return f;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const CliffordFrame a = random_frame(), b = random_frame(), c = random_frame();
    CHECK(a.then(b).then(c) == a.then(b.then(c)));
    CHECK((a.then(b).byproduct_matrix() - b.byproduct_matrix() * a.byproduct_matrix()).norm() < 1e-12);
  }
}

TEST_CASE("clifford frame site bookkeeping") {
  CliffordFrame f({0, 2, 6, 8});
  f.swap_sites(0, 2);
  CHECK(f.site_of(0) == 2);
  CHECK(f.site_of(1) == 0);
  CHECK(f.logical_at(2) == 0u);
  CHECK_FALSE(f.logical_at(4).has_value());
  f.swap_sites(8, 4);  // a logical qubit may also move to an empty site
  CHECK(f.site_of(3) == 4);
  CHECK_THROWS_AS(CliffordFrame({1, 1}), ConfigError);
}

TEST_CASE("register helpers against dense oracles") {
  CounterRng rng(5, 0);
  const std::size_t n = 3;
  const CMatrix rho = random_state(n, rng);

  SUBCASE("single-qubit gates and kraus maps") {
    CMatrix r = rho;
    apply_single_qubit(r, n, 1, hadamard());
    const CMatrix h = one_qubit_on(n, 1, hadamard_dense());
    CHECK((r - h * rho * h.adjoint()).norm() < 1e-12);

    const double p = 0.3;
    CMatrix damped = rho;
    amplitude_damp(damped, n, 2, p);
    CMatrix k0(2, 2), k1(2, 2);
    k0 << 1, 0, 0, std::sqrt(1 - p);
    k1 << 0, std::sqrt(p), 0, 0;
    const CMatrix K0 = one_qubit_on(n, 2, k0), K1 = one_qubit_on(n, 2, k1);
    CHECK((damped - (K0 * rho * K0.adjoint() + K1 * rho * K1.adjoint())).norm() < 1e-12);
    CMatrix via_kraus = rho;
    apply_kraus(via_kraus, n, 2, {k0, k1});
    CHECK((via_kraus - damped).norm() < 1e-12);
  }

  SUBCASE("pauli strings and projections") {
    CMatrix r = rho;
    // X on qubit 0, Z on qubit 2
    apply_pauli(r, 0b100, 0b001);
    const CMatrix p = pauli_word("XIZ");
    CHECK((r - p * rho * p).norm() < 1e-12);
    const CMatrix proj = project(rho, n, 1, 1);
    const CMatrix P1 = one_qubit_on(n, 1, (CMatrix(2, 2) << 0, 0, 0, 1).finished());
    CHECK((proj - P1 * rho * P1).norm() < 1e-12);
  }

  SUBCASE("partial trace and embedding") {
    CMatrix a(2, 2), b(2, 2);
    a << 0.7, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.3;
    b << 0.4, 0.0, 0.0, 0.6;
    const CMatrix ab = kron(a, b);
    const CMatrix rest = CVector::Constant(2, 1.0 / std::sqrt(2.0)) * CVector::Constant(2, 1.0 / std::sqrt(2.0)).adjoint();
    const CMatrix full = kron(kron(a, rest), b);
    CHECK((reduced_density_matrix(full, 3, {0, 2}) - ab).norm() < 1e-12);
    CHECK((reduced_density_matrix(full, 3, {2, 0}) - kron(b, a)).norm() < 1e-12);
    CHECK((embed_register(ab, 3, {0, 2}, CVector::Constant(2, 1.0 / std::sqrt(2.0))) - full).norm() < 1e-12);
    const CVector psi = product_state({Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1), Eigen::Vector2cd(1, 0)});
    CHECK(std::abs(psi[2] - 1.0) < 1e-15);
    CHECK((reduced_density_matrix(psi, 3, {1}) - (CMatrix(2, 2) << 0, 0, 0, 1).finished()).norm() < 1e-15);
  }

  SUBCASE("graph state stabilizers") {
    const CVector g = graph_state(3, {{0, 1}, {1, 2}});
    CHECK(std::abs(g.dot(pauli_word("XZI") * g) - 1.0) < 1e-12);
    CHECK(std::abs(g.dot(pauli_word("ZXZ") * g) - 1.0) < 1e-12);
    CHECK(std::abs(g.dot(pauli_word("IZX") * g) - 1.0) < 1e-12);
  }

  SUBCASE("block propagator against the dense exponential") {
    QubitLattice q = QubitLattice::uniform(LatticeSpec::grid(2, 2), 1.0);
    q.offsets = {0.0, 3.0, 0.5, 0.0};
    const CMatrix h = build_xy_hamiltonian(q).to_dense();
    CHECK(BlockPropagator::sector_leak(h, 4) == 0.0);
    const CMatrix u = (cplx(0.0, -0.9) * h).exp();
    const CMatrix r4 = random_state(4, rng);
    CMatrix r = r4;
    BlockPropagator(h, 4, 0.9).apply(r);
    CHECK((r - u * r4 * u.adjoint()).norm() < 1e-11);
    CVector v = CVector::Random(16);
    CVector w = v;
    BlockPropagator(h, 4, 0.9).apply(w);
    CHECK((w - u * v).norm() < 1e-11);
  }
}

TEST_CASE("split-step lindblad evolution matches an RK4 integration") {
  CounterRng rng(21, 0);
  QubitLattice q = QubitLattice::uniform(LatticeSpec::chain(3), 1.0);
  q.offsets = {0.0, 0.0, 7.0};
  const CMatrix rho0 = random_state(3, rng);
  const double t = mirror_time(1.0);
  const double gamma = 0.08;
  const CMatrix reference = rk4_lindblad(build_xy_hamiltonian(q).to_dense(), 3, gamma, rho0, t, 20000);
  CMatrix rho = rho0;
  lindblad_evolve(rho, q, t, gamma, 0.02);
  CHECK((rho - reference).norm() < 1e-5);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
  CHECK((rho - rho.adjoint()).norm() < 1e-13);

  // gamma = 0 is unitary and exact
  CMatrix closed = rho0;
  lindblad_evolve(closed, q, t, 0.0);
  const CMatrix u = (cplx(0.0, -t) * build_xy_hamiltonian(q).to_dense()).exp();
  CHECK((closed - u * rho0 * u.adjoint()).norm() < 1e-11);
}

TEST_CASE("roles and step masks") {
  const GridProtocol g = assign_roles(3, 3);
  std::size_t nl = 0, nm = 0, ns = 0;
  for (auto r : g.roles) {
    nl += r == SiteRole::Logical;
    nm += r == SiteRole::Mediator;
    ns += r == SiteRole::Switchable;
  }
  CHECK(nl == 4);
  CHECK(nm == 4);
  CHECK(ns == 1);
  CHECK(g.logical_sites() == std::vector<std::size_t>{0, 2, 6, 8});

  const auto chains = step_chains(g);
  REQUIRE(chains.size() == 4);
  CHECK(chains[0] == std::vector<Chain>{{0, 1, 2}, {6, 7, 8}});
  CHECK(chains[1].empty());
  CHECK(chains[2] == std::vector<Chain>{{0, 3, 6}, {2, 5, 8}});
  CHECK(chains[3].empty());

  CHECK_THROWS_AS(assign_roles(4, 3), ConfigError);
  CHECK_THROWS_AS(assign_roles(3, 1), ConfigError);

  SUBCASE("larger grids use every mediator exactly once in disjoint chains") {
    for (auto [r, c] : {std::pair<std::size_t, std::size_t>{5, 5}, {7, 5}, {3, 9}}) {
      const GridProtocol p = assign_roles(r, c);
      const auto steps = step_chains(p);
      std::multiset<std::size_t> used;
      for (const auto& step : steps) {
        std::set<std::size_t> sites;
        for (const auto& ch : step) {
          used.insert(ch.mediator);
          CHECK(sites.insert(ch.a).second);
          CHECK(sites.insert(ch.b).second);
          CHECK(sites.insert(ch.mediator).second);
        }
      }
      std::size_t mediators = 0;
      for (std::size_t s = 0; s < p.num_sites(); ++s) {
        if (p.roles[s] != SiteRole::Mediator) continue;
        ++mediators;
        CHECK(used.count(s) == 1);
      }
      CHECK(used.size() == mediators);
    }
  }

  SUBCASE("a mask leaving adjacent mediators on resonance is rejected") {
    GridProtocol bad = assign_roles(3, 3);
    bad.step_detuned[0] = {ElectrodeGroup::B, ElectrodeGroup::C};  // A and D both on
    try {
      step_chains(bad);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("step 1") != std::string::npos);
    }
  }
}

TEST_CASE("ideal protocol produces the box cluster in every branch") {
  GridProtocol p = assign_roles(3, 3);
  p.postselect = false;
  const ProtocolResult r = run_protocol(p);
  CHECK(r.branch_count == 16);
  CHECK(r.fidelity == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.trace_error < 1e-10);
  CHECK(r.postselect_probability == doctest::Approx(1.0 / 16).epsilon(1e-9));
  std::set<std::pair<std::size_t, std::size_t>> edges(r.logical_edges.begin(), r.logical_edges.end());
  CHECK(edges == std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {2, 3}, {0, 2}, {1, 3}});
  // a weighted mean of fidelities <= 1 equals 1 only if every branch is ideal
  CHECK(r.fidelity_uncorrected < r.fidelity);

  p.mediator_init = MediatorInit::Zero;
  p.postselect = true;
  const ProtocolResult z = run_protocol(p);
  CHECK(z.postselect_probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(z.fidelity == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("frame correction never lowers the fidelity") {
  GridProtocol p = assign_roles(3, 3);
  p.postselect = false;
  p.delta_off = 12.0;
  const ProtocolResult r = run_protocol(p);
  CHECK(r.fidelity >= r.fidelity_uncorrected);
  CHECK(r.fidelity < 1.0);
  CHECK(r.postselect_probability > 0.0);
  CHECK(r.postselect_probability <= 1.0);
  CHECK(r.trace_error < 1e-8);
}

TEST_CASE("pure-state mode agrees with the density matrix") {
  GridProtocol p = assign_roles(3, 3);
  p.delta_off = 20.0;
  ProtocolOptions pure;
  pure.mode = SimulationMode::PureTrajectories;
  const ProtocolResult a = run_protocol(p);
  const ProtocolResult b = run_protocol(p, pure);
  CHECK(b.fidelity == doctest::Approx(a.fidelity).epsilon(1e-9));
  CHECK(b.postselect_probability == doctest::Approx(a.postselect_probability).epsilon(1e-9));

  SUBCASE("trajectories with decay") {
    p.delta_off = std::numeric_limits<double>::infinity();
    p.gamma = 0.05;
    p.mediator_init = MediatorInit::Zero;
    const ProtocolResult dm = run_protocol(p);
    pure.n_traj = 1000;
    pure.seed = 3;
    const ProtocolResult tr = run_protocol(p, pure);
    // Bernoulli-type bound on the standard error of a mean of values in [0, 1]
    const double sigma = 0.5 / std::sqrt(static_cast<double>(tr.branch_count));
    CHECK(std::abs(tr.fidelity - dm.fidelity) < 4 * sigma);
    CHECK(std::abs(tr.postselect_probability - dm.postselect_probability) < 4 * 0.5 / std::sqrt(1000.0));
  }
}

TEST_CASE("capacity limits") {
  const GridProtocol p = assign_roles(5, 5);
  CHECK_THROWS_AS(run_protocol(p), CapacityError);
  ProtocolOptions pure;
  pure.mode = SimulationMode::PureTrajectories;
  pure.max_pure_qubits = 20;
  CHECK_THROWS_AS(run_protocol(p, pure), CapacityError);
}

TEST_CASE("closed-system error falls with the detuning") {
  GridProtocol p = assign_roles(3, 3);
  ProtocolOptions o;
  o.threads = 2;
  const auto pts = delta_off_scan(p, log_grid(5.0, 500.0, 20), o);
  REQUIRE(pts.size() == 20);
  CHECK(error_strictly_decreasing(pts));
  const double slope = error_scaling_slope(pts);
  CHECK(slope >= -2.2);
  CHECK(slope <= -0.8);
  for (const auto& pt : pts) CHECK(pt.gamma == 0.0);
}

TEST_CASE("box cluster to linear cluster") {
  const CMatrix u = box_to_linear_unitary();
  const CMatrix expected = kron(kron(kron(hadamard_dense(), hadamard_dense()), pauli('Z')), pauli('Z'));
  CHECK((u - expected).norm() < 1e-14);
  CHECK((u * u - CMatrix::Identity(16, 16)).norm() < 1e-14);

  // |0000> -> |++00>
  CVector zero = CVector::Zero(16);
  zero[0] = 1.0;
  const CVector out = u * zero;
  const CVector want = product_state({Eigen::Vector2cd(1, 1) / std::sqrt(2.0), Eigen::Vector2cd(1, 1) / std::sqrt(2.0),
                                      Eigen::Vector2cd(1, 0), Eigen::Vector2cd(1, 0)});
  CHECK(std::abs(std::abs(want.dot(out)) - 1.0) < 1e-14);

  // the box state turns into a linear cluster up to stabilizer signs
  const CVector box = graph_state(4, {{0, 1}, {2, 3}, {0, 2}, {1, 3}});
  const CVector lin = u * box;
  for (const auto& s : linear_cluster_stabilizers(4, box_to_linear_path()))
    CHECK(std::abs(std::abs(expectation(lin, s)) - 1.0) < 1e-12);

  // and the protocol's corrected output does the same
  const ProtocolResult r = run_protocol(assign_roles(3, 3));
  const CMatrix mapped = u * r.logical_state * u.adjoint();
  for (const auto& s : linear_cluster_stabilizers(4, box_to_linear_path()))
    CHECK(std::abs(std::abs((pauli_string_matrix(s) * mapped).trace().real()) - 1.0) < 1e-9);
}

TEST_CASE("resource estimates") {
  const ResourceRequest shor{6, 156, 15, 1.0};
  const auto full = estimate_resources(shor, ResourceMode::Full);
  CHECK(full.cluster_width == 11);
  CHECK(full.array_rows == 21);
  CHECK(full.array_cols == 311);
  const auto reuse = estimate_resources(shor, ResourceMode::RowReuse);
  CHECK(reuse.array_rows == 21);
  CHECK(reuse.array_cols == 3);
  CHECK(reuse.steps == 156);
  const auto circ = estimate_resources(shor, ResourceMode::Circuit);
  CHECK(circ.array_rows == 5);
  CHECK(circ.array_cols == 3);
  CHECK(circ.steps == 15);
  CHECK(circ.time_over_A == doctest::Approx(15 * std::numbers::pi / std::numbers::sqrt2).epsilon(1e-15));

  const auto one = estimate_resources({1, 1, 1, 1.0}, ResourceMode::Full);
  CHECK(one.array_rows == 1);
  CHECK(one.array_cols == 1);
  CHECK_THROWS_AS(estimate_resources({0, 1, 1, 1.0}, ResourceMode::Full), ConfigError);
  CHECK(resource_mode_from_string(to_string(ResourceMode::RowReuse)) == ResourceMode::RowReuse);
  CHECK_THROWS_AS(resource_mode_from_string("bogus"), ConfigError);
}

TEST_CASE("row reuse cycle teleports through the stabilizer-predicted Clifford") {
  for (std::size_t L : {1u, 2u}) {
    CAPTURE(L);
    // input stabilizers: Z on qubit 0, X on the others
    std::vector<Stab> stabs;
    std::vector<Eigen::Vector2cd> qubits;
    for (std::size_t k = 0; k < L; ++k) {
      Stab s{std::vector<int>(L, 0), std::vector<int>(L, 0), 0};
      (k == 0 ? s.z : s.x)[k] = 1;
      stabs.push_back(s);
      qubits.push_back(k == 0 ? Eigen::Vector2cd(1, 0) : Eigen::Vector2cd(1, 1) / std::sqrt(2.0));
    }
    const CVector in = product_state(qubits);
    RowReuseConfig cfg;
    cfg.logical_rows = L;
    const auto states = row_reuse_cycles(cfg, in * in.adjoint(), 2);
    CHECK((states[0] - in * in.adjoint()).norm() == 0.0);
    for (std::size_t cycle = 1; cycle <= 2; ++cycle) {
      // one cycle: H on every row, then CZ between neighbouring rows
      for (auto& s : stabs) {
        for (std::size_t k = 0; k < L; ++k) tableau_h(s, k);
        for (std::size_t k = 0; k + 1 < L; ++k) tableau_cz(s, k, k + 1);
      }
      const CMatrix& rho = states[cycle];
      CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
      double fidelity = 1.0;
      for (const auto& s : stabs) {
        const double e = (stab_matrix(s) * rho).trace().real();
        CHECK(e >= 1.0 - 1e-9);
        fidelity *= 0.5 * (1.0 + e);
      }
      CHECK(fidelity >= 1.0 - 1e-9);
    }
    // the library's ideal cycle agrees with the tableau
    const CMatrix c = row_reuse_ideal_cycle(L);
    const CMatrix ideal = c * in * in.adjoint() * c.adjoint();
    CHECK((ideal - states[1]).norm() < 1e-9);
  }
}

TEST_CASE("row reuse with decay loses a similar fraction every cycle") {
  RowReuseConfig cfg;
  cfg.gamma = 0.05;
  const CVector in = product_state({Eigen::Vector2cd(1, 0)});
  const auto states = row_reuse_cycles(cfg, in * in.adjoint(), 3);
  const CMatrix c = row_reuse_ideal_cycle(1);
  CMatrix ideal = in * in.adjoint();
  std::vector<double> ratios;
  double prev = 1.0;
  for (std::size_t k = 1; k <= 3; ++k) {
    ideal = c * ideal * c.adjoint();
    const double f = (ideal * states[k]).trace().real();
    ratios.push_back(f / prev);
    prev = f;
    CHECK(std::abs(states[k].trace() - 1.0) < 1e-8);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  CHECK(*lo < 1.0);
  CHECK(*hi / *lo <= 1.1);
}

TEST_CASE("row reuse limits") {
  RowReuseConfig cfg;
  cfg.logical_rows = 3;
  CHECK_THROWS_AS(row_reuse_step(cfg, CMatrix::Identity(8, 8) / 8.0), CapacityError);
  cfg.logical_rows = 1;
  CHECK_THROWS_AS(row_reuse_step(cfg, CMatrix::Identity(4, 4) / 4.0), InvalidArgument);
  cfg.gamma = -1.0;
  CHECK_THROWS_AS(row_reuse_step(cfg, CMatrix::Identity(2, 2) / 2.0), ConfigError);
}

TEST_CASE("one mediated gate in the cavity model follows the qubit model") {
  ModelParams p;
  p.g = 1.0;
  p.A = 0.01;
  // the qubit-model mirror time with the polariton exchange A/2
  const double t = mirror_time(p.A / 2.0);
  const auto single = compare_jch_vs_xy(3, p, t, 41, {1, 0, 0});
  CHECK(single.max_deviation <= 0.05);
  CHECK(single.xy_populations.back()[2] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(single.jch_populations.back()[2] >= 0.95);
  const auto pair = compare_jch_vs_xy(3, p, t, 41, {1, 1, 0});
  CHECK(pair.max_deviation <= 0.05);
}
