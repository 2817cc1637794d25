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

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "jchsim/errors.hpp"
#include "jchsim/model.hpp"

using namespace jchsim;

namespace {

Eigen::VectorXd spectrum(const SparseMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.to_dense());
  return es.eigenvalues();
}

ModelParams resonant(double g = 1.0, double A = 0.01) {
  ModelParams p;
  p.g = g;
  p.A = A;
  return p;
}

}  // namespace

TEST_CASE("dressed_state at resonance reproduces the closed form") {
  const auto s = dressed_state(1, resonant());
  CHECK(s.E_minus == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(s.E_plus == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.theta_n == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
  CHECK(s.eigvec_minus[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(s.eigvec_minus[1] == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(s.eigvec_plus[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(s.eigvec_plus[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(s.eigvec_minus.dot(s.eigvec_plus)) <= 1e-12);
  for (int n = 1; n <= 3; ++n) {
    const auto d = dressed_state(n, resonant(0.7));
    CHECK(std::abs(d.E_minus - d.closed_form_minus) <= 1e-10 * std::abs(d.closed_form_minus));
    CHECK(std::abs(d.E_plus - d.closed_form_plus) <= 1e-10 * std::abs(d.closed_form_plus));
  }
}

TEST_CASE("dressed_state off resonance follows the 2x2 eigensolve") {
  ModelParams p = resonant().with_detuning(1.0);
  const auto s = dressed_state(1, p);
  // roots of x^2 - x - 1
  CHECK(s.E_minus == doctest::Approx((1.0 - std::sqrt(5.0)) / 2).epsilon(1e-13));
  CHECK(s.E_plus == doctest::Approx((1.0 + std::sqrt(5.0)) / 2).epsilon(1e-13));
  // the closed form differs away from resonance
  CHECK(std::abs(s.closed_form_plus - std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(s.E_plus - s.closed_form_plus) > 0.1);
  CHECK_THROWS_AS(dressed_state(0, p), InvalidArgument);
}

TEST_CASE("lab frame dressed energies include n omega_d") {
  ModelParams p = resonant();
  p.rotating_frame = false;
  p.omega_d = 50.0;
  p.omega_0 = 50.0;
  const auto s = dressed_state(2, p);
  CHECK(s.E_minus == doctest::Approx(100.0 - std::sqrt(2.0)));
}

TEST_CASE("dressed energies match single-site diagonalization") {
  const int nmax = 4;
  BasisIndexer b(1, nmax);
  const auto lat = LatticeSpec::chain(1);
  for (double delta : {0.0, 0.1, 1.0}) {
    const ModelParams p = resonant().with_detuning(delta);
    for (int n = 1; n <= nmax; ++n) {
      BasisIndexer sec(1, nmax, n);
      const auto ev = spectrum(build_hamiltonian(p, lat, sec));
      REQUIRE(ev.size() == 2);
      const auto d = dressed_state(n, p);
      CHECK(std::abs(ev[0] - d.E_minus) <= 1e-10 * std::max(1.0, std::abs(d.E_minus)));
      CHECK(std::abs(ev[1] - d.E_plus) <= 1e-10 * std::max(1.0, std::abs(d.E_plus)));
    }
  }
}

TEST_CASE("single site n_max=1 spectrum against hand-built matrix") {
  BasisIndexer b(1, 1);
  const double g = 1.3;
  const auto h = build_hamiltonian(resonant(g), LatticeSpec::chain(1), b);
  // basis order |g0>, |g1>, |e0>, |e1>
  Eigen::Matrix4cd ref = Eigen::Matrix4cd::Zero();
  ref(1, 2) = ref(2, 1) = g;
  CHECK((h.to_dense() - ref).norm() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(ref);
  const auto ev = spectrum(h);
  for (int i = 0; i < 4; ++i) CHECK(ev[i] == doctest::Approx(es.eigenvalues()[i]).epsilon(1e-14));
  CHECK(ev[0] == doctest::Approx(-g));
  CHECK(std::abs(ev[1]) < 1e-14);
  CHECK(std::abs(ev[2]) < 1e-14);
  CHECK(ev[3] == doctest::Approx(g));
}

TEST_CASE("hamiltonian hermiticity and excitation conservation") {
  for (double A : {0.0, 0.05, 0.3}) {
    ModelParams p = resonant(1.0, A).with_detuning(0.4);
    for (const auto& lat : {LatticeSpec::chain(3), LatticeSpec::chain(3, true), LatticeSpec::grid(2, 2)}) {
      BasisIndexer b(lat, 2);
      const auto h = build_hamiltonian(p, lat, b);
      CHECK(h.hermitian());
      CHECK(h.hermiticity_violations() == 0);
      CHECK(commutator_nonzeros(h, total_number_operator(b)) == 0);
    }
  }
}

TEST_CASE("uncoupled sites have additive spectra") {
  const ModelParams p = resonant(1.0, 0.0).with_detuning(0.3);
  BasisIndexer one(1, 2);
  BasisIndexer two(2, 2);
  const auto e1 = spectrum(build_hamiltonian(p, LatticeSpec::chain(1), one));
  const auto e2 = spectrum(build_hamiltonian(p, LatticeSpec::chain(2), two));
  std::vector<double> sums;
  for (auto a : e1) {
    for (auto b : e1) sums.push_back(a + b);
  }
  std::sort(sums.begin(), sums.end());
  REQUIRE(sums.size() == static_cast<std::size_t>(e2.size()));
  for (std::size_t i = 0; i < sums.size(); ++i) CHECK(std::abs(sums[i] - e2[static_cast<Eigen::Index>(i)]) < 1e-12);
}

TEST_CASE("rotating and lab frames differ by s omega_d within a sector") {
  ModelParams rot = resonant(1.0, 0.05).with_detuning(0.2);
  ModelParams lab = rot;
  lab.rotating_frame = false;
  lab.omega_d = 1e4;
  lab.omega_0 = 1e4 + 0.2;
  const auto lat = LatticeSpec::chain(3);
  for (int s = 1; s <= 3; ++s) {
    BasisIndexer b(lat, 2, s);
    const auto er = spectrum(build_hamiltonian(rot, lat, b));
    const auto el = spectrum(build_hamiltonian(lab, lat, b));
    for (Eigen::Index i = 0; i < er.size(); ++i) {
      const double shifted = el[i] - s * lab.omega_d;
      CHECK(std::abs(shifted - er[i]) <= 1e-9 * std::max(1.0, std::abs(el[i])));
    }
  }
}

TEST_CASE("number operator eigenvalues") {
  auto b = std::make_shared<const BasisIndexer>(2, 2);
  const auto n0 = number_operator(0, *b);
  const std::vector<LocalState> vac{{0, 0}, {0, 0}};
  CHECK(expectation(n0, StateVector::product(b, vac)).real() == 0.0);
  const std::vector<LocalState> e2{{1, 2}, {0, 0}};
  const auto v = StateVector::product(b, e2);
  CHECK((apply(n0, v).amplitudes - 3.0 * v.amplitudes).norm() == 0.0);

  // dressed |1-> at site 0 is an N_0 eigenstate with eigenvalue 1
  const auto d = dressed_state(1, resonant());
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(b->dim()));
  const std::vector<LocalState> g1{{0, 1}, {0, 0}};
  const std::vector<LocalState> e0{{1, 0}, {0, 0}};
  amps[static_cast<Eigen::Index>(*b->encode(g1))] = d.eigvec_minus[0];
  amps[static_cast<Eigen::Index>(*b->encode(e0))] = d.eigvec_minus[1];
  const StateVector minus(amps, b);
  CHECK((apply(n0, minus).amplitudes - minus.amplitudes).norm() < 1e-15);
  CHECK(expectation(local_one_excitation_projector(0, d.eigvec_minus, *b), minus).real() ==
        doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(number_operator(2, *b), InvalidArgument);
}

TEST_CASE("jump operators") {
  const auto lat = LatticeSpec::chain(3);
  BasisIndexer b(lat, 1);
  ModelParams p = resonant();
  CHECK(jump_operators(p, lat, b).empty());
  p.kappa = 0.04;
  p.gamma = 0.01;
  const auto ops = jump_operators(p, lat, b);
  CHECK(ops.size() == 6);
  p.gamma = 0.0;
  CHECK(jump_operators(p, lat, b).size() == 3);

  auto one = std::make_shared<const BasisIndexer>(1, 1);
  const auto lat1 = LatticeSpec::chain(1);
  const auto jumps = jump_operators(p, lat1, *one);
  REQUIRE(jumps.size() == 1);
  const std::vector<LocalState> g1{{0, 1}};
  const std::vector<LocalState> g0{{0, 0}};
  const auto out = apply(jumps[0].op, StateVector::product(one, g1));
  CHECK(out.amplitudes[static_cast<Eigen::Index>(*one->encode(g0))].real() == doctest::Approx(std::sqrt(0.04)));

  BasisIndexer sec(lat, 1, 2);
  CHECK_THROWS_AS(jump_operators(p, lat, sec), InvalidArgument);
  BasisIndexer wrong(2, 1);
  CHECK_THROWS_AS(build_hamiltonian(p, lat, wrong), InvalidArgument);
}

TEST_CASE("presets carry the platform ratios") {
  for (const auto& name : preset_names()) {
    const auto p = preset_params(name);
    CHECK(p.g / std::max(p.kappa, p.gamma) == doctest::Approx(1e3));
    CHECK(p.omega_d == doctest::Approx(1e4 * p.g));
  }
  CHECK(preset_params("toroidal").g / preset_params("toroidal").A == doctest::Approx(100.0));
  CHECK(preset_params("stripline").g / preset_params("stripline").A == doctest::Approx(10.0));
  CHECK_THROWS_AS(preset_params("photonic-crystal"), InvalidArgument);
}
