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

#include "jchsim/model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#include "jchsim/errors.hpp"

namespace jchsim {

namespace {

using Triplet = SparseMatrix::Triplet;

void check_same_sites(const LatticeSpec& lattice, const BasisIndexer& basis) {
  if (lattice.num_sites() != basis.num_sites()) {
    throw InvalidArgument("basis has " + std::to_string(basis.num_sites()) +
                          " sites but lattice has " + std::to_string(lattice.num_sites()));
  }
}

void check_site(std::size_t site, const BasisIndexer& basis) {
  if (site >= basis.num_sites()) {
    throw InvalidArgument("site " + std::to_string(site) + " out of range (" +
                          std::to_string(basis.num_sites()) + " sites)");
  }
}

void check_unrestricted(const BasisIndexer& basis, const char* what) {
  if (basis.sector()) {
    throw InvalidArgument(std::string(what) +
                          " changes the excitation number and needs an unrestricted basis");
  }
}

template <typename F>
SparseMatrix diagonal_from(const BasisIndexer& basis, F&& value) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t i = 0; i < basis.dim(); ++i) d[static_cast<Eigen::Index>(i)] = value(i);
  return SparseMatrix::diagonal(d);
}

}  // namespace

ModelParams ModelParams::with_detuning(double delta) const {
  ModelParams p = *this;
  p.omega_0 = p.omega_d + delta;
  return p;
}

void ModelParams::validate() const {
  if (!(g >= 0.0)) throw InvalidArgument("model: g must be >= 0");
  if (!(A >= 0.0)) throw InvalidArgument("model: A must be >= 0");
  if (!(kappa >= 0.0)) throw InvalidArgument("model: kappa must be >= 0");
  if (!(gamma >= 0.0)) throw InvalidArgument("model: gamma must be >= 0");
  if (!std::isfinite(omega_d) || !std::isfinite(omega_0)) {
    throw InvalidArgument("model: frequencies must be finite");
  }
}

ModelParams preset_params(std::string_view name) {
  ModelParams p;
  p.g = 1.0;
  p.omega_d = 1e4;
  p.omega_0 = 1e4;
  p.kappa = 1e-3;
  p.gamma = 1e-3;
  p.rotating_frame = true;
  if (name == "toroidal") {
    p.A = 1e-2;
  } else if (name == "stripline") {
    p.A = 1e-1;
  } else {
    throw InvalidArgument("unknown parameter preset '" + std::string(name) + "'");
  }
  return p;
}

std::vector<std::string> preset_names() { return {"toroidal", "stripline"}; }

PolaritonSpectrum dressed_state(int n, const ModelParams& params) {
  if (n < 1) throw InvalidArgument("dressed_state: n must be >= 1");
  const double wd = params.rotating_frame ? 0.0 : params.omega_d;
  const double delta = params.detuning();
  const double c = params.g * std::sqrt(static_cast<double>(n));
  Eigen::Matrix2d block;
  block << n * wd, c, c, n * wd + delta;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(block);

  PolaritonSpectrum s;
  s.n = n;
  s.E_minus = es.eigenvalues()[0];
  s.E_plus = es.eigenvalues()[1];
  s.eigvec_minus = es.eigenvectors().col(0);
  s.eigvec_plus = es.eigenvectors().col(1);
  // sign convention: non-negative |g,n> component
  if (s.eigvec_minus[0] < 0.0 || (s.eigvec_minus[0] == 0.0 && s.eigvec_minus[1] > 0.0)) {
    s.eigvec_minus = -s.eigvec_minus;
  }
  if (s.eigvec_plus[0] < 0.0 || (s.eigvec_plus[0] == 0.0 && s.eigvec_plus[1] < 0.0)) {
    s.eigvec_plus = -s.eigvec_plus;
  }
  s.theta_n = std::atan2(-s.eigvec_minus[1], s.eigvec_minus[0]);

  const double root = params.g * std::sqrt(n + (params.g != 0.0 ? delta * delta / (params.g * params.g) : 0.0));
  s.closed_form_minus = n * wd - root;
  s.closed_form_plus = n * wd + root;
  s.closed_form_theta = 0.5 * std::atan2(c, delta);
  return s;
}

SparseMatrix build_hamiltonian(const ModelParams& params, const LatticeSpec& lattice,
                               const BasisIndexer& basis) {
  params.validate();
  check_same_sites(lattice, basis);
  const int nmax = basis.n_max();
  const std::size_t N = basis.num_sites();
  const double wd = params.rotating_frame ? 0.0 : params.omega_d;
  const double w_atom = params.rotating_frame ? params.detuning() : params.omega_0;

  std::vector<Triplet> t;
  t.reserve(basis.dim() * (1 + N + 2 * lattice.edges().size()));
  auto push_pair = [&](std::size_t from, std::uint64_t to_code, double v) {
    auto j = basis.index_of_code(to_code);
    if (!j) return;  // cannot happen for sector-preserving terms
    t.push_back({*j, from, v});
    t.push_back({from, *j, v});
  };

  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const std::uint64_t code = basis.code(i);
    double diag = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      const LocalState s = basis.local(i, k);
      diag += wd * s.photons + w_atom * s.atom;
      // g a^dagger |g><e| : |e,p> -> sqrt(p+1) |g,p+1>; partner emitted with it
      if (params.g != 0.0 && s.atom == 1 && s.photons < nmax) {
        push_pair(i, basis.with_local(code, k, {0, s.photons + 1}), params.g * std::sqrt(s.photons + 1.0));
      }
    }
    if (diag != 0.0) t.push_back({i, i, diag});

    if (params.A == 0.0) continue;
    for (const auto& e : lattice.edges()) {
      // A a_a^dagger a_b ; the a_b^dagger a_a partner is the conjugate entry
      const LocalState sa = basis.local(i, e.a);
      const LocalState sb = basis.local(i, e.b);
      if (sb.photons > 0 && sa.photons < nmax) {
        std::uint64_t c = basis.with_local(code, e.a, {sa.atom, sa.photons + 1});
        c = basis.with_local(c, e.b, {sb.atom, sb.photons - 1});
        push_pair(i, c, params.A * std::sqrt(static_cast<double>(sb.photons) * (sa.photons + 1.0)));
      }
    }
  }
  return SparseMatrix(basis.dim(), t, true);
}

SparseMatrix number_operator(std::size_t site, const BasisIndexer& basis) {
  check_site(site, basis);
  return diagonal_from(basis, [&](std::size_t i) { return basis.local(i, site).excitations(); });
}

SparseMatrix total_number_operator(const BasisIndexer& basis) {
  return diagonal_from(basis, [&](std::size_t i) { return basis.total_excitations(i); });
}

SparseMatrix photon_number_operator(std::size_t site, const BasisIndexer& basis) {
  check_site(site, basis);
  return diagonal_from(basis, [&](std::size_t i) { return basis.local(i, site).photons; });
}

SparseMatrix annihilation_operator(std::size_t site, const BasisIndexer& basis) {
  check_site(site, basis);
  check_unrestricted(basis, "annihilation operator");
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const LocalState s = basis.local(i, site);
    if (s.photons == 0) continue;
    auto j = basis.index_of_code(basis.with_local(basis.code(i), site, {s.atom, s.photons - 1}));
    t.push_back({*j, i, std::sqrt(static_cast<double>(s.photons))});
  }
  return SparseMatrix(basis.dim(), t, false);
}

SparseMatrix atomic_lowering_operator(std::size_t site, const BasisIndexer& basis) {
  check_site(site, basis);
  check_unrestricted(basis, "atomic lowering operator");
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const LocalState s = basis.local(i, site);
    if (s.atom == 0) continue;
    auto j = basis.index_of_code(basis.with_local(basis.code(i), site, {0, s.photons}));
    t.push_back({*j, i, 1.0});
  }
  return SparseMatrix(basis.dim(), t, false);
}

SparseMatrix local_one_excitation_projector(std::size_t site, const Eigen::Vector2d& chi,
                                            const BasisIndexer& basis) {
  check_site(site, basis);
  // entries <i|P|j> = c(i) c(j) over pairs sharing the rest configuration
  std::vector<Triplet> t;
  const LocalState g1{0, 1};
  const LocalState e0{1, 0};
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    if (basis.local(i, site) != g1) continue;
    const auto j = basis.index_of_code(basis.with_local(basis.code(i), site, e0));
    t.push_back({i, i, chi[0] * chi[0]});
    if (!j) continue;
    t.push_back({*j, *j, chi[1] * chi[1]});
    t.push_back({i, *j, chi[0] * chi[1]});
    t.push_back({*j, i, chi[0] * chi[1]});
  }
  return SparseMatrix(basis.dim(), t, true);
}

std::vector<JumpOperator> jump_operators(const ModelParams& params, const LatticeSpec& lattice,
                                         const BasisIndexer& basis) {
  params.validate();
  check_same_sites(lattice, basis);
  std::vector<JumpOperator> out;
  if (params.kappa == 0.0 && params.gamma == 0.0) return out;
  check_unrestricted(basis, "decay");
  for (std::size_t k = 0; k < lattice.num_sites(); ++k) {
    if (params.kappa > 0.0) {
      out.push_back({"cavity", k, annihilation_operator(k, basis).scaled(std::sqrt(params.kappa))});
    }
    if (params.gamma > 0.0) {
      out.push_back({"atom", k, atomic_lowering_operator(k, basis).scaled(std::sqrt(params.gamma))});
    }
  }
  return out;
}

}  // namespace jchsim
