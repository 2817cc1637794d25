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

#ifndef JCHSIM_MODEL_HPP
#define JCHSIM_MODEL_HPP

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

#include "jchsim/hilbert.hpp"

namespace jchsim {

/// Parameters of the coupled-cavity array with one two-level dopant per
/// cavity. Energies are in arbitrary units; presets use g = 1.
struct ModelParams {
  double omega_d = 0.0;  // photon frequency
  double omega_0 = 0.0;  // atomic transition frequency
  double g = 1.0;        // atom-photon coupling
  double A = 0.01;       // photon hopping
  double kappa = 0.0;    // cavity decay rate
  double gamma = 0.0;    // atomic decay rate
  bool rotating_frame = true;

  double detuning() const { return omega_0 - omega_d; }
  /// Keeps omega_d and moves omega_0 so that omega_0 - omega_d = delta.
  ModelParams with_detuning(double delta) const;

  /// Throws InvalidArgument for negative rates or couplings. g = 0 and A = 0
  /// are accepted (empty cavity, isolated sites).
  void validate() const;
};

/// Parameter sets in the ratios of the two candidate hardware platforms,
/// in units of g: toroidal microcavities (g/A = 100) and stripline
/// resonators (g/A = 10); both use g/max(kappa, gamma) = 1e3 and
/// omega_d = 1e4 g.
ModelParams preset_params(std::string_view name);
std::vector<std::string> preset_names();

/// One-site dressed states in the n-excitation manifold, ordered over
/// {|g,n>, |e,n-1>}.
struct PolaritonSpectrum {
  int n = 1;
  double E_minus = 0.0;
  double E_plus = 0.0;
  double theta_n = 0.0;  // eigvec_minus = (cos theta, -sin theta)
  Eigen::Vector2d eigvec_minus;
  Eigen::Vector2d eigvec_plus;
  // n*omega_d -/+ g*sqrt(n + Delta^2/g^2) and 0.5*atan2(g*sqrt(n), Delta):
  // the commonly quoted closed form, exact only at Delta = 0.
  double closed_form_minus = 0.0;
  double closed_form_plus = 0.0;
  double closed_form_theta = 0.0;
};

/// Exact diagonalization of [[n w_d, g sqrt(n)], [g sqrt(n), n w_d + Delta]]
/// (w_d -> 0 in the rotating frame).
PolaritonSpectrum dressed_state(int n, const ModelParams& params);

/// H_free + H_int + H_hop over `basis`. In the rotating frame the free part
/// is Delta * sum_k |e><e|_k. Creation at the cutoff n_max is dropped.
SparseMatrix build_hamiltonian(const ModelParams& params, const LatticeSpec& lattice,
                               const BasisIndexer& basis);

/// N_k = a_k^dagger a_k + |e><e|_k (diagonal).
SparseMatrix number_operator(std::size_t site, const BasisIndexer& basis);
/// sum_k N_k.
SparseMatrix total_number_operator(const BasisIndexer& basis);
/// a_k^dagger a_k.
SparseMatrix photon_number_operator(std::size_t site, const BasisIndexer& basis);

/// a_k and |g><e|_k; both leave the excitation sector, so the basis must be
/// unrestricted.
SparseMatrix annihilation_operator(std::size_t site, const BasisIndexer& basis);
SparseMatrix atomic_lowering_operator(std::size_t site, const BasisIndexer& basis);

/// |chi><chi|_site (x) 1 for a local one-excitation state
/// chi = c_g |g,1> + c_e |e,0>; with the dressed |1-> this is the
/// single-polariton population measured in the experiment proposal.
SparseMatrix local_one_excitation_projector(std::size_t site, const Eigen::Vector2d& chi,
                                            const BasisIndexer& basis);

/// sqrt(kappa) a_k and sqrt(gamma) |g><e|_k for every site, site-major;
/// channels with zero rate are omitted.
struct JumpOperator {
  std::string label;
  std::size_t site = 0;
  SparseMatrix op;
};
std::vector<JumpOperator> jump_operators(const ModelParams& params, const LatticeSpec& lattice,
                                         const BasisIndexer& basis);

}  // namespace jchsim

#endif  // JCHSIM_MODEL_HPP
