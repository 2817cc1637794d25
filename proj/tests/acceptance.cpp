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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0
// when every criterion was evaluated; --strict also fails on any FAIL.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "jchsim/cluster.hpp"
#include "jchsim/dynamics.hpp"
#include "jchsim/experiments.hpp"
#include "jchsim/groundstate.hpp"
#include "jchsim/model.hpp"
#include "jchsim/spin_map.hpp"

using namespace jchsim;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. dressed-state spectrum of one site

Verdict dressed_states() {
  const double g = 1.0, wd = 10.0;
  double worst = 0.0;
  const auto lat = LatticeSpec::chain(1);
  for (double delta : {0.0, 0.1, 1.0}) {
    ModelParams p;
    p.g = g;
    p.A = 0.0;
    p.rotating_frame = false;
    p.omega_d = wd;
    p.omega_0 = wd + delta;
    for (int n = 1; n <= 3; ++n) {
      const BasisIndexer sec(1, n, n);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(build_hamiltonian(p, lat, sec).to_dense());
      const Eigen::VectorXd ev = es.eigenvalues();
      double lo, hi;
      if (delta == 0.0) {
        lo = n * wd - g * std::sqrt(double(n));
        hi = n * wd + g * std::sqrt(double(n));
      } else {
        Eigen::Matrix2d m;
        m << n * wd, g * std::sqrt(double(n)), g * std::sqrt(double(n)), n * wd + delta;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> o(m);
        lo = o.eigenvalues()[0];
        hi = o.eigenvalues()[1];
      }
      if (ev.size() != 2) return {false, "sector dimension " + std::to_string(ev.size())};
      worst = std::max({worst, std::abs(ev[0] - lo) / std::abs(lo), std::abs(ev[1] - hi) / std::abs(hi)});
    }
  }
  return {worst <= 1e-10, "max relative error " + fmt("%.3g", worst) + " (tol 1e-10)"};
}

// 2. Mott plateau of the 3-site chain

double var_at(const ModelParams& p, const LatticeSpec& lat, double delta) {
  auto sec = std::make_shared<const BasisIndexer>(lat, 2, 3);
  const auto gs = ground_state(build_hamiltonian(p.with_detuning(delta), lat, *sec), sec);
  return excitation_variance(gs.state, 1);
}

Verdict mott_plateau() {
  const ModelParams p = preset_params("toroidal");  // g/A = 100
  const auto lat = LatticeSpec::chain(3);
  const double v0 = var_at(p, lat, 1e-3 * p.g);
  const double v1 = var_at(p, lat, p.g);
  const auto sweep = sweep_order_parameter(p, lat, 2, 1, log_grid(1e-3 * p.g, 1e2 * p.g, 40));
  int violations = 0;
  for (std::size_t k = 1; k < sweep.rows.size(); ++k)
    if (sweep.rows[k].var_mid < sweep.rows[k - 1].var_mid - 1e-6) ++violations;
  const bool plateau = v0 <= 1e-3;
  const bool ratio = v1 >= 10.0 * v0;
  const bool monotone = violations <= 1;
  std::ostringstream d;
  d << "var(1e-3 g)=" << fmt("%.4g", v0) << (plateau ? " ok" : " BAD") << "; var(g)/var(1e-3 g)="
    << fmt("%.4g", v1 / v0) << " (need >= 10)" << (ratio ? " ok" : " BAD") << "; monotone violations=" << violations
    << (monotone ? " ok" : " BAD");
  return {plateau && ratio && monotone, d.str()};
}

// 3. transition sharpens with size

Verdict sharpening() {
  const ModelParams p = preset_params("toroidal");
  const auto grid = log_grid(1e-3 * p.g, 1e2 * p.g, 40);
  double slope[2];
  int k = 0;
  for (std::size_t n : {3u, 5u}) {
    const auto lat = LatticeSpec::chain(n);
    const auto coarse = sweep_order_parameter(p, lat, 2, 1, grid);
    slope[k++] = refine_transition_steepness(p, lat, 2, 1, coarse).slope;
  }
  return {slope[1] > slope[0],
          "max d var/d log10(delta): 3 sites " + fmt("%.4f", slope[0]) + ", 5 sites " + fmt("%.4f", slope[1])};
}

// 4. dissipative separation and single-cavity decay

Verdict dissipative_separation() {
  ModelParams p = preset_params("stripline");  // g/max(kappa, gamma) = 1e3
  const auto lat = LatticeSpec::chain(3);
  auto sec = std::make_shared<const BasisIndexer>(lat, 2, 3);
  auto full = std::make_shared<const BasisIndexer>(lat, 2);
  RampSchedule r;
  r.delta_start = 1e-3 * p.g;
  r.delta_end = p.g;
  r.total_time = 50.0;
  r.steps = 100;
  const auto gs = ground_state(build_hamiltonian(p.with_detuning(r.delta_start), lat, *sec), sec);
  EnsembleOptions o;
  o.n_traj = 500;
  o.seed = 7;
  o.keep_final_states = false;
  const auto e = mcwf_ensemble(p, lat, full, r, gs.state, o);
  const double mott = e.rows.front().mean_var_mid;
  const double sf = e.rows.back().mean_var_mid;
  const double gap = sf - mott;

  // empty cavity, kappa only
  ModelParams q;
  q.g = 0.0;
  q.A = 1.0;
  q.kappa = 0.5;
  const auto one = LatticeSpec::chain(1);
  auto b1 = std::make_shared<const BasisIndexer>(one, 1);
  RampSchedule hold;
  hold.delta_start = hold.delta_end = 0.0;
  hold.total_time = 4.0;
  hold.steps = 8;
  EnsembleOptions od;
  od.n_traj = 2000;
  od.seed = 11;
  const std::vector<LocalState> photon{{0, 1}};
  const auto d = mcwf_ensemble(q, one, b1, hold, StateVector::product(b1, photon), od);
  double worst_z = 0.0;
  for (std::size_t s = 0; s < d.rows.size(); ++s) {
    double m = 0.0;
    for (const auto& t : d.trajectories) m += t.samples[s].mean_n;
    m /= static_cast<double>(od.n_traj);
    const double expected = std::exp(-q.kappa * d.rows[s].time);
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(od.n_traj));
    if (se > 0.0) worst_z = std::max(worst_z, std::abs(m - expected) / se);
  }
  std::ostringstream msg;
  msg << "var Mott end " << fmt("%.4f", mott) << ", superfluid end " << fmt("%.4f", sf) << " +- "
      << fmt("%.4f", e.rows.back().stderr_var_mid) << ", separation " << fmt("%.4f", gap)
      << " (need >= 0.1); kappa decay max |z| " << fmt("%.2f", worst_z) << " (need <= 3)";
  return {gap >= 0.1 && worst_z <= 3.0, msg.str()};
}

// 5. mediated gate calibration

Verdict mediated_gate_scan() {
  const double A = 1.0;
  const auto rows = gate_time_scan(A, mirror_time(A), 400, Vector2c(1.0, 1.0) / std::sqrt(2.0));
  const auto good = calibrated_rows(rows, 1e-9);
  if (good.empty()) return {false, "no calibrated time in (0, pi/(sqrt2 A)]"};
  const auto& r = rows[good.front()];
  const auto g0 = mediated_gate(r.time, Vector2c(1.0, 0.0), A);
  const bool in_range = r.time > 0.0 && r.time <= mirror_time(A) * (1.0 + 1e-12);
  const bool p0 = std::abs(g0[0].probability - 1.0) <= 1e-9;
  std::ostringstream d;
  d << "t*=" << fmt("%.6f", r.time) << " (mirror " << fmt("%.6f", mirror_time(A)) << "), defects "
    << fmt("%.2g", r.unitary_defect_0) << "/" << fmt("%.2g", r.unitary_defect_1) << ", CP distance "
    << fmt("%.2g", r.cp_equiv_0) << "/" << fmt("%.2g", r.cp_equiv_1) << ", mediator |0> p0-1="
    << fmt("%.2g", g0[0].probability - 1.0);
  return {in_range && p0, d.str()};
}

// 6. cluster fidelity

Verdict cluster_fidelity() {
  const auto grid = log_grid(5.0, 500.0, 20);
  GridProtocol p = assign_roles(3, 3, 1.0);
  p.postselect = true;

  p.gamma = 0.0;
  const auto closed = delta_off_scan(p, grid);
  const bool monotone = error_strictly_decreasing(closed);
  const auto ideal = run_protocol(p);
  const bool unit = std::abs(ideal.fidelity - 1.0) <= 1e-9;

  p.gamma = 0.05;
  const auto open = delta_off_scan(p, grid);
  double best = 0.0, best_delta = 0.0;
  for (const auto& pt : open) {
    if (pt.fidelity > best) {
      best = pt.fidelity;
      best_delta = pt.delta_off;
    }
  }
  const bool floor = best >= 0.97;
  std::ostringstream d;
  d << "gamma=0.05A best post-selected F=" << fmt("%.4f", best) << " at delta_off=" << fmt("%.4g", best_delta)
    << "A (need >= 0.97)" << (floor ? " ok" : " BAD") << "; gamma=0 error monotone " << (monotone ? "ok" : "BAD")
    << " (slope " << fmt("%.3f", error_scaling_slope(closed)) << "); delta_off=inf F-1=" << fmt("%.2g", ideal.fidelity - 1.0)
    << (unit ? " ok" : " BAD");
  return {floor && monotone && unit, d.str()};
}

// 7. resource arithmetic

Verdict resources() {
  ResourceRequest req;
  req.q = 6;
  req.cluster_columns = 156;
  req.circuit_steps = 15;
  const auto full = estimate_resources(req, ResourceMode::Full);
  const auto reuse = estimate_resources(req, ResourceMode::RowReuse);
  const auto circ = estimate_resources(req, ResourceMode::Circuit);
  const double t15 = 15.0 * std::numbers::pi / std::numbers::sqrt2;
  const bool ok = full.array_rows == 21 && full.array_cols == 311 && reuse.array_rows == 21 &&
                  reuse.array_cols == 3 && reuse.steps == 156 && circ.array_rows == 5 && circ.array_cols == 3 &&
                  std::abs(circ.time_over_A - t15) <= 1e-12 * t15;
  std::ostringstream d;
  d << "full " << full.array_rows << "x" << full.array_cols << ", row reuse " << reuse.array_rows << "x"
    << reuse.array_cols << " with " << reuse.steps << " steps, circuit " << circ.array_rows << "x" << circ.array_cols
    << " in " << fmt("%.6f", circ.time_over_A) << "/A";
  return {ok, d.str()};
}

// 8. determinism of every experiment

std::string render(const RunConfig& c) {
  const auto out = run_experiment(c);
  std::ostringstream os;
  if (c.format == "csv")
    write_csv(os, out.table);
  else
    os << (out.data.is_null() ? table_to_json(out.table) : out.data).dump(2);
  return os.str();
}

Verdict determinism() {
  std::vector<RunConfig> configs;
  RunConfig s = default_config("sweep");
  s.sweep.points = 12;
  configs.push_back(s);
  RunConfig t = default_config("trajectory");
  t.model.A = 0.1;
  t.ramp.total_time = 20.0;
  t.ramp.steps = 20;
  t.ensemble.n_traj = 60;
  t.seed = 42;
  configs.push_back(t);
  RunConfig t2 = t;
  t2.threads = 2;
  RunConfig g = default_config("gate");
  g.gate.points = 50;
  configs.push_back(g);
  RunConfig c = default_config("cluster");
  c.cluster.points = 3;
  c.cluster.gammas = {0.0};
  configs.push_back(c);
  RunConfig e = default_config("estimate");
  e.format = "json";
  configs.push_back(e);

  std::size_t same = 0;
  for (const auto& cfg : configs)
    if (render(cfg) == render(cfg)) ++same;
  const bool threads_same = render(t) == render(t2);
  std::ostringstream d;
  d << same << "/" << configs.size() << " experiments byte-identical on rerun; trajectory with 1 vs 2 threads "
    << (threads_same ? "identical" : "DIFFERENT");
  return {same == configs.size() && threads_same, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--strict") == 0) strict = true;

  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "dressed-state spectrum", 1.0, dressed_states},
      {2, "Mott plateau", 300.0, mott_plateau},
      {3, "sharpening with size", 1800.0, sharpening},
      {4, "dissipative separation", 600.0, dissipative_separation},
      {5, "mediated gate", 10.0, mediated_gate_scan},
      {6, "cluster fidelity", 1800.0, cluster_fidelity},
      {7, "resource arithmetic", 1.0, resources},
      {8, "determinism", 600.0, determinism},
  };

  int failed = 0;
  int errors = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
      ++errors;
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s <= c.budget_s;
    const bool pass = v.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s %d %s: %s; runtime %.2f s (budget %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                v.detail.c_str(), s, c.budget_s, in_time ? "" : " EXCEEDED");
    std::fflush(stdout);
  }
  std::printf("SUMMARY %zu criteria, %zu passed, %d failed\n", criteria.size(), criteria.size() - failed, failed);
  if (errors) return 2;
  return strict && failed ? 1 : 0;
}
