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

#include "jchsim/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <ostream>

#include "jchsim/cluster.hpp"
#include "jchsim/dynamics.hpp"
#include "jchsim/errors.hpp"
#include "jchsim/groundstate.hpp"

namespace jchsim {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

Json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_double(*d);
    return *d;
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

Json finite_or_string(double v) { return std::isfinite(v) ? Json(v) : Json(format_double(v)); }

Cell count(std::size_t n) { return static_cast<std::int64_t>(n); }

Vector2c mediator_state(const std::string& name) {
  if (name == "zero") return Vector2c(1.0, 0.0);
  if (name == "one") return Vector2c(0.0, 1.0);
  return Vector2c(1.0, 1.0) / std::sqrt(2.0);
}

}  // namespace

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t k = 0; k < t.columns.size(); ++k) out << (k ? "," : "") << t.columns[k];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << cell_text(row[k]);
    out << '\n';
  }
}

Json table_to_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json r = Json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  return Json{{"columns", t.columns}, {"rows", std::move(rows)}};
}

ModelParams model_params(const ModelSection& m) {
  ModelParams p;
  p.omega_d = m.omega_d;
  p.omega_0 = m.omega_d;
  p.g = m.g;
  p.A = m.A;
  p.kappa = m.kappa;
  p.gamma = m.gamma;
  p.rotating_frame = true;
  p.validate();
  return p;
}

LatticeSpec make_lattice(const LatticeSection& l) {
  if (l.geometry == "grid") return LatticeSpec::grid(l.rows, l.cols);
  return LatticeSpec::chain(l.sites, l.geometry == "ring");
}

std::string gate_label(const Matrix4c& u, double tol) {
  Matrix4c zz = Matrix4c::Zero();
  const double signs[4] = {1.0, -1.0, -1.0, 1.0};
  for (int i = 0; i < 4; ++i) zz(i, i) = signs[i];
  const Matrix4c swap = swap_gate();
  const Matrix4c cz = cz_gate();
  const std::pair<const char*, Matrix4c> candidates[] = {
      {"SWAP.CP", swap * cz},
      {"SWAP.(ZxZ).CP", swap * zz * cz},
      {"CP", cz},
      {"SWAP", swap},
      {"I", Matrix4c::Identity()},
  };
  for (const auto& [name, v] : candidates) {
    const double overlap = std::abs((v.adjoint() * u).trace()) / 4.0;
    if (1.0 - overlap <= tol) return name;
  }
  return "other";
}

ExperimentOutput run_sweep(const RunConfig& c) {
  const ModelParams p = model_params(c.model);
  const LatticeSpec lattice = make_lattice(c.lattice);
  const auto grid = log_grid(c.sweep.delta_min * p.g, c.sweep.delta_max * p.g, c.sweep.points);
  const SweepResult s = sweep_order_parameter(p, lattice, c.sweep.n_max, c.sweep.filling, grid, {}, c.threads);

  ExperimentOutput out;
  out.table.columns = {"delta", "delta_over_g", "var_mid", "pop_1minus", "energy", "num_sites", "degenerate_flag"};
  for (const auto& r : s.rows) {
    out.table.rows.push_back({r.delta, r.delta_over_g, r.var_mid, r.pop_1minus, r.energy, count(r.num_sites),
                              count(r.degenerate ? 1 : 0)});
  }
  out.summary = {{"rows", s.rows.size()},
                 {"max_slope_per_decade", s.rows.size() >= 2 ? finite_or_string(transition_steepness(s)) : Json()}};
  return out;
}

ExperimentOutput run_trajectory(const RunConfig& c) {
  const ModelParams p = model_params(c.model);
  const LatticeSpec lattice = make_lattice(c.lattice);
  const int n_max = c.sweep.n_max;
  const int excitations = c.sweep.filling * static_cast<int>(lattice.num_sites());
  auto sector = std::make_shared<const BasisIndexer>(lattice, n_max, excitations);
  auto full = std::make_shared<const BasisIndexer>(lattice, n_max);

  RampSchedule r;
  r.delta_start = c.ramp.delta_start * p.g;
  r.delta_end = c.ramp.delta_end * p.g;
  r.total_time = c.ramp.total_time;
  r.shape = c.ramp.shape == "smoothstep" ? RampShape::Smoothstep : RampShape::Linear;
  r.steps = c.ramp.steps;
  r.round_trip = c.ramp.round_trip;
  r.validate();

  const auto gs = ground_state(build_hamiltonian(p.with_detuning(r.delta_start), lattice, *sector), sector);

  EnsembleOptions o;
  o.n_traj = c.ensemble.n_traj;
  o.seed = c.seed;
  o.threads = c.threads;
  o.mode = c.ensemble.mode == "at_fixed_delta" ? DecayMode::AtFixedDelta : DecayMode::DuringRamp;
  o.hold_time = c.ensemble.hold_time;
  o.hold_samples = c.ensemble.hold_samples;
  o.jump_tol = c.ensemble.jump_tol;
  o.keep_final_states = false;
  const EnsembleResult e = mcwf_ensemble(p, lattice, full, r, gs.state, o);

  ExperimentOutput out;
  out.table.columns = {"time",           "delta_over_g",     "mean_var_mid",   "stderr_var_mid",
                       "mean_pop_1minus", "stderr_pop_1minus", "mean_excitations", "jumps_total"};
  for (const auto& row : e.rows) {
    out.table.rows.push_back({row.time, row.delta / p.g, row.mean_var_mid, row.stderr_var_mid, row.mean_pop_1minus,
                              row.stderr_pop_1minus, row.mean_excitations, count(row.jumps_total)});
  }
  if (!e.rows.empty()) {
    const auto& first = e.rows.front();
    const auto& last = e.rows.back();
    out.summary = {{"n_traj", c.ensemble.n_traj},
                   {"initial_var_mid", first.mean_var_mid},
                   {"final_var_mid", last.mean_var_mid},
                   {"final_stderr_var_mid", last.stderr_var_mid},
                   {"jumps_total", last.jumps_total}};
  }
  return out;
}

ExperimentOutput run_gate(const RunConfig& c) {
  const double A = c.gate.A;
  const double t_max = c.gate.t_max > 0.0 ? c.gate.t_max : mirror_time(A);
  const Vector2c med = mediator_state(c.gate.mediator);
  const auto rows = gate_time_scan(A, t_max, c.gate.points, med, c.threads);
  const auto good = calibrated_rows(rows, c.gate.tol);

  ExperimentOutput out;
  out.table.columns = {"time", "p0", "p1", "unitary_defect_0", "unitary_defect_1", "cp_equiv_0", "cp_equiv_1"};
  for (const auto& r : rows) {
    out.table.rows.push_back({r.time, r.p0, r.p1, r.unitary_defect_0, r.unitary_defect_1, r.cp_equiv_0, r.cp_equiv_1});
  }

  Json s{{"mediator", c.gate.mediator}, {"tol", c.gate.tol}, {"calibrated_rows", good.size()}};
  if (good.empty()) {
    s["t_star"] = nullptr;
    s["cp_equivalent_0"] = false;
    s["cp_equivalent_1"] = false;
  } else {
    const auto& r = rows[good.front()];
    s["t_star"] = r.time;
    s["t_star_over_mirror_time"] = r.time / mirror_time(A);
    s["cp_equivalent_0"] = r.cp_equiv_0 <= c.gate.tol;
    s["cp_equivalent_1"] = r.cp_equiv_1 <= c.gate.tol;
    const auto gates = mediated_gate(r.time, med, A);
    Json branches = Json::array();
    for (const auto& g : gates) {
      Json b{{"outcome", g.outcome}, {"probability", g.probability}, {"unitary_defect", g.unitary_defect}};
      b["label"] = g.probability > 1e-12 ? gate_label(g.gate) : "none";
      branches.push_back(std::move(b));
    }
    s["branches"] = std::move(branches);
  }
  // mediator |0> and |1> labels at t*, independent of the scanned input
  if (!good.empty()) {
    const double t = rows[good.front()].time;
    const auto g0 = mediated_gate(t, Vector2c(1.0, 0.0), A);
    const auto g1 = mediated_gate(t, Vector2c(0.0, 1.0), A);
    s["mediator_zero_label"] = gate_label(g0[0].gate);
    s["mediator_zero_outcome0_probability"] = g0[0].probability;
    s["mediator_one_label"] = gate_label(g1[1].gate);
    s["mediator_one_outcome1_probability"] = g1[1].probability;
  }
  out.summary = std::move(s);
  return out;
}

ExperimentOutput run_cluster(const RunConfig& c) {
  const auto& cs = c.cluster;
  ProtocolOptions opts;
  opts.mode = cs.mode == "pure" ? SimulationMode::PureTrajectories : SimulationMode::DensityMatrix;
  opts.n_traj = cs.n_traj;
  opts.seed = c.seed;
  opts.threads = c.threads;

  std::vector<double> grid = log_grid(cs.delta_off_min, cs.delta_off_max, cs.points);

  ExperimentOutput out;
  out.table.columns = {"delta_off_over_A", "gamma_over_A", "fidelity", "postselect_prob", "outcome_branch_count"};
  Json curves = Json::array();
  for (double gamma : cs.gammas) {
    GridProtocol p = assign_roles(cs.rows, cs.cols, 1.0);
    p.gamma = gamma;
    p.postselect = cs.postselect;
    p.mediator_init = cs.mediator_init == "zero" ? MediatorInit::Zero : MediatorInit::Plus;
    p.substep = cs.substep;
    std::vector<double> points = grid;
    if (cs.include_infinite) points.push_back(std::numeric_limits<double>::infinity());
    const auto scan = delta_off_scan(p, points, opts);
    for (const auto& pt : scan) {
      out.table.rows.push_back(
          {pt.delta_off, pt.gamma, pt.fidelity, pt.postselect_probability, count(pt.branch_count)});
    }

    std::vector<FidelityPoint> finite;
    for (const auto& pt : scan)
      if (std::isfinite(pt.delta_off)) finite.push_back(pt);
    Json curve{{"gamma_over_A", gamma}, {"monotone", error_strictly_decreasing(finite)}};
    double best = -1.0, best_delta = 0.0;
    for (const auto& pt : finite) {
      if (pt.fidelity > best) {
        best = pt.fidelity;
        best_delta = pt.delta_off;
      }
    }
    if (!finite.empty()) {
      curve["best_fidelity"] = best;
      curve["best_delta_off_over_A"] = best_delta;
    }
    try {
      curve["error_slope"] = error_scaling_slope(finite);
    } catch (const NumericalError&) {
      curve["error_slope"] = nullptr;
    }
    if (cs.include_infinite) curve["infinite_fidelity"] = scan.back().fidelity;
    curves.push_back(std::move(curve));
  }
  out.summary = {{"curves", std::move(curves)}};
  return out;
}

ExperimentOutput run_estimate(const RunConfig& c) {
  ResourceRequest req;
  req.q = c.estimate.q;
  req.cluster_columns = c.estimate.cluster_columns;
  req.circuit_steps = c.estimate.circuit_steps;
  req.A = c.estimate.A;

  ExperimentOutput out;
  out.table.columns = {"mode", "q", "cluster_width", "array_rows", "array_cols", "steps", "time_over_A"};
  Json list = Json::array();
  for (const auto& name : c.estimate.modes) {
    const auto e = estimate_resources(req, resource_mode_from_string(name));
    out.table.rows.push_back({to_string(e.mode), count(e.q), count(e.cluster_width), count(e.array_rows),
                              count(e.array_cols), count(e.steps), e.time_over_A});
    list.push_back({{"mode", to_string(e.mode)},
                    {"q", e.q},
                    {"cluster_width", e.cluster_width},
                    {"array_rows", e.array_rows},
                    {"array_cols", e.array_cols},
                    {"steps", e.steps},
                    {"time_over_A", e.time_over_A}});
  }
  out.data = {{"request",
               {{"q", req.q}, {"cluster_columns", req.cluster_columns}, {"circuit_steps", req.circuit_steps},
                {"A", req.A}}},
              {"estimates", std::move(list)}};
  return out;
}

ExperimentOutput run_experiment(const RunConfig& c) {
  c.validate();
  if (c.experiment == "sweep") return run_sweep(c);
  if (c.experiment == "trajectory") return run_trajectory(c);
  if (c.experiment == "gate") return run_gate(c);
  if (c.experiment == "cluster") return run_cluster(c);
  return run_estimate(c);
}

std::string version_string() { return JCHSIM_VERSION; }

Json make_manifest(const RunConfig& c, const ExperimentOutput& out, double wall_seconds,
                   const std::string& data_file) {
  return Json{{"tool", "jchsim"},
              {"version", version_string()},
              {"experiment", c.experiment},
              {"seed", c.seed},
              {"threads", c.threads},
              {"format", c.format},
              {"data_file", data_file},
              {"wall_time_seconds", wall_seconds},
              {"config", to_json(c)},
              {"summary", out.summary}};
}

}  // namespace jchsim
