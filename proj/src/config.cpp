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

#include "jchsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "jchsim/errors.hpp"
#include "jchsim/model.hpp"

namespace jchsim {
namespace {

// Reads the members of one JSON object; anything left unread is unknown.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("'" + label() + "' must be an object");
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return j_.contains(key); }

  const Json* child(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void read(const std::string& key, double& v) {
    if (auto* c = child(key)) {
      if (!c->is_number()) throw type_error(key, "a number");
      v = c->get<double>();
    }
  }
  void read(const std::string& key, bool& v) {
    if (auto* c = child(key)) {
      if (!c->is_boolean()) throw type_error(key, "a boolean");
      v = c->get<bool>();
    }
  }
  void read(const std::string& key, std::string& v) {
    if (auto* c = child(key)) {
      if (!c->is_string()) throw type_error(key, "a string");
      v = c->get<std::string>();
    }
  }
  void read(const std::string& key, int& v) {
    if (auto* c = child(key)) {
      if (!c->is_number_integer()) throw type_error(key, "an integer");
      v = c->get<int>();
    }
  }
  void read(const std::string& key, std::size_t& v) {
    if (auto* c = child(key)) {
      if (!c->is_number_unsigned()) throw type_error(key, "a non-negative integer");
      v = c->get<std::size_t>();
    }
  }
  void read(const std::string& key, std::uint64_t& v, int) {
    if (auto* c = child(key)) {
      if (!c->is_number_unsigned()) throw type_error(key, "a non-negative integer");
      v = c->get<std::uint64_t>();
    }
  }
  void read(const std::string& key, std::vector<double>& v) {
    if (auto* c = child(key)) {
      if (!c->is_array()) throw type_error(key, "an array of numbers");
      v.clear();
      for (const auto& e : *c) {
        if (!e.is_number()) throw type_error(key, "an array of numbers");
        v.push_back(e.get<double>());
      }
    }
  }
  void read(const std::string& key, std::vector<std::string>& v) {
    if (auto* c = child(key)) {
      if (!c->is_array()) throw type_error(key, "an array of strings");
      v.clear();
      for (const auto& e : *c) {
        if (!e.is_string()) throw type_error(key, "an array of strings");
        v.push_back(e.get<std::string>());
      }
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError("unknown key '" + key_path(it.key()) + "'");
    }
  }

 private:
  std::string label() const { return path_.empty() ? "<root>" : path_; }
  ConfigError type_error(const std::string& key, const char* what) const {
    return ConfigError("key '" + key_path(key) + "' must be " + what);
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_model(ObjectReader& r, ModelSection& m) {
  if (r.has("preset")) {
    std::string name;
    r.read("preset", name);
    try {
      const auto p = preset_params(name);
      m = {p.omega_d, p.g, p.A, p.kappa, p.gamma};
    } catch (const InvalidArgument&) {
      throw ConfigError("key '" + r.key_path("preset") + "': unknown parameter preset '" + name + "'");
    }
  }
  r.read("omega_d", m.omega_d);
  r.read("g", m.g);
  r.read("A", m.A);
  r.read("kappa", m.kappa);
  r.read("gamma", m.gamma);
}

template <class F>
void section(ObjectReader& root, const std::string& key, F&& body) {
  if (const Json* c = root.child(key)) {
    ObjectReader r(*c, root.key_path(key));
    body(r);
    r.finish();
  }
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("key '" + key + "' " + what);
}

bool one_of(const std::string& v, std::initializer_list<const char*> options) {
  return std::any_of(options.begin(), options.end(), [&](const char* o) { return v == o; });
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"sweep", "trajectory", "gate", "cluster", "estimate"};
  return names;
}

RunConfig default_config(const std::string& experiment) {
  RunConfig c;
  c.experiment = experiment;
  c.validate();
  return c;
}

void RunConfig::validate() const {
  const auto& names = experiment_names();
  require(std::find(names.begin(), names.end(), experiment) != names.end(), "experiment",
          "must be one of sweep, trajectory, gate, cluster, estimate (got '" + experiment + "')");
  require(one_of(format, {"csv", "json"}), "format", "must be csv or json");
  require(threads >= 1, "threads", "must be >= 1");

  require(non_negative(model.omega_d), "model.omega_d", "must be finite and >= 0");
  require(non_negative(model.g), "model.g", "must be finite and >= 0");
  require(non_negative(model.A), "model.A", "must be finite and >= 0");
  require(non_negative(model.kappa), "model.kappa", "must be finite and >= 0");
  require(non_negative(model.gamma), "model.gamma", "must be finite and >= 0");

  require(one_of(lattice.geometry, {"chain", "ring", "grid"}), "lattice.geometry", "must be chain, ring or grid");
  if (lattice.geometry == "grid") {
    require(lattice.rows >= 1, "lattice.rows", "must be >= 1");
    require(lattice.cols >= 1, "lattice.cols", "must be >= 1");
  } else {
    require(lattice.sites >= 1, "lattice.sites", "must be >= 1");
  }

  require(sweep.n_max >= 1, "sweep.n_max", "must be >= 1");
  require(sweep.filling >= 0, "sweep.filling", "must be >= 0");
  require(positive(sweep.delta_min), "sweep.delta_min", "must be > 0");
  require(positive(sweep.delta_max) && sweep.delta_max > sweep.delta_min, "sweep.delta_max",
          "must be > sweep.delta_min");
  require(sweep.points >= 2, "sweep.points", "must be >= 2");

  require(std::isfinite(ramp.delta_start), "ramp.delta_start", "must be finite");
  require(std::isfinite(ramp.delta_end), "ramp.delta_end", "must be finite");
  require(positive(ramp.total_time), "ramp.total_time", "must be > 0");
  require(one_of(ramp.shape, {"linear", "smoothstep"}), "ramp.shape", "must be linear or smoothstep");
  require(ramp.steps >= 1, "ramp.steps", "must be >= 1");

  require(ensemble.n_traj >= 1, "ensemble.n_traj", "must be >= 1");
  require(one_of(ensemble.mode, {"during_ramp", "at_fixed_delta"}), "ensemble.mode",
          "must be during_ramp or at_fixed_delta");
  require(non_negative(ensemble.hold_time), "ensemble.hold_time", "must be >= 0");
  require(ensemble.hold_samples >= 1, "ensemble.hold_samples", "must be >= 1");
  require(positive(ensemble.jump_tol), "ensemble.jump_tol", "must be > 0");

  require(positive(gate.A), "gate.A", "must be > 0");
  require(non_negative(gate.t_max), "gate.t_max", "must be >= 0");
  require(gate.points >= 1, "gate.points", "must be >= 1");
  require(one_of(gate.mediator, {"zero", "one", "plus"}), "gate.mediator", "must be zero, one or plus");
  require(positive(gate.tol), "gate.tol", "must be > 0");

  require(cluster.rows >= 3 && cluster.rows % 2 == 1, "cluster.rows", "must be odd and >= 3");
  require(cluster.cols >= 3 && cluster.cols % 2 == 1, "cluster.cols", "must be odd and >= 3");
  require(positive(cluster.delta_off_min), "cluster.delta_off_min", "must be > 0");
  require(positive(cluster.delta_off_max) && cluster.delta_off_max > cluster.delta_off_min,
          "cluster.delta_off_max", "must be > cluster.delta_off_min");
  require(cluster.points >= 2, "cluster.points", "must be >= 2");
  require(!cluster.gammas.empty(), "cluster.gammas", "must not be empty");
  for (double g : cluster.gammas) require(non_negative(g), "cluster.gammas", "entries must be >= 0");
  require(one_of(cluster.mediator_init, {"plus", "zero"}), "cluster.mediator_init", "must be plus or zero");
  require(one_of(cluster.mode, {"density", "pure"}), "cluster.mode", "must be density or pure");
  require(cluster.n_traj >= 1, "cluster.n_traj", "must be >= 1");
  require(positive(cluster.substep), "cluster.substep", "must be > 0");

  require(estimate.q >= 1, "estimate.q", "must be >= 1");
  require(positive(estimate.A), "estimate.A", "must be > 0");
  require(!estimate.modes.empty(), "estimate.modes", "must not be empty");
  for (const auto& m : estimate.modes) {
    require(one_of(m, {"full", "row_reuse", "circuit"}), "estimate.modes",
            "entries must be full, row_reuse or circuit (got '" + m + "')");
  }
}

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  ObjectReader root(j, "");
  root.read("experiment", c.experiment);
  root.read("seed", c.seed, 0);
  root.read("threads", c.threads);
  root.read("output", c.output);
  root.read("format", c.format);
  section(root, "model", [&](ObjectReader& r) { read_model(r, c.model); });
  section(root, "lattice", [&](ObjectReader& r) {
    r.read("geometry", c.lattice.geometry);
    r.read("sites", c.lattice.sites);
    r.read("rows", c.lattice.rows);
    r.read("cols", c.lattice.cols);
  });
  section(root, "sweep", [&](ObjectReader& r) {
    r.read("n_max", c.sweep.n_max);
    r.read("filling", c.sweep.filling);
    r.read("delta_min", c.sweep.delta_min);
    r.read("delta_max", c.sweep.delta_max);
    r.read("points", c.sweep.points);
  });
  section(root, "ramp", [&](ObjectReader& r) {
    r.read("delta_start", c.ramp.delta_start);
    r.read("delta_end", c.ramp.delta_end);
    r.read("total_time", c.ramp.total_time);
    r.read("shape", c.ramp.shape);
    r.read("steps", c.ramp.steps);
    r.read("round_trip", c.ramp.round_trip);
  });
  section(root, "ensemble", [&](ObjectReader& r) {
    r.read("n_traj", c.ensemble.n_traj);
    r.read("mode", c.ensemble.mode);
    r.read("hold_time", c.ensemble.hold_time);
    r.read("hold_samples", c.ensemble.hold_samples);
    r.read("jump_tol", c.ensemble.jump_tol);
  });
  section(root, "gate", [&](ObjectReader& r) {
    r.read("A", c.gate.A);
    r.read("t_max", c.gate.t_max);
    r.read("points", c.gate.points);
    r.read("mediator", c.gate.mediator);
    r.read("tol", c.gate.tol);
  });
  section(root, "cluster", [&](ObjectReader& r) {
    r.read("rows", c.cluster.rows);
    r.read("cols", c.cluster.cols);
    r.read("delta_off_min", c.cluster.delta_off_min);
    r.read("delta_off_max", c.cluster.delta_off_max);
    r.read("points", c.cluster.points);
    r.read("gammas", c.cluster.gammas);
    r.read("include_infinite", c.cluster.include_infinite);
    r.read("postselect", c.cluster.postselect);
    r.read("mediator_init", c.cluster.mediator_init);
    r.read("mode", c.cluster.mode);
    r.read("n_traj", c.cluster.n_traj);
    r.read("substep", c.cluster.substep);
  });
  section(root, "estimate", [&](ObjectReader& r) {
    r.read("q", c.estimate.q);
    r.read("cluster_columns", c.estimate.cluster_columns);
    r.read("circuit_steps", c.estimate.circuit_steps);
    r.read("A", c.estimate.A);
    r.read("modes", c.estimate.modes);
  });
  root.finish();
  c.validate();
  return c;
}

RunConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Json to_json(const RunConfig& c) {
  Json j;
  j["experiment"] = c.experiment;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["output"] = c.output;
  j["format"] = c.format;
  j["model"] = {{"omega_d", c.model.omega_d},
                {"g", c.model.g},
                {"A", c.model.A},
                {"kappa", c.model.kappa},
                {"gamma", c.model.gamma}};
  j["lattice"] = {{"geometry", c.lattice.geometry},
                  {"sites", c.lattice.sites},
                  {"rows", c.lattice.rows},
                  {"cols", c.lattice.cols}};
  j["sweep"] = {{"n_max", c.sweep.n_max},
                {"filling", c.sweep.filling},
                {"delta_min", c.sweep.delta_min},
                {"delta_max", c.sweep.delta_max},
                {"points", c.sweep.points}};
  j["ramp"] = {{"delta_start", c.ramp.delta_start},
               {"delta_end", c.ramp.delta_end},
               {"total_time", c.ramp.total_time},
               {"shape", c.ramp.shape},
               {"steps", c.ramp.steps},
               {"round_trip", c.ramp.round_trip}};
  j["ensemble"] = {{"n_traj", c.ensemble.n_traj},
                   {"mode", c.ensemble.mode},
                   {"hold_time", c.ensemble.hold_time},
                   {"hold_samples", c.ensemble.hold_samples},
                   {"jump_tol", c.ensemble.jump_tol}};
  j["gate"] = {{"A", c.gate.A},
               {"t_max", c.gate.t_max},
               {"points", c.gate.points},
               {"mediator", c.gate.mediator},
               {"tol", c.gate.tol}};
  j["cluster"] = {{"rows", c.cluster.rows},
                  {"cols", c.cluster.cols},
                  {"delta_off_min", c.cluster.delta_off_min},
                  {"delta_off_max", c.cluster.delta_off_max},
                  {"points", c.cluster.points},
                  {"gammas", c.cluster.gammas},
                  {"include_infinite", c.cluster.include_infinite},
                  {"postselect", c.cluster.postselect},
                  {"mediator_init", c.cluster.mediator_init},
                  {"mode", c.cluster.mode},
                  {"n_traj", c.cluster.n_traj},
                  {"substep", c.cluster.substep}};
  j["estimate"] = {{"q", c.estimate.q},
                   {"cluster_columns", c.estimate.cluster_columns},
                   {"circuit_steps", c.estimate.circuit_steps},
                   {"A", c.estimate.A},
                   {"modes", c.estimate.modes}};
  return j;
}

}  // namespace jchsim
