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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "jchsim/config.hpp"
#include "jchsim/errors.hpp"
#include "jchsim/experiments.hpp"

#ifndef JCHSIM_PRESET_DIR
#define JCHSIM_PRESET_DIR "presets"
#endif

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::size_t> threads;
  bool print_config = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw jchsim::ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

jchsim::RunConfig resolve_config(const std::string& experiment, const Flags& f) {
  using jchsim::ConfigError;
  std::string path = f.config_path;
  if (!f.preset.empty()) {
    if (!path.empty()) throw ConfigError("--config and --preset are mutually exclusive");
    path = std::string(JCHSIM_PRESET_DIR) + "/" + f.preset + ".json";
    if (!std::filesystem::exists(path)) throw ConfigError("unknown preset '" + f.preset + "' (looked for " + path + ")");
  }

  jchsim::RunConfig c;
  if (path.empty()) {
    c = jchsim::default_config(experiment);
  } else {
    jchsim::Json j;
    try {
      j = jchsim::Json::parse(read_file(path));
    } catch (const jchsim::Json::parse_error& e) {
      throw ConfigError(path + ": malformed JSON: " + e.what());
    }
    if (j.is_object() && !j.contains("experiment")) j["experiment"] = experiment;
    try {
      c = jchsim::config_from_json(j);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ": " + e.what());
    }
    if (c.experiment != experiment) {
      throw ConfigError(path + ": key 'experiment' is '" + c.experiment + "' but the subcommand is '" + experiment +
                        "'");
    }
  }
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.output = *f.out;
  if (f.format) c.format = *f.format;
  if (f.threads) c.threads = *f.threads;
  c.validate();
  return c;
}

void write_outputs(const jchsim::RunConfig& c, const jchsim::ExperimentOutput& out, double wall) {
  const std::string data_path = c.output.empty() ? c.experiment + "." + c.format : c.output;
  {
    std::ofstream f(data_path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::ios_base::failure("cannot write '" + data_path + "'");
    if (c.format == "csv") {
      jchsim::write_csv(f, out.table);
    } else {
      const jchsim::Json body = out.data.is_null() ? jchsim::table_to_json(out.table) : out.data;
      f << body.dump(2) << '\n';
    }
    if (!f) throw std::ios_base::failure("write failed for '" + data_path + "'");
  }
  const std::string manifest_path = data_path + ".manifest.json";
  std::ofstream m(manifest_path, std::ios::binary | std::ios::trunc);
  if (!m) throw std::ios_base::failure("cannot write '" + manifest_path + "'");
  m << jchsim::make_manifest(c, out, wall, std::filesystem::path(data_path).filename().string()).dump(2) << '\n';
  if (!m) throw std::ios_base::failure("write failed for '" + manifest_path + "'");
  std::cerr << "wrote " << data_path << " and " << manifest_path << '\n';
}

int run(const std::string& experiment, const Flags& f) {
  try {
    const jchsim::RunConfig c = resolve_config(experiment, f);
    if (f.print_config) {
      std::cout << jchsim::to_json(c).dump(2) << '\n';
      return 0;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const jchsim::ExperimentOutput out = jchsim::run_experiment(c);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_outputs(c, out, wall);
    return 0;
  } catch (const jchsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const jchsim::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const jchsim::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const jchsim::CapacityError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled-cavity array simulator"};
  app.set_version_flag("--version", jchsim::version_string());
  app.require_subcommand(1);

  Flags flags;
  const char* help[] = {
      "ground-state order parameter across a detuning grid",
      "quantum-jump ensemble along a detuning ramp",
      "mediated two-qubit gate time scan",
      "cluster-state fidelity against the off-resonance detuning",
      "array size and time for an algorithm",
  };
  std::string chosen;
  const auto& names = jchsim::experiment_names();
  for (std::size_t k = 0; k < names.size(); ++k) {
    CLI::App* sub = app.add_subcommand(names[k], help[k]);
    sub->add_option("--config", flags.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--preset", flags.preset, "bundled preset name");
    sub->add_option("--seed", flags.seed, "master seed");
    sub->add_option("--out", flags.out, "data file path; the manifest goes to <out>.manifest.json");
    sub->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", flags.threads, "worker cap")->check(CLI::PositiveNumber);
    sub->add_flag("--print-config", flags.print_config, "print the resolved config and exit");
    sub->callback([&chosen, name = names[k]] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  return run(chosen, flags);
}
