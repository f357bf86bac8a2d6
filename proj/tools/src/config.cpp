// Copyright 2026 The photonet Authors
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

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "config_json.hpp"
#include "photonet/cli.hpp"

namespace photonet::cli {

namespace {

using Keys = std::set<std::string, std::less<>>;

void check_keys(const Json& object, const Keys& allowed, std::string_view where) {
  if (!object.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown field '" + key + "' in " + std::string(where));
    }
  }
}

double number(const Json& j, std::string_view name) {
  if (!j.is_number()) throw ConfigError(std::string(name) + " must be a number");
  const double value = j.get<double>();
  if (!std::isfinite(value)) throw ConfigError(std::string(name) + " must be finite");
  return value;
}

std::int64_t integer(const Json& j, std::string_view name) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double value = j.get<double>();
    if (std::isfinite(value) && value == std::floor(value) && std::abs(value) < 9e15) {
      return static_cast<std::int64_t>(value);
    }
  }
  throw ConfigError(std::string(name) + " must be an integer");
}

std::int64_t positive_integer(const Json& j, std::string_view name) {
  const std::int64_t value = integer(j, name);
  if (value < 1) throw ConfigError(std::string(name) + " must be positive");
  return value;
}

bool boolean(const Json& j, std::string_view name) {
  if (!j.is_boolean()) throw ConfigError(std::string(name) + " must be true or false");
  return j.get<bool>();
}

std::string text(const Json& j, std::string_view name) {
  if (!j.is_string()) throw ConfigError(std::string(name) + " must be a string");
  return j.get<std::string>();
}

// Grid values are rounded to 12 decimals so that 0.05 + 3 * 0.05 prints and
// compares as 0.2.
double tidy(double x) { return std::round(x * 1e12) / 1e12; }

std::vector<double> grid(const Json& j, std::string_view name) {
  std::vector<double> values;
  if (j.is_array()) {
    for (const auto& item : j) values.push_back(number(item, name));
  } else if (j.is_object()) {
    check_keys(j, {"start", "stop", "step"}, name);
    if (!j.contains("start") || !j.contains("stop") || !j.contains("step")) {
      throw ConfigError(std::string(name) + " range needs start, stop and step");
    }
    const double start = number(j.at("start"), name);
    const double stop = number(j.at("stop"), name);
    const double step = number(j.at("step"), name);
    if (!(step > 0.0) || stop < start) throw ConfigError(std::string(name) + " range is empty or has step <= 0");
    const double span = (stop - start) / step;
    if (span > 1e6) throw ConfigError(std::string(name) + " range has too many points");
    const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) values.push_back(tidy(start + static_cast<double>(i) * step));
  } else {
    throw ConfigError(std::string(name) + " must be a list of numbers or a {start, stop, step} range");
  }
  if (values.empty()) throw ConfigError(std::string(name) + " is empty");
  return values;
}

void require_unit_interval(const std::vector<double>& values, std::string_view name) {
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " values must lie in [0, 1]");
  }
}

Keys top_level_keys(Command command) {
  Keys keys{"command", "format", "output", "seed"};
  switch (command) {
    case Command::dist:
      keys.insert({"t", "phases", "variant", "noise"});
      break;
    case Command::lp_scan:
      keys.insert({"t_grid", "phases", "noise", "precision", "implied_marginals", "certificates", "checkpoint",
                   "resume"});
      break;
    case Command::fit:
      keys.insert({"t_grid", "phases", "noise", "visibilities", "training", "checkpoint", "resume"});
      break;
    case Command::noise_sweep:
      keys.insert({"t", "phases", "noise", "transmissivity_grid", "efficiency_grid", "training", "checkpoint",
                   "resume"});
      break;
    case Command::ring:
      keys.insert({"t_grid", "parties", "phase", "variant", "noise", "certificates", "checkpoint", "resume"});
      break;
    case Command::herald:
      keys.insert({"herald"});
      break;
  }
  return keys;
}

// The swept noise field of fit and noise-sweep may not also be fixed.
Keys noise_keys(Command command) {
  Keys keys{"impurity", "channel_transmissivity", "detector_efficiency", "werner_visibility", "fidelity"};
  if (command == Command::fit) keys.erase("werner_visibility");
  if (command == Command::noise_sweep) {
    keys.erase("channel_transmissivity");
    keys.erase("detector_efficiency");
  }
  return keys;
}

NoiseParams parse_noise(const Json& j, Command command) {
  check_keys(j, noise_keys(command), "noise");
  NoiseParams noise;
  if (j.contains("impurity")) noise.impurity = number(j.at("impurity"), "noise.impurity");
  if (j.contains("channel_transmissivity")) {
    noise.channel_transmissivity = number(j.at("channel_transmissivity"), "noise.channel_transmissivity");
  }
  if (j.contains("detector_efficiency")) {
    noise.detector_efficiency = number(j.at("detector_efficiency"), "noise.detector_efficiency");
  }
  if (j.contains("werner_visibility")) {
    noise.werner_visibility = number(j.at("werner_visibility"), "noise.werner_visibility");
  }
  if (j.contains("fidelity")) {
    try {
      noise.fidelity = parse_channel_fidelity(text(j.at("fidelity"), "noise.fidelity"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    noise.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return noise;
}

TrainingConfig parse_training(const Json& j) {
  check_keys(j,
             {"batch_latent_samples", "steps", "learning_rate", "decay_factor", "decay_points", "restarts",
              "eval_samples", "hidden_layers", "hidden_width"},
             "training");
  TrainingConfig c;
  if (j.contains("batch_latent_samples")) {
    c.batch_latent_samples = static_cast<std::size_t>(positive_integer(j.at("batch_latent_samples"), "batch_latent_samples"));
  }
  if (j.contains("steps")) c.steps = static_cast<int>(positive_integer(j.at("steps"), "steps"));
  if (j.contains("learning_rate")) c.learning_rate = number(j.at("learning_rate"), "learning_rate");
  if (j.contains("decay_factor")) c.decay_factor = number(j.at("decay_factor"), "decay_factor");
  if (j.contains("decay_points")) {
    if (!j.at("decay_points").is_array()) throw ConfigError("decay_points must be a list of numbers");
    c.decay_points.clear();
    for (const auto& p : j.at("decay_points")) c.decay_points.push_back(number(p, "decay_points"));
  }
  if (j.contains("restarts")) c.restarts = static_cast<int>(positive_integer(j.at("restarts"), "restarts"));
  if (j.contains("eval_samples")) {
    c.eval_samples = static_cast<std::size_t>(positive_integer(j.at("eval_samples"), "eval_samples"));
  }
  if (j.contains("hidden_layers")) c.hidden_layers = static_cast<int>(positive_integer(j.at("hidden_layers"), "hidden_layers"));
  if (j.contains("hidden_width")) c.hidden_width = static_cast<int>(positive_integer(j.at("hidden_width"), "hidden_width"));
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

HeraldingSpec parse_herald(const Json& j) {
  check_keys(j, {"squeezing", "pixel_efficiency", "pixel_count", "pulse_rate_hz"}, "herald");
  HeraldingSpec h;
  if (j.contains("squeezing")) h.squeezing = number(j.at("squeezing"), "herald.squeezing");
  if (j.contains("pixel_efficiency")) h.pixel_efficiency = number(j.at("pixel_efficiency"), "herald.pixel_efficiency");
  if (j.contains("pixel_count")) h.pixel_count = static_cast<int>(integer(j.at("pixel_count"), "herald.pixel_count"));
  if (j.contains("pulse_rate_hz")) h.pulse_rate_hz = number(j.at("pulse_rate_hz"), "herald.pulse_rate_hz");
  try {
    h.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return h;
}

Json noise_json(const NoiseParams& n, Command command) {
  Json j = Json::object();
  const Keys keys = noise_keys(command);
  if (keys.contains("impurity")) j["impurity"] = n.impurity;
  if (keys.contains("channel_transmissivity")) j["channel_transmissivity"] = n.channel_transmissivity;
  if (keys.contains("detector_efficiency")) j["detector_efficiency"] = n.detector_efficiency;
  if (keys.contains("werner_visibility")) j["werner_visibility"] = n.werner_visibility;
  j["fidelity"] = std::string(to_string(n.fidelity));
  return j;
}

Json training_json(const TrainingConfig& c) {
  return Json{{"batch_latent_samples", c.batch_latent_samples},
              {"steps", c.steps},
              {"learning_rate", c.learning_rate},
              {"decay_factor", c.decay_factor},
              {"decay_points", c.decay_points},
              {"restarts", c.restarts},
              {"eval_samples", c.eval_samples},
              {"hidden_layers", c.hidden_layers},
              {"hidden_width", c.hidden_width}};
}

std::vector<double> default_grid(double start, double stop, double step) {
  return grid(Json{{"start", start}, {"stop", stop}, {"step", step}}, "default grid");
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::dist: return "dist";
    case Command::lp_scan: return "lp-scan";
    case Command::fit: return "fit";
    case Command::noise_sweep: return "noise-sweep";
    case Command::ring: return "ring";
    case Command::herald: return "herald";
  }
  return "dist";
}

Command parse_command(std::string_view name) {
  for (Command c : {Command::dist, Command::lp_scan, Command::fit, Command::noise_sweep, Command::ring,
                    Command::herald}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

RunConfig parse_config_json(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (!doc.contains("command")) throw ConfigError("config needs a command");
  RunConfig c;
  c.command = parse_command(text(doc.at("command"), "command"));
  check_keys(doc, top_level_keys(c.command), "config for " + std::string(to_string(c.command)));

  if (doc.contains("format")) {
    const std::string f = text(doc.at("format"), "format");
    if (f == "rows") {
      c.format = OutputFormat::rows;
    } else if (f == "kv") {
      c.format = OutputFormat::kv;
    } else {
      throw ConfigError("format must be 'rows' or 'kv'");
    }
  }
  if (doc.contains("output")) {
    c.output = text(doc.at("output"), "output");
    if (c.output.empty()) throw ConfigError("output must not be empty");
  }
  if (doc.contains("seed")) {
    const std::int64_t seed = integer(doc.at("seed"), "seed");
    if (seed < 0) throw ConfigError("seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
  }
  c.training.seed = c.seed;

  switch (c.command) {
    case Command::dist:
      c.transmissivity = 0.5;
      break;
    case Command::lp_scan:
      c.t_grid = default_grid(0.05, 0.95, 0.05);
      break;
    case Command::fit:
      c.t_grid = default_grid(0.0, 1.0, 0.05);
      c.visibilities = default_grid(0.5, 1.0, 0.1);
      break;
    case Command::noise_sweep:
      c.transmissivity = 0.85;
      c.noise.impurity = 0.006875;
      c.transmissivity_grid = default_grid(0.94, 1.0, 0.01);
      c.efficiency_grid = default_grid(0.94, 1.0, 0.01);
      break;
    case Command::ring:
      c.t_grid = default_grid(0.05, 0.95, 0.05);
      break;
    case Command::herald:
      break;
  }

  if (doc.contains("t")) {
    c.transmissivity = number(doc.at("t"), "t");
    if (!(c.transmissivity >= 0.0 && c.transmissivity <= 1.0)) throw ConfigError("t must lie in [0, 1]");
  }
  if (doc.contains("t_grid")) c.t_grid = grid(doc.at("t_grid"), "t_grid");
  require_unit_interval(c.t_grid, "t_grid");
  if (doc.contains("phases")) {
    const Json& p = doc.at("phases");
    if (!p.is_array() || p.size() != 3) throw ConfigError("phases must be a list of three numbers");
    for (std::size_t k = 0; k < 3; ++k) c.phases[k] = number(p[k], "phases");
  }
  if (doc.contains("phase")) c.ring_phase = number(doc.at("phase"), "phase");
  if (doc.contains("variant")) {
    try {
      c.variant = parse_povm_variant(text(doc.at("variant"), "variant"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (doc.contains("noise")) {
    const double impurity_default = c.noise.impurity;
    c.noise = parse_noise(doc.at("noise"), c.command);
    if (!doc.at("noise").contains("impurity")) c.noise.impurity = impurity_default;
  }
  if (c.variant != PovmVariant::passive && !c.noise.is_ideal()) {
    throw ConfigError("noise is only defined for the passive variant");
  }
  if (doc.contains("visibilities")) c.visibilities = grid(doc.at("visibilities"), "visibilities");
  require_unit_interval(c.visibilities, "visibilities");
  if (doc.contains("transmissivity_grid")) c.transmissivity_grid = grid(doc.at("transmissivity_grid"), "transmissivity_grid");
  require_unit_interval(c.transmissivity_grid, "transmissivity_grid");
  if (doc.contains("efficiency_grid")) c.efficiency_grid = grid(doc.at("efficiency_grid"), "efficiency_grid");
  require_unit_interval(c.efficiency_grid, "efficiency_grid");
  if (doc.contains("training")) {
    c.training = parse_training(doc.at("training"));
    c.training.seed = c.seed;
  }
  if (doc.contains("precision")) {
    c.precision = number(doc.at("precision"), "precision");
    if (!(c.precision > 0.0)) throw ConfigError("precision must be positive");
  }
  if (doc.contains("implied_marginals")) c.implied_marginals = boolean(doc.at("implied_marginals"), "implied_marginals");
  if (doc.contains("certificates")) c.certificates = text(doc.at("certificates"), "certificates");
  if (doc.contains("parties")) {
    const Json& p = doc.at("parties");
    if (!p.is_array() || p.empty()) throw ConfigError("parties must be a non-empty list of integers");
    c.parties.clear();
    for (const auto& n : p) {
      const std::int64_t value = integer(n, "parties");
      if (value < 3 || value > 16) throw ConfigError("ring party counts must lie in [3, 16]");
      c.parties.push_back(static_cast<int>(value));
    }
  }
  if (doc.contains("herald")) c.herald = parse_herald(doc.at("herald"));
  if (doc.contains("checkpoint")) c.checkpoint = text(doc.at("checkpoint"), "checkpoint");
  if (doc.contains("resume")) c.resume = boolean(doc.at("resume"), "resume");
  return c;
}

RunConfig parse_run_config(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config_json(doc);
}

Json config_json(const RunConfig& c, bool with_io) {
  Json j;
  j["command"] = std::string(to_string(c.command));
  if (with_io) {
    j["format"] = c.format == OutputFormat::rows ? "rows" : "kv";
    j["output"] = c.output;
  }
  j["seed"] = c.seed;
  switch (c.command) {
    case Command::dist:
      j["t"] = c.transmissivity;
      j["phases"] = c.phases;
      j["variant"] = std::string(to_string(c.variant));
      j["noise"] = noise_json(c.noise, c.command);
      break;
    case Command::lp_scan:
      j["t_grid"] = c.t_grid;
      j["phases"] = c.phases;
      j["noise"] = noise_json(c.noise, c.command);
      j["precision"] = c.precision;
      j["implied_marginals"] = c.implied_marginals;
      if (with_io && !c.certificates.empty()) j["certificates"] = c.certificates;
      break;
    case Command::fit:
      j["t_grid"] = c.t_grid;
      j["phases"] = c.phases;
      j["noise"] = noise_json(c.noise, c.command);
      j["visibilities"] = c.visibilities;
      j["training"] = training_json(c.training);
      break;
    case Command::noise_sweep:
      j["t"] = c.transmissivity;
      j["phases"] = c.phases;
      j["noise"] = noise_json(c.noise, c.command);
      j["transmissivity_grid"] = c.transmissivity_grid;
      j["efficiency_grid"] = c.efficiency_grid;
      j["training"] = training_json(c.training);
      break;
    case Command::ring:
      j["t_grid"] = c.t_grid;
      j["parties"] = c.parties;
      j["phase"] = c.ring_phase;
      j["variant"] = std::string(to_string(c.variant));
      j["noise"] = noise_json(c.noise, c.command);
      if (with_io && !c.certificates.empty()) j["certificates"] = c.certificates;
      break;
    case Command::herald:
      j["herald"] = Json{{"squeezing", c.herald.squeezing},
                         {"pixel_efficiency", c.herald.pixel_efficiency},
                         {"pixel_count", c.herald.pixel_count},
                         {"pulse_rate_hz", c.herald.pulse_rate_hz}};
      break;
  }
  if (with_io && c.command != Command::dist && c.command != Command::herald) {
    if (!c.checkpoint.empty()) j["checkpoint"] = c.checkpoint;
    j["resume"] = c.resume;
  }
  return j;
}

std::string run_config_to_json(const RunConfig& config) { return config_json(config, true).dump(2) + "\n"; }

}  // namespace photonet::cli
