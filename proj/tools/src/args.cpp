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

// Flags mirror the config document: each flag writes one JSON pointer, and
// the merged document goes through the same validation as a config file.

#include <deque>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "config_json.hpp"

namespace photonet::cli {

namespace {

enum class Kind { number, integer, text, flag, grid, numbers, integers };

struct FlagSpec {
  const char* name;
  const char* pointer;
  Kind kind;
  const char* help;
  std::vector<Command> commands;
};

constexpr Command kDist = Command::dist;
constexpr Command kLp = Command::lp_scan;
constexpr Command kFit = Command::fit;
constexpr Command kSweep = Command::noise_sweep;
constexpr Command kRing = Command::ring;
constexpr Command kHerald = Command::herald;

const std::vector<FlagSpec>& flag_specs() {
  static const std::vector<FlagSpec> specs{
      {"--format", "/format", Kind::text, "rows (CSV) or kv (JSON document)", {kDist, kLp, kFit, kSweep, kRing, kHerald}},
      {"--output", "/output", Kind::text, "output file, '-' for stdout", {kDist, kLp, kFit, kSweep, kRing, kHerald}},
      {"--seed", "/seed", Kind::integer, "base seed; restart r uses seed + r", {kDist, kLp, kFit, kSweep, kRing, kHerald}},
      {"--t", "/t", Kind::number, "beamsplitter transmissivity t", {kDist, kSweep}},
      {"--t-grid", "/t_grid", Kind::grid, "t values: start:stop:step or a,b,c", {kLp, kFit, kRing}},
      {"--phases", "/phases", Kind::numbers, "three party phases a,b,c", {kDist, kLp, kFit, kSweep}},
      {"--phase", "/phase", Kind::number, "phase used by every ring party", {kRing}},
      {"--variant", "/variant", Kind::text, "passive, projective or number_resolved", {kDist, kRing}},
      {"--impurity", "/noise/impurity", Kind::number, "two-photon weight Q of each source", {kDist, kLp, kFit, kSweep, kRing}},
      {"--channel-transmissivity", "/noise/channel_transmissivity", Kind::number, "per-mode channel transmission T",
       {kDist, kLp, kFit, kRing}},
      {"--detector-efficiency", "/noise/detector_efficiency", Kind::number, "detector efficiency nu",
       {kDist, kLp, kFit, kRing}},
      {"--werner-visibility", "/noise/werner_visibility", Kind::number, "Werner visibility r of each source",
       {kDist, kLp, kSweep, kRing}},
      {"--fidelity", "/noise/fidelity", Kind::text, "loss/detector model: exact or paper_first_order",
       {kDist, kLp, kFit, kSweep, kRing}},
      {"--visibilities", "/visibilities", Kind::grid, "Werner visibility columns", {kFit}},
      {"--transmissivity-grid", "/transmissivity_grid", Kind::grid, "channel transmission rows T", {kSweep}},
      {"--efficiency-grid", "/efficiency_grid", Kind::grid, "detector efficiency columns nu", {kSweep}},
      {"--batch", "/training/batch_latent_samples", Kind::integer, "latent tuples per training step", {kFit, kSweep}},
      {"--steps", "/training/steps", Kind::integer, "training steps per restart", {kFit, kSweep}},
      {"--learning-rate", "/training/learning_rate", Kind::number, "initial Adam step size", {kFit, kSweep}},
      {"--decay-factor", "/training/decay_factor", Kind::number, "step size multiplier at each decay point", {kFit, kSweep}},
      {"--decay-points", "/training/decay_points", Kind::numbers, "decay points as fractions of steps", {kFit, kSweep}},
      {"--restarts", "/training/restarts", Kind::integer, "independent restarts; the best is kept", {kFit, kSweep}},
      {"--eval-samples", "/training/eval_samples", Kind::integer, "Monte Carlo samples for the final distance",
       {kFit, kSweep}},
      {"--hidden-layers", "/training/hidden_layers", Kind::integer, "hidden layers per party network", {kFit, kSweep}},
      {"--hidden-width", "/training/hidden_width", Kind::integer, "units per hidden layer", {kFit, kSweep}},
      {"--precision", "/precision", Kind::number, "boundary bracket width", {kLp}},
      {"--implied-marginals", "/implied_marginals", Kind::flag, "add the implied single-party marginal rows", {kLp}},
      {"--certificates", "/certificates", Kind::text, "directory for per-point certificate documents", {kLp, kRing}},
      {"--parties", "/parties", Kind::integers, "ring sizes N, e.g. 3,4,5", {kRing}},
      {"--squeezing", "/herald/squeezing", Kind::number, "two-mode squeezing amplitude q", {kHerald}},
      {"--pixel-efficiency", "/herald/pixel_efficiency", Kind::number, "herald pixel efficiency", {kHerald}},
      {"--pixel-count", "/herald/pixel_count", Kind::integer, "herald pixel count M", {kHerald}},
      {"--pulse-rate", "/herald/pulse_rate_hz", Kind::number, "pump pulse rate in Hz", {kHerald}},
      {"--checkpoint", "/checkpoint", Kind::text, "checkpoint file (default <output>.checkpoint)", {kLp, kFit, kSweep, kRing}},
      {"--resume", "/resume", Kind::flag, "skip points already in the checkpoint", {kLp, kFit, kSweep, kRing}},
  };
  return specs;
}

const char* description(Command c) {
  switch (c) {
    case Command::dist: return "Triangle outcome distribution at one t";
    case Command::lp_scan: return "Triangle LP verdicts over a t-grid plus boundary brackets";
    case Command::fit: return "Local-model distances over t (rows) and Werner visibility (columns)";
    case Command::noise_sweep: return "Local-model distances over channel T (rows) and detector nu (columns)";
    case Command::ring: return "Ring distributions and ring LP verdicts over (N, t)";
    case Command::herald: return "Heralded-source impurity and repetition rate";
  }
  return "";
}

double to_number(const std::string& text, const std::string& flag) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ConfigError(flag + " expects a number, got '" + text + "'");
  return value;
}

std::int64_t to_integer(const std::string& text, const std::string& flag) {
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ConfigError(flag + " expects an integer, got '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

Json to_json(const FlagSpec& spec, const std::string& text) {
  const std::string flag = spec.name;
  switch (spec.kind) {
    case Kind::number: return to_number(text, flag);
    case Kind::integer: return to_integer(text, flag);
    case Kind::text: return text;
    case Kind::flag: return true;
    case Kind::grid:
      if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw ConfigError(flag + " range must be start:stop:step");
        return Json{{"start", to_number(parts[0], flag)}, {"stop", to_number(parts[1], flag)},
                    {"step", to_number(parts[2], flag)}};
      }
      [[fallthrough]];
    case Kind::numbers: {
      Json list = Json::array();
      for (const auto& part : split(text, ',')) list.push_back(to_number(part, flag));
      return list;
    }
    case Kind::integers: {
      Json list = Json::array();
      for (const auto& part : split(text, ',')) list.push_back(to_integer(part, flag));
      return list;
    }
  }
  return nullptr;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

struct Binding {
  const FlagSpec* spec;
  CLI::Option* option;
  std::string* text;
  bool* flag;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"photonet: photonic triangle-network distributions, LP certificates and local-model fits"};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 success, 2 validation error, 3 partial failure. "
             "PHOTONET_WORKERS sets the worker-pool size.");

  // Stable storage: CLI11 keeps pointers to these.
  std::deque<std::string> texts;
  std::deque<bool> flags;
  std::deque<std::string> config_paths;
  std::vector<std::pair<Command, CLI::App*>> subcommands;
  std::vector<std::pair<CLI::App*, Binding>> bindings;

  for (Command c : {Command::dist, Command::lp_scan, Command::fit, Command::noise_sweep, Command::ring,
                    Command::herald}) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(c)), description(c));
    subcommands.emplace_back(c, sub);
    sub->add_option("--config", config_paths.emplace_back(), "JSON config file; flags override its fields");
    for (const auto& spec : flag_specs()) {
      if (std::find(spec.commands.begin(), spec.commands.end(), c) == spec.commands.end()) continue;
      Binding b{&spec, nullptr, nullptr, nullptr};
      if (spec.kind == Kind::flag) {
        b.flag = &flags.emplace_back(false);
        b.option = sub->add_flag(spec.name, *b.flag, spec.help);
      } else {
        b.text = &texts.emplace_back();
        b.option = sub->add_option(spec.name, *b.text, std::string(spec.help) + " [" + spec.pointer + "]");
      }
      bindings.emplace_back(sub, b);
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    print_error(err, "validation", e.what());
    return kExitValidation;
  }

  RunConfig config;
  try {
    std::size_t index = 0;
    for (std::size_t i = 0; i < subcommands.size(); ++i) {
      if (subcommands[i].second->parsed()) index = i;
    }
    const auto [command, sub] = subcommands[index];
    Json doc = Json::object();
    const std::string& config_path = config_paths[index];
    if (!config_path.empty()) {
      try {
        doc = Json::parse(read_file(config_path));
      } catch (const Json::exception& e) {
        throw ConfigError("config file " + config_path + " is not valid JSON: " + e.what());
      }
      if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
      if (doc.contains("command") && doc.at("command") != std::string(to_string(command))) {
        throw ConfigError("config file is for command " + doc.at("command").dump());
      }
    }
    doc["command"] = std::string(to_string(command));
    for (const auto& [owner, b] : bindings) {
      if (owner != sub || b.option->count() == 0) continue;
      doc[Json::json_pointer(b.spec->pointer)] = to_json(*b.spec, b.text != nullptr ? *b.text : "");
    }
    config = parse_config_json(doc);
  } catch (const ConfigError& e) {
    print_error(err, "validation", e.what());
    return kExitValidation;
  }
  return run(config, out, err);
}

}  // namespace photonet::cli
