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

// The photonet command line: one RunConfig per invocation, supplied as a JSON
// file (--config), as flags, or both (flags win). Every output carries a
// provenance block; sweeps checkpoint after each grid point.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "photonet/fitter.hpp"
#include "photonet/optics.hpp"

namespace photonet::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitPartial = 3;

enum class Command { dist, lp_scan, fit, noise_sweep, ring, herald };
enum class OutputFormat { rows, kv };

std::string_view to_string(Command command);
Command parse_command(std::string_view text);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  Command command = Command::dist;
  OutputFormat format = OutputFormat::rows;
  std::string output = "-";  ///< "-" is standard output
  std::uint64_t seed = 0;

  double transmissivity = 0.5;  ///< dist and noise-sweep
  std::vector<double> t_grid;   ///< lp-scan, fit, ring
  std::array<double, 3> phases{0.0, 0.0, 0.0};
  double ring_phase = 0.0;  ///< every ring party uses this phase
  PovmVariant variant = PovmVariant::passive;
  NoiseParams noise;

  std::vector<double> visibilities;         ///< fit columns
  std::vector<double> transmissivity_grid;  ///< noise-sweep rows (channel T)
  std::vector<double> efficiency_grid;      ///< noise-sweep columns (detector nu)
  TrainingConfig training;

  double precision = 1e-3;  ///< lp-scan boundary bisection width
  bool implied_marginals = false;
  std::string certificates;  ///< directory for certificate documents; empty = none

  std::vector<int> parties{4};
  HeraldingSpec herald;

  std::string checkpoint;  ///< empty = "<output>.checkpoint" for file outputs
  bool resume = false;
};

/// Parses and validates a JSON config document. Unknown keys, and keys that
/// do not apply to the command, are rejected.
RunConfig parse_run_config(std::string_view json_text);

/// Canonical JSON form with every default filled in; parse_run_config
/// accepts it back.
std::string run_config_to_json(const RunConfig& config);

/// Executes a validated config. Returns kExitSuccess or kExitPartial.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line, args[0] being the subcommand (no program name).
/// Validation problems print {"error": ...} to `err` and return
/// kExitValidation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace photonet::cli
