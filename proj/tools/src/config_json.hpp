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

#pragma once

#include <ostream>
#include <string_view>

#include "json.hpp"
#include "photonet/cli.hpp"

namespace photonet::cli {

using Json = nlohmann::ordered_json;

RunConfig parse_config_json(const Json& doc);

/// with_io = false drops output, format, checkpoint and resume: the part of
/// the config that decides the numbers, used to match checkpoints.
Json config_json(const RunConfig& config, bool with_io);

/// One-line machine-readable error: {"error": kind, "message": ...}.
void print_error(std::ostream& err, std::string_view kind, std::string_view message);

}  // namespace photonet::cli
