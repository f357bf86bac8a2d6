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

// JSON documents for distributions, LP certificates and fit results. Doubles
// are written in shortest round-trip form, so parsing returns the exact
// values that were written.

#pragma once

#include <string>
#include <string_view>

#include "photonet/certifier.hpp"
#include "photonet/distribution.hpp"
#include "photonet/fitter.hpp"

namespace photonet {

std::string_view library_version();

/// Decimal with 17 significant digits, for row tables.
std::string format_number(double value);

std::string distribution_to_json(const OutcomeDistribution& dist);

/// Throws std::invalid_argument on malformed documents.
OutcomeDistribution distribution_from_json(std::string_view text);

/// Problem data, verdict and certificate vector, enough to re-verify the
/// verdict without this library.
std::string certificate_to_json(const FeasibilityProblem& problem, const CertificateResult& result,
                                double transmissivity);

std::string fit_result_to_json(const FitResult& result, bool include_weights);

}  // namespace photonet
