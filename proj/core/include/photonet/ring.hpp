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

// N parties on a cycle. Party k measures (left, right) = (k_1, k_2); the
// source between parties k and k+1 occupies (k_2, (k+1)_1). For N = 3 this is
// the triangle with A, B, C = parties 0, 1, 2.
//
// Probabilities are computed as a trace of 9x9 transfer matrices, one per
// party, so the cost is linear in N instead of exponential.

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "photonet/distribution.hpp"

namespace photonet {

struct RingLimits {
  std::size_t max_table_entries = std::size_t{1} << 18;
};

class RingContraction {
 public:
  RingContraction(int party_count, double transmissivity, std::span<const double> phases,
                  PovmVariant variant = PovmVariant::passive,
                  const NoiseParams& noise = NoiseParams::ideal());

  int party_count() const { return party_count_; }
  double transmissivity() const { return transmissivity_; }
  const std::vector<double>& phases() const { return phases_; }
  PovmVariant variant() const { return variant_; }
  const NoiseParams& noise() const { return noise_; }
  const std::vector<char>& alphabet() const { return alphabet_; }

  /// Probability of `pattern` (one label per party, '*' sums over a party).
  double probability(std::string_view pattern) const;

 private:
  friend OutcomeDistribution ring_distribution(int, double, std::span<const double>, PovmVariant,
                                               const NoiseParams&, const RingLimits&);

  int party_count_;
  double transmissivity_;
  std::vector<double> phases_;
  PovmVariant variant_;
  NoiseParams noise_;
  std::vector<char> alphabet_;
  // transfer_[k][label] = M_k(label) * S_k; label index alphabet.size() is the
  // wildcard.
  std::vector<std::vector<CMatrix>> transfer_;
  Normalization normalization_;
};

/// Full outcome table of the ring. Throws std::length_error when the table
/// would exceed `limits.max_table_entries`.
OutcomeDistribution ring_distribution(int party_count, double transmissivity, std::span<const double> phases,
                                      PovmVariant variant = PovmVariant::passive,
                                      const NoiseParams& noise = NoiseParams::ideal(),
                                      const RingLimits& limits = {});

}  // namespace photonet
