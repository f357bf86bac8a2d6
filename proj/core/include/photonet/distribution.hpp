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

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "photonet/optics.hpp"

namespace photonet {

/// Outcome alphabets. Joint outcomes are keyed by strings such as "0LR",
/// one character per party.
std::vector<char> passive_alphabet();          // 0 L R 2
std::vector<char> number_resolved_alphabet();  // 0 R S L K 2  (S = R2, K = L2)
std::vector<char> alphabet_for(PovmVariant variant);

struct DistributionMetadata {
  double transmissivity = 0.0;
  std::vector<double> phases;
  PovmVariant variant = PovmVariant::passive;
  NoiseParams noise;
  std::string generator;  ///< free-form, e.g. "triangle" or "estimate"
};

/// Probability table over joint outcomes of N parties sharing one alphabet.
///
/// Entries are indexed with the last party varying fastest. Probabilities in
/// [-1e-8, 0) are clipped to zero; anything lower throws. The total must be
/// one within 1e-10 unless `normalization` is unnormalized.
class OutcomeDistribution {
 public:
  OutcomeDistribution(std::vector<char> alphabet, int party_count, std::vector<double> table,
                      DistributionMetadata metadata = {},
                      Normalization normalization = Normalization::normalized);

  const std::vector<char>& alphabet() const { return alphabet_; }
  int party_count() const { return party_count_; }
  std::size_t size() const { return table_.size(); }
  const std::vector<double>& table() const { return table_; }
  const DistributionMetadata& metadata() const { return metadata_; }
  Normalization normalization() const { return normalization_; }
  double total() const;

  std::size_t index_of(std::string_view key) const;
  std::string key_of(std::size_t index) const;

  double operator[](std::string_view key) const { return table_[index_of(key)]; }
  double at(std::size_t index) const { return table_.at(index); }

  /// Sum over all outcomes matching `pattern`, where '*' matches any label.
  double marginal(std::string_view pattern) const;

  /// Same table with each label replaced through `relabel` (a permutation of
  /// the alphabet).
  OutcomeDistribution relabeled(const std::map<char, char>& relabel) const;

 private:
  std::vector<char> alphabet_;
  int party_count_;
  std::vector<double> table_;
  DistributionMetadata metadata_;
  Normalization normalization_;
};

/// Surjective per-party label map applied identically at every party.
class CoarseGrainMap {
 public:
  CoarseGrainMap(std::vector<char> source, std::vector<char> target, std::map<char, char> mapping);

  static CoarseGrainMap identity(std::vector<char> alphabet);
  /// {R, S} -> R, {L, K} -> L, 0 -> 0, 2 -> 2.
  static CoarseGrainMap number_resolved_to_passive();
  /// {S, K, 2} -> 2, R -> R, L -> L, 0 -> 0.
  static CoarseGrainMap number_resolved_to_projective();

  const std::vector<char>& source() const { return source_; }
  const std::vector<char>& target() const { return target_; }
  char operator()(char label) const;

 private:
  std::vector<char> source_;
  std::vector<char> target_;
  std::map<char, char> mapping_;
};

/// Three sources on (A_2,B_1), (B_2,C_1), (C_2,A_1); party X measures
/// (X_1, X_2). Each source passes through per-mode loss before detection.
/// Noise is only defined for the passive variant.
OutcomeDistribution triangle_distribution(double transmissivity, std::array<double, 3> phases,
                                          PovmVariant variant = PovmVariant::passive,
                                          const NoiseParams& noise = NoiseParams::ideal());

/// The six triangle mode labels in system order: A_1 A_2 B_1 B_2 C_1 C_2.
std::vector<std::string> triangle_mode_labels();

/// State of one source after per-mode transmission loss, on modes
/// (m0, m1) = (right mode of one party, left mode of the next).
DensityOperator link_state(const NoiseParams& noise = NoiseParams::ideal());

/// The full six-mode state of the triangle (before measurement).
DensityOperator triangle_state(const NoiseParams& noise = NoiseParams::ideal());

/// Analytic ideal passive distribution; depends on the phases only through
/// their sum `total_phase`.
OutcomeDistribution closed_form_ideal(double transmissivity, double total_phase);

OutcomeDistribution coarse_grain(const OutcomeDistribution& dist, const CoarseGrainMap& map);

/// Outcomes of shape (000), (00x), (2xx), (22x) and permutations, x in {L,R},
/// whose probability exceeds `threshold`. These vanish for the ideal
/// experiment. Requires the passive alphabet.
std::vector<std::string> verify_support(const OutcomeDistribution& dist, double threshold = 1e-10);

/// Same predicate as verify_support, exposed for callers that enumerate keys.
bool is_forbidden_triangle_pattern(std::string_view key);

}  // namespace photonet
