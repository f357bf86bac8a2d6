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

// Physical ingredients of the photonic network: sources, detectors, party
// measurements, lossy channels, and heralded-source figures of merit.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "photonet/fock.hpp"

namespace photonet {

inline constexpr int kDefaultCutoff = 2;

/// How noise channels and detectors are modelled.
///  - exact: trace-preserving pure loss, binomial no-click probability (1-nu)^n.
///  - paper_first_order: single-photon-loss Kraus terms and detector effects
///    kept to first order in (1-T) and (1-nu).
enum class ChannelFidelity { exact, paper_first_order };

enum class PovmVariant { passive, projective, number_resolved };

std::string_view to_string(ChannelFidelity fidelity);
std::string_view to_string(PovmVariant variant);
ChannelFidelity parse_channel_fidelity(std::string_view text);
PovmVariant parse_povm_variant(std::string_view text);

struct NoiseParams {
  double impurity = 0.0;                ///< weight of the two-photon term of each source
  double channel_transmissivity = 1.0;  ///< per-mode transmission before detection
  double detector_efficiency = 1.0;
  double werner_visibility = 1.0;
  ChannelFidelity fidelity = ChannelFidelity::exact;

  static NoiseParams ideal() { return {}; }
  bool is_ideal() const;
  /// Throws std::invalid_argument when a field leaves [0, 1].
  void validate() const;

  bool operator==(const NoiseParams&) const = default;
};

/// Outcome labels, one character each:
///   passive/projective: '0' no click, 'L' first detector, 'R' second, '2' both
///   number_resolved:    '0', 'R' (R1), 'S' (R2), 'L', 'K' (L2), '2'
struct Povm {
  PovmVariant variant;
  std::vector<char> labels;
  std::vector<LinearOperator> effects;

  const LinearOperator& effect(char label) const;
  LinearOperator sum() const;
};

struct HeraldingSpec {
  double squeezing = 0.01;        ///< two-mode squeezing amplitude q, 0 < q < 1
  double pixel_efficiency = 0.7;  ///< per-pixel detection efficiency
  int pixel_count = 8;
  double pulse_rate_hz = 10e6;

  void validate() const;
};

/// Two-mode source state
///   r * [(1-Q)|psi+><psi+| + Q|phi><phi|] + (1-r) * P/4,
/// where |psi+> = (|01>+|10>)/sqrt(2), |phi> is |2,0> sent through the
/// balanced beamsplitter, and P projects onto span{|00>,|01>,|10>,|11>}.
DensityOperator source_state(double impurity, double werner_visibility, int cutoff = kDefaultCutoff);

/// Single-mode detector effect (diagonal). `fired == false` is the no-click
/// effect.
LinearOperator detector_effect(double efficiency, bool fired, int cutoff = kDefaultCutoff,
                               ChannelFidelity fidelity = ChannelFidelity::exact);

/// Measurement of one party on its (first, second) mode pair.
///
/// passive: B^+(D^x (x) D^y)B for (x,y) in {off off, on off, off on, on on},
///   labels (0, L, R, 2), detectors at `efficiency`.
/// projective: {|00><00|, |chi_l><chi_l|, |chi_r><chi_r|, rest}, where "rest"
///   is the projector onto two or more input photons (|11><11| on the
///   one-photon-per-mode subspace).
/// number_resolved: B^+ P B for output photon-number projectors P, labels
///   (0, R1, R2, L, L2, 2); R2/L2 collect two or more photons in one output.
///
/// projective and number_resolved require efficiency == 1.
Povm party_povm(double transmissivity, double phase, PovmVariant variant, double efficiency = 1.0,
                ChannelFidelity fidelity = ChannelFidelity::exact, int cutoff = kDefaultCutoff);

/// Kraus operators of one lossy mode with transmissivity T.
/// exact: <m-n|K_n|m> = sqrt(C(m,n)) T^{(m-n)/2} (1-T)^{n/2}.
/// paper_first_order: K_n = sqrt(1-T) sqrt(n) |n-1><n| for n >= 1, plus
///   K_0 = 1 - (1-T) N / 2, complete to first order in (1-T).
std::vector<LinearOperator> loss_kraus(double transmissivity, int cutoff = kDefaultCutoff,
                                       ChannelFidelity fidelity = ChannelFidelity::exact);

/// Ratio of double-photon to single-photon heralding probability.
double heralding_impurity(const HeraldingSpec& spec, bool number_resolving);

/// Rate at which all three sources herald simultaneously, q^3 eta^3 * pulse rate.
double repetition_rate(const HeraldingSpec& spec);

}  // namespace photonet
