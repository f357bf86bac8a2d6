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

#include "photonet/ring.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace photonet {

namespace {

constexpr int kLocal = kDefaultCutoff + 1;
constexpr int kPair = kLocal * kLocal;

// M[(l,l'),(r,r')] = E[(l',r'),(l,r)]
CMatrix effect_transfer(const CMatrix& effect) {
  CMatrix m(kPair, kPair);
  for (int l = 0; l < kLocal; ++l) {
    for (int lp = 0; lp < kLocal; ++lp) {
      for (int r = 0; r < kLocal; ++r) {
        for (int rp = 0; rp < kLocal; ++rp) {
          m(l * kLocal + lp, r * kLocal + rp) = effect(lp * kLocal + rp, l * kLocal + r);
        }
      }
    }
  }
  return m;
}

// S[(r,r'),(l,l')] = rho[(r,l),(r',l')]
CMatrix source_transfer(const CMatrix& rho) {
  CMatrix s(kPair, kPair);
  for (int r = 0; r < kLocal; ++r) {
    for (int rp = 0; rp < kLocal; ++rp) {
      for (int l = 0; l < kLocal; ++l) {
        for (int lp = 0; lp < kLocal; ++lp) {
          s(r * kLocal + rp, l * kLocal + lp) = rho(r * kLocal + l, rp * kLocal + lp);
        }
      }
    }
  }
  return s;
}

double clip_probability(double p) {
  if (p < -tolerance::probability_clip) throw std::domain_error("negative ring probability: " + std::to_string(p));
  if (p < 0.0) return 0.0;
  if (p > 1.0 && p <= 1.0 + tolerance::probability_clip) return 1.0;
  return p;
}

}  // namespace

RingContraction::RingContraction(int party_count, double transmissivity, std::span<const double> phases,
                                 PovmVariant variant, const NoiseParams& noise)
    : party_count_(party_count),
      transmissivity_(transmissivity),
      phases_(phases.begin(), phases.end()),
      variant_(variant),
      noise_(noise),
      alphabet_(alphabet_for(variant)),
      normalization_(Normalization::normalized) {
  if (party_count_ < 3) throw std::invalid_argument("a ring needs at least three parties");
  if (phases_.size() != static_cast<std::size_t>(party_count_)) {
    throw std::invalid_argument("ring needs one phase per party");
  }
  noise_.validate();
  if (variant_ != PovmVariant::passive && !noise_.is_ideal()) {
    throw std::invalid_argument("noise is only modelled for the passive measurement");
  }
  const DensityOperator link = link_state(noise_);
  normalization_ = link.normalization();
  const CMatrix source = source_transfer(link.matrix());

  transfer_.resize(static_cast<std::size_t>(party_count_));
  for (int k = 0; k < party_count_; ++k) {
    const Povm povm = party_povm(transmissivity_, phases_[static_cast<std::size_t>(k)], variant_,
                                 noise_.detector_efficiency, noise_.fidelity);
    auto& slot = transfer_[static_cast<std::size_t>(k)];
    CMatrix wildcard = CMatrix::Zero(kPair, kPair);
    for (char label : alphabet_) {
      slot.push_back(effect_transfer(povm.effect(label).matrix()) * source);
      wildcard += slot.back();
    }
    slot.push_back(std::move(wildcard));
  }
}

double RingContraction::probability(std::string_view pattern) const {
  if (pattern.size() != static_cast<std::size_t>(party_count_)) {
    throw std::invalid_argument("pattern has wrong length: " + std::string(pattern));
  }
  CMatrix product = CMatrix::Identity(kPair, kPair);
  for (int k = 0; k < party_count_; ++k) {
    const char c = pattern[static_cast<std::size_t>(k)];
    std::size_t slot = alphabet_.size();
    if (c != '*') {
      auto it = std::find(alphabet_.begin(), alphabet_.end(), c);
      if (it == alphabet_.end()) throw std::invalid_argument("unknown outcome label in pattern: " + std::string(pattern));
      slot = static_cast<std::size_t>(it - alphabet_.begin());
    }
    product = product * transfer_[static_cast<std::size_t>(k)][slot];
  }
  return clip_probability(product.trace().real());
}

OutcomeDistribution ring_distribution(int party_count, double transmissivity, std::span<const double> phases,
                                      PovmVariant variant, const NoiseParams& noise, const RingLimits& limits) {
  const RingContraction ring(party_count, transmissivity, phases, variant, noise);
  const std::size_t a = ring.alphabet().size();
  std::size_t entries = 1;
  for (int k = 0; k < party_count; ++k) {
    if (entries > limits.max_table_entries / a) {
      throw std::length_error("ring outcome table exceeds the configured limit");
    }
    entries *= a;
  }

  std::vector<double> table(entries, 0.0);
  // prefix[k] holds the product of the first k transfer matrices along the
  // current branch; the last party varies fastest so table order falls out.
  std::vector<CMatrix> prefix(static_cast<std::size_t>(party_count) + 1);
  prefix[0] = CMatrix::Identity(kPair, kPair);
  std::vector<std::size_t> digit(static_cast<std::size_t>(party_count), 0);
  std::size_t index = 0;
  int depth = 0;
  while (depth >= 0) {
    const auto k = static_cast<std::size_t>(depth);
    if (digit[k] == a) {
      digit[k] = 0;
      --depth;
      if (depth >= 0) ++digit[static_cast<std::size_t>(depth)];
      continue;
    }
    prefix[k + 1].noalias() = prefix[k] * ring.transfer_[k][digit[k]];
    if (depth + 1 == party_count) {
      table[index++] = clip_probability(prefix[k + 1].trace().real());
      ++digit[k];
    } else {
      ++depth;
    }
  }

  DistributionMetadata meta{transmissivity, ring.phases(), variant, noise, "ring"};
  return OutcomeDistribution(ring.alphabet(), party_count, std::move(table), std::move(meta),
                             ring.normalization_);
}

}  // namespace photonet
