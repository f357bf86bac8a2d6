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

#include "photonet/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace photonet {

namespace {

constexpr double kHardNegative = -1e-8;
constexpr double kTotalTolerance = 1e-10;

std::size_t checked_power(std::size_t base, int exponent) {
  std::size_t out = 1;
  for (int k = 0; k < exponent; ++k) {
    if (out > (std::size_t{1} << 40) / std::max<std::size_t>(base, 1)) {
      throw std::length_error("outcome table too large");
    }
    out *= base;
  }
  return out;
}

LinearOperator two_mode_loss_kraus_product(const LinearOperator& a, const LinearOperator& b) {
  return tensor_product(a, b.relabeled({"m1"})).relabeled({"m0", "m1"});
}

std::size_t key_index(const std::vector<char>& alphabet, std::string_view key) {
  std::size_t index = 0;
  for (char c : key) {
    auto it = std::find(alphabet.begin(), alphabet.end(), c);
    if (it == alphabet.end()) throw std::invalid_argument("unknown outcome label in key: " + std::string(key));
    index = index * alphabet.size() + static_cast<std::size_t>(it - alphabet.begin());
  }
  return index;
}

// Tr_1[(E (x) 1) rho] for an operator E on the leading tensor factor.
CMatrix contract_leading(const CMatrix& rho, const CMatrix& effect) {
  const Eigen::Index d = effect.rows();
  const Eigen::Index rest = rho.rows() / d;
  CMatrix out = CMatrix::Zero(rest, rest);
  for (Eigen::Index x = 0; x < d; ++x) {
    for (Eigen::Index y = 0; y < d; ++y) {
      const Complex e = effect(y, x);
      if (e != Complex(0.0)) out += e * rho.block(x * rest, y * rest, rest, rest);
    }
  }
  return out;
}

}  // namespace

std::vector<char> passive_alphabet() { return {'0', 'L', 'R', '2'}; }
std::vector<char> number_resolved_alphabet() { return {'0', 'R', 'S', 'L', 'K', '2'}; }

std::vector<char> alphabet_for(PovmVariant variant) {
  return variant == PovmVariant::number_resolved ? number_resolved_alphabet() : passive_alphabet();
}

OutcomeDistribution::OutcomeDistribution(std::vector<char> alphabet, int party_count,
                                         std::vector<double> table, DistributionMetadata metadata,
                                         Normalization normalization)
    : alphabet_(std::move(alphabet)),
      party_count_(party_count),
      table_(std::move(table)),
      metadata_(std::move(metadata)),
      normalization_(normalization) {
  if (alphabet_.empty()) throw std::invalid_argument("empty outcome alphabet");
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    if (alphabet_[i] == '*') throw std::invalid_argument("'*' is reserved for wildcards");
    for (std::size_t j = 0; j < i; ++j) {
      if (alphabet_[i] == alphabet_[j]) throw std::invalid_argument("duplicate outcome label");
    }
  }
  if (party_count_ < 1) throw std::invalid_argument("party count must be positive");
  if (table_.size() != checked_power(alphabet_.size(), party_count_)) {
    throw std::invalid_argument("table size does not match alphabet^party_count");
  }
  for (double& p : table_) {
    if (!std::isfinite(p)) throw std::domain_error("non-finite probability");
    if (p < kHardNegative) throw std::domain_error("probability below -1e-8: " + std::to_string(p));
    if (p < 0.0) p = 0.0;
  }
  if (normalization_ == Normalization::normalized && std::abs(total() - 1.0) > kTotalTolerance) {
    throw std::domain_error("distribution total differs from 1: " + std::to_string(total()));
  }
}

double OutcomeDistribution::total() const { return std::accumulate(table_.begin(), table_.end(), 0.0); }

std::size_t OutcomeDistribution::index_of(std::string_view key) const {
  if (key.size() != static_cast<std::size_t>(party_count_)) {
    throw std::invalid_argument("outcome key has wrong length: " + std::string(key));
  }
  return key_index(alphabet_, key);
}

std::string OutcomeDistribution::key_of(std::size_t index) const {
  if (index >= table_.size()) throw std::out_of_range("outcome index out of range");
  std::string key(static_cast<std::size_t>(party_count_), '?');
  for (int k = party_count_ - 1; k >= 0; --k) {
    key[static_cast<std::size_t>(k)] = alphabet_[index % alphabet_.size()];
    index /= alphabet_.size();
  }
  return key;
}

double OutcomeDistribution::marginal(std::string_view pattern) const {
  if (pattern.size() != static_cast<std::size_t>(party_count_)) {
    throw std::invalid_argument("pattern has wrong length: " + std::string(pattern));
  }
  for (char c : pattern) {
    if (c != '*' && std::find(alphabet_.begin(), alphabet_.end(), c) == alphabet_.end()) {
      throw std::invalid_argument("unknown outcome label in pattern: " + std::string(pattern));
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < table_.size(); ++i) {
    const std::string key = key_of(i);
    bool match = true;
    for (std::size_t k = 0; k < key.size() && match; ++k) match = pattern[k] == '*' || pattern[k] == key[k];
    if (match) sum += table_[i];
  }
  return sum;
}

OutcomeDistribution OutcomeDistribution::relabeled(const std::map<char, char>& relabel) const {
  std::vector<double> table(table_.size(), 0.0);
  for (std::size_t i = 0; i < table_.size(); ++i) {
    std::string key = key_of(i);
    for (char& c : key) {
      auto it = relabel.find(c);
      if (it != relabel.end()) c = it->second;
    }
    table[index_of(key)] += table_[i];
  }
  return OutcomeDistribution(alphabet_, party_count_, std::move(table), metadata_, normalization_);
}

CoarseGrainMap::CoarseGrainMap(std::vector<char> source, std::vector<char> target,
                               std::map<char, char> mapping)
    : source_(std::move(source)), target_(std::move(target)), mapping_(std::move(mapping)) {
  for (char s : source_) {
    auto it = mapping_.find(s);
    if (it == mapping_.end()) throw std::invalid_argument(std::string("unmapped source label: ") + s);
    if (std::find(target_.begin(), target_.end(), it->second) == target_.end()) {
      throw std::invalid_argument(std::string("label maps outside the target alphabet: ") + s);
    }
  }
  if (mapping_.size() != source_.size()) throw std::invalid_argument("mapping has labels outside the source");
  for (char t : target_) {
    const bool hit = std::any_of(mapping_.begin(), mapping_.end(), [t](const auto& kv) { return kv.second == t; });
    if (!hit) throw std::invalid_argument(std::string("coarse-graining is not surjective onto: ") + t);
  }
}

CoarseGrainMap CoarseGrainMap::identity(std::vector<char> alphabet) {
  std::map<char, char> mapping;
  for (char c : alphabet) mapping[c] = c;
  return CoarseGrainMap(alphabet, alphabet, std::move(mapping));
}

CoarseGrainMap CoarseGrainMap::number_resolved_to_passive() {
  return CoarseGrainMap(number_resolved_alphabet(), passive_alphabet(),
                        {{'0', '0'}, {'R', 'R'}, {'S', 'R'}, {'L', 'L'}, {'K', 'L'}, {'2', '2'}});
}

CoarseGrainMap CoarseGrainMap::number_resolved_to_projective() {
  return CoarseGrainMap(number_resolved_alphabet(), passive_alphabet(),
                        {{'0', '0'}, {'R', 'R'}, {'S', '2'}, {'L', 'L'}, {'K', '2'}, {'2', '2'}});
}

char CoarseGrainMap::operator()(char label) const {
  auto it = mapping_.find(label);
  if (it == mapping_.end()) throw std::invalid_argument(std::string("label outside map source: ") + label);
  return it->second;
}

std::vector<std::string> triangle_mode_labels() { return {"A_1", "A_2", "B_1", "B_2", "C_1", "C_2"}; }

DensityOperator link_state(const NoiseParams& noise) {
  noise.validate();
  DensityOperator source = source_state(noise.impurity, noise.werner_visibility);
  if (noise.channel_transmissivity != 1.0) {
    const auto single = loss_kraus(noise.channel_transmissivity, kDefaultCutoff, noise.fidelity);
    std::vector<LinearOperator> both;
    for (const auto& a : single) {
      for (const auto& b : single) both.push_back(two_mode_loss_kraus_product(a, b));
    }
    source = apply_channel(source, both);
  }
  return source;
}

DensityOperator triangle_state(const NoiseParams& noise) {
  const DensityOperator source = link_state(noise);
  const DensityOperator alpha = source.relabeled({"A_2", "B_1"});
  const DensityOperator beta = source.relabeled({"B_2", "C_1"});
  const DensityOperator gamma = source.relabeled({"C_2", "A_1"});
  const DensityOperator joint = tensor_product(tensor_product(alpha, beta), gamma);
  const auto labels = triangle_mode_labels();
  return permute_modes(joint, labels);
}

OutcomeDistribution triangle_distribution(double transmissivity, std::array<double, 3> phases,
                                          PovmVariant variant, const NoiseParams& noise) {
  noise.validate();
  if (variant != PovmVariant::passive && !noise.is_ideal()) {
    throw std::invalid_argument("noise is only modelled for the passive measurement");
  }
  const DensityOperator rho = triangle_state(noise);
  std::array<Povm, 3> povms{
      party_povm(transmissivity, phases[0], variant, noise.detector_efficiency, noise.fidelity),
      party_povm(transmissivity, phases[1], variant, noise.detector_efficiency, noise.fidelity),
      party_povm(transmissivity, phases[2], variant, noise.detector_efficiency, noise.fidelity)};

  // Parties occupy consecutive mode pairs, so each measurement is contracted
  // against the leading factor of the remaining state.
  const std::vector<char> alphabet = povms[0].labels;
  const std::size_t a = alphabet.size();
  const ModeSystem party_c({"C_1", "C_2"}, kDefaultCutoff);
  std::vector<double> table(a * a * a, 0.0);
  for (std::size_t i = 0; i < a; ++i) {
    const CMatrix bc = contract_leading(rho.matrix(), povms[0].effects[i].matrix());
    for (std::size_t j = 0; j < a; ++j) {
      const DensityOperator c = DensityOperator::assume_valid(
          party_c, contract_leading(bc, povms[1].effects[j].matrix()), Normalization::unnormalized);
      for (std::size_t k = 0; k < a; ++k) {
        table[(i * a + j) * a + k] = born_probability(c, povms[2].effects[k].relabeled({"C_1", "C_2"}));
      }
    }
  }
  DistributionMetadata meta{transmissivity, {phases.begin(), phases.end()}, variant, noise, "triangle"};
  return OutcomeDistribution(alphabet, 3, std::move(table), std::move(meta), rho.normalization());
}

OutcomeDistribution closed_form_ideal(double t, double total_phase) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("transmissivity must lie in [0, 1]");
  const double s = t * (1.0 - t);
  const double r = std::sqrt(s);
  const double c = std::cos(total_phase);
  const double d2 = (2.0 * t - 1.0) * (2.0 * t - 1.0);
  const std::map<std::string, double> base{
      {"0LL", s / 4.0},
      {"0RR", s / 4.0},
      {"0RL", t * (1.0 - t) * (1.0 - t) / 2.0},
      {"0LR", t * t * (1.0 - t) / 2.0},
      {"02R", d2 * t / 8.0},
      {"02L", d2 * (1.0 - t) / 8.0},
      {"0R2", d2 * (1.0 - t) / 8.0},
      {"0L2", d2 * t / 8.0},
      {"RRL", s * (1.0 + 2.0 * c * r) / 8.0},
      {"LLR", s * (1.0 - 2.0 * c * r) / 8.0},
      {"LLL", (1.0 - 3.0 * s + 2.0 * s * r * c) / 8.0},
      {"RRR", (1.0 - 3.0 * s - 2.0 * s * r * c) / 8.0},
  };
  const std::vector<char> alphabet = passive_alphabet();
  std::vector<double> table(64, 0.0);
  DistributionMetadata meta{t, {total_phase, 0.0, 0.0}, PovmVariant::passive, NoiseParams::ideal(), "closed_form"};
  for (const auto& [key, value] : base) {
    for (int shift = 0; shift < 3; ++shift) {
      const std::string rotated = key.substr(shift) + key.substr(0, shift);
      table[key_index(alphabet, rotated)] = value;
    }
  }
  return OutcomeDistribution(alphabet, 3, std::move(table), std::move(meta));
}

OutcomeDistribution coarse_grain(const OutcomeDistribution& dist, const CoarseGrainMap& map) {
  if (dist.alphabet() != map.source()) throw std::invalid_argument("alphabet does not match coarse-graining source");
  const std::size_t out_size = checked_power(map.target().size(), dist.party_count());
  std::vector<double> table(out_size, 0.0);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    std::string key = dist.key_of(i);
    for (char& c : key) c = map(c);
    table[key_index(map.target(), key)] += dist.at(i);
  }
  DistributionMetadata meta = dist.metadata();
  meta.generator = "coarse_grain(" + meta.generator + ")";
  return OutcomeDistribution(map.target(), dist.party_count(), std::move(table), std::move(meta),
                             dist.normalization());
}

bool is_forbidden_triangle_pattern(std::string_view key) {
  if (key.size() != 3) return false;
  int zeros = 0, twos = 0, clicks = 0;
  for (char c : key) {
    if (c == '0') ++zeros;
    else if (c == '2') ++twos;
    else if (c == 'L' || c == 'R') ++clicks;
    else return false;
  }
  return (zeros == 3) || (zeros == 2 && clicks == 1) || (twos == 1 && clicks == 2) || (twos == 2 && clicks == 1);
}

std::vector<std::string> verify_support(const OutcomeDistribution& dist, double threshold) {
  if (dist.alphabet() != passive_alphabet() || dist.party_count() != 3) {
    throw std::invalid_argument("support check needs a three-party passive distribution");
  }
  std::vector<std::string> violations;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const std::string key = dist.key_of(i);
    if (is_forbidden_triangle_pattern(key) && dist.at(i) > threshold) violations.push_back(key);
  }
  return violations;
}

}  // namespace photonet
