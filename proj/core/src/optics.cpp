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

#include "photonet/optics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace photonet {

namespace {

void require_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

double binomial(int n, int k) {
  double out = 1.0;
  for (int j = 1; j <= k; ++j) out = out * (n - k + j) / j;
  return out;
}

CMatrix outer(const CVector& v) { return v * v.adjoint(); }

}  // namespace

std::string_view to_string(ChannelFidelity fidelity) {
  return fidelity == ChannelFidelity::exact ? "exact" : "paper_first_order";
}

std::string_view to_string(PovmVariant variant) {
  switch (variant) {
    case PovmVariant::passive: return "passive";
    case PovmVariant::projective: return "projective";
    case PovmVariant::number_resolved: return "number_resolved";
  }
  return "passive";
}

ChannelFidelity parse_channel_fidelity(std::string_view text) {
  if (text == "exact") return ChannelFidelity::exact;
  if (text == "paper_first_order" || text == "first_order") return ChannelFidelity::paper_first_order;
  throw std::invalid_argument("unknown channel fidelity: " + std::string(text));
}

PovmVariant parse_povm_variant(std::string_view text) {
  if (text == "passive") return PovmVariant::passive;
  if (text == "projective") return PovmVariant::projective;
  if (text == "number_resolved") return PovmVariant::number_resolved;
  throw std::invalid_argument("unknown POVM variant: " + std::string(text));
}

bool NoiseParams::is_ideal() const {
  return impurity == 0.0 && channel_transmissivity == 1.0 && detector_efficiency == 1.0 &&
         werner_visibility == 1.0;
}

void NoiseParams::validate() const {
  require_unit_interval(impurity, "impurity");
  require_unit_interval(channel_transmissivity, "channel transmissivity");
  require_unit_interval(detector_efficiency, "detector efficiency");
  require_unit_interval(werner_visibility, "Werner visibility");
}

const LinearOperator& Povm::effect(char label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw std::invalid_argument(std::string("unknown outcome label: ") + label);
  return effects[static_cast<std::size_t>(it - labels.begin())];
}

LinearOperator Povm::sum() const {
  LinearOperator total = effects.front();
  for (std::size_t k = 1; k < effects.size(); ++k) total = total + effects[k];
  return total;
}

void HeraldingSpec::validate() const {
  if (!(squeezing > 0.0 && squeezing < 1.0)) throw std::invalid_argument("squeezing must lie in (0, 1)");
  require_unit_interval(pixel_efficiency, "pixel efficiency");
  if (pixel_count < 1) throw std::invalid_argument("pixel count must be >= 1");
  if (!(pulse_rate_hz >= 0.0) || !std::isfinite(pulse_rate_hz)) {
    throw std::invalid_argument("pulse rate must be finite and non-negative");
  }
}

DensityOperator source_state(double impurity, double werner_visibility, int cutoff) {
  require_unit_interval(impurity, "impurity");
  require_unit_interval(werner_visibility, "Werner visibility");
  if (cutoff < 2) throw std::invalid_argument("source state needs cutoff >= 2");
  const ModeSystem system = ModeSystem::anonymous(2, cutoff);
  const auto dim = static_cast<Eigen::Index>(system.dimension());
  auto index = [&](int a, int b) {
    const std::array<int, 2> occ{a, b};
    return static_cast<Eigen::Index>(system.index_of(occ));
  };

  CVector psi = CVector::Zero(dim);
  psi(index(0, 1)) = M_SQRT1_2;
  psi(index(1, 0)) = M_SQRT1_2;

  CVector two_photons = CVector::Zero(dim);
  two_photons(index(2, 0)) = 1.0;
  const CVector phi = beamsplitter_unitary(0.5, 0.0, cutoff).matrix() * two_photons;

  CMatrix white = CMatrix::Zero(dim, dim);
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) white(index(a, b), index(a, b)) = 0.25;
  }

  CMatrix rho = (1.0 - impurity) * outer(psi) + impurity * outer(phi);
  rho = werner_visibility * rho + (1.0 - werner_visibility) * white;
  return DensityOperator::assume_valid(system, std::move(rho));
}

LinearOperator detector_effect(double efficiency, bool fired, int cutoff, ChannelFidelity fidelity) {
  require_unit_interval(efficiency, "detector efficiency");
  const ModeSystem system = ModeSystem::anonymous(1, cutoff);
  const int d = cutoff + 1;
  Eigen::VectorXd off = Eigen::VectorXd::Zero(d);
  const double miss = 1.0 - efficiency;
  if (fidelity == ChannelFidelity::exact) {
    for (int n = 0; n < d; ++n) off(n) = std::pow(miss, n);
  } else {
    off(0) = 1.0;
    off(1) = miss;
  }
  const Eigen::VectorXd diag = fired ? (Eigen::VectorXd::Ones(d) - off).eval() : off;
  return LinearOperator(system, diag.cast<Complex>().asDiagonal().toDenseMatrix());
}

namespace {

// Inputs with up to `cutoff` photons per mode can send 2 * cutoff photons
// into one output, so effects are built at the doubled cutoff (where the
// truncated beamsplitter is exact on every input) and restricted back.
LinearOperator restrict_to_inputs(const LinearOperator& wide, int cutoff) {
  const int wide_d = 2 * cutoff + 1;
  const int d = cutoff + 1;
  CMatrix m(d * d, d * d);
  for (int i = 0; i < d * d; ++i) {
    for (int j = 0; j < d * d; ++j) m(i, j) = wide.matrix()((i / d) * wide_d + i % d, (j / d) * wide_d + j % d);
  }
  return LinearOperator(ModeSystem(wide.system().labels(), cutoff), std::move(m));
}

Povm passive_povm(double transmissivity, double phase, double efficiency, ChannelFidelity fidelity,
                  int cutoff) {
  const int wide = 2 * cutoff;
  const LinearOperator bs = beamsplitter_unitary(transmissivity, phase, wide);
  const LinearOperator off = detector_effect(efficiency, false, wide, fidelity);
  const LinearOperator on = detector_effect(efficiency, true, wide, fidelity);
  Povm povm{PovmVariant::passive, {'0', 'L', 'R', '2'}, {}};
  const std::array<std::pair<const LinearOperator*, const LinearOperator*>, 4> pattern{
      {{&off, &off}, {&on, &off}, {&off, &on}, {&on, &on}}};
  for (const auto& [first, second] : pattern) {
    const LinearOperator detection =
        tensor_product(*first, second->relabeled({"m1"})).relabeled({"m0", "m1"});
    povm.effects.push_back(restrict_to_inputs(bs.adjoint() * detection * bs, cutoff));
  }
  return povm;
}

// Projector onto output occupations selected by `keep`, pulled back through
// the beamsplitter.
template <typename Predicate>
LinearOperator output_projector(const LinearOperator& bs, int cutoff, Predicate keep) {
  const int d = cutoff + 1;
  CMatrix p = CMatrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if (keep(a, b)) p(a * d + b, a * d + b) = 1.0;
    }
  }
  return bs.adjoint() * LinearOperator(bs.system(), std::move(p)) * bs;
}

Povm number_resolved_povm(double transmissivity, double phase, int cutoff) {
  const int wide = 2 * cutoff;
  const LinearOperator bs = beamsplitter_unitary(transmissivity, phase, wide);
  Povm povm{PovmVariant::number_resolved, {'0', 'R', 'S', 'L', 'K', '2'}, {}};
  auto add = [&](auto keep) { povm.effects.push_back(restrict_to_inputs(output_projector(bs, wide, keep), cutoff)); };
  add([](int a, int b) { return a == 0 && b == 0; });
  add([](int a, int b) { return a == 0 && b == 1; });
  add([](int a, int b) { return a == 0 && b >= 2; });
  add([](int a, int b) { return a == 1 && b == 0; });
  add([](int a, int b) { return a >= 2 && b == 0; });
  add([](int a, int b) { return a >= 1 && b >= 1; });
  return povm;
}

Povm projective_povm(double transmissivity, double phase, int cutoff) {
  const LinearOperator bs = beamsplitter_unitary(transmissivity, phase, cutoff);
  const ModeSystem& system = bs.system();
  Povm povm{PovmVariant::projective, {'0', 'L', 'R', '2'}, {}};
  povm.effects.push_back(output_projector(bs, cutoff, [](int a, int b) { return a == 0 && b == 0; }));
  povm.effects.push_back(output_projector(bs, cutoff, [](int a, int b) { return a == 1 && b == 0; }));
  povm.effects.push_back(output_projector(bs, cutoff, [](int a, int b) { return a == 0 && b == 1; }));
  // Everything with two or more input photons; B commutes with photon number.
  const int d = cutoff + 1;
  CMatrix rest = CMatrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if (a + b >= 2) rest(a * d + b, a * d + b) = 1.0;
    }
  }
  povm.effects.emplace_back(system, std::move(rest));
  return povm;
}

}  // namespace

Povm party_povm(double transmissivity, double phase, PovmVariant variant, double efficiency,
                ChannelFidelity fidelity, int cutoff) {
  require_unit_interval(transmissivity, "transmissivity");
  require_unit_interval(efficiency, "detector efficiency");
  switch (variant) {
    case PovmVariant::passive:
      return passive_povm(transmissivity, phase, efficiency, fidelity, cutoff);
    case PovmVariant::projective:
      if (efficiency != 1.0) throw std::invalid_argument("projective POVM is defined only for ideal detectors");
      return projective_povm(transmissivity, phase, cutoff);
    case PovmVariant::number_resolved:
      if (efficiency != 1.0) {
        throw std::invalid_argument("number-resolved POVM is defined only for ideal detectors");
      }
      return number_resolved_povm(transmissivity, phase, cutoff);
  }
  throw std::invalid_argument("unknown POVM variant");
}

std::vector<LinearOperator> loss_kraus(double transmissivity, int cutoff, ChannelFidelity fidelity) {
  require_unit_interval(transmissivity, "channel transmissivity");
  const ModeSystem system = ModeSystem::anonymous(1, cutoff);
  const int d = cutoff + 1;
  const double loss = 1.0 - transmissivity;
  std::vector<LinearOperator> kraus;
  if (transmissivity == 1.0) {
    kraus.push_back(LinearOperator::identity(system));
    return kraus;
  }
  if (fidelity == ChannelFidelity::exact) {
    for (int lost = 0; lost <= cutoff; ++lost) {
      CMatrix k = CMatrix::Zero(d, d);
      for (int m = lost; m <= cutoff; ++m) {
        k(m - lost, m) = std::sqrt(binomial(m, lost) * std::pow(transmissivity, m - lost) *
                                   std::pow(loss, lost));
      }
      if (k.cwiseAbs().maxCoeff() > 0.0) kraus.emplace_back(system, std::move(k));
    }
    return kraus;
  }
  CMatrix keep = CMatrix::Identity(d, d);
  for (int n = 1; n <= cutoff; ++n) keep(n, n) = 1.0 - 0.5 * loss * n;
  kraus.emplace_back(system, std::move(keep));
  for (int n = 1; n <= cutoff; ++n) {
    CMatrix k = CMatrix::Zero(d, d);
    k(n - 1, n) = std::sqrt(loss * n);
    kraus.emplace_back(system, std::move(k));
  }
  return kraus;
}

double heralding_impurity(const HeraldingSpec& spec, bool number_resolving) {
  spec.validate();
  const double q = spec.squeezing;
  const double eta = spec.pixel_efficiency;
  if (eta == 0.0) throw std::invalid_argument("pixel efficiency must be positive");
  if (!number_resolving) return q * (2.0 - eta);
  const double m = spec.pixel_count;
  const double same_pixel = (1.0 - (1.0 - eta) * (1.0 - eta)) / m;
  const double one_of_two_pixels = 2.0 * ((m - 1.0) / m) * eta * (1.0 - eta);
  return q * (same_pixel + one_of_two_pixels) / eta;
}

double repetition_rate(const HeraldingSpec& spec) {
  spec.validate();
  const double herald = spec.squeezing * spec.pixel_efficiency;
  return herald * herald * herald * spec.pulse_rate_hz;
}

}  // namespace photonet
