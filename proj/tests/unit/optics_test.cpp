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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "photonet/fock.hpp"
#include "photonet/optics.hpp"

namespace photonet {
namespace {

Eigen::Index idx(const ModeSystem& s, int a, int b) {
  const std::vector<int> occ{a, b};
  return static_cast<Eigen::Index>(s.index_of(occ));
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

TEST(SourceState, IdealIsPsiPlus) {
  const DensityOperator rho = source_state(0.0, 1.0);
  const ModeSystem& s = rho.system();
  CVector psi = CVector::Zero(9);
  psi(idx(s, 0, 1)) = 1.0 / std::sqrt(2.0);
  psi(idx(s, 1, 0)) = 1.0 / std::sqrt(2.0);
  EXPECT_LT(max_abs(rho.matrix() - psi * psi.adjoint()), 1e-15);
}

TEST(SourceState, ImpurityWeight) {
  const DensityOperator rho = source_state(0.006875, 1.0);
  const ModeSystem& s = rho.system();
  CVector psi = CVector::Zero(9);
  psi(idx(s, 0, 1)) = 1.0 / std::sqrt(2.0);
  psi(idx(s, 1, 0)) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR((psi.adjoint() * rho.matrix() * psi)(0).real(), 0.993125, 1e-15);
}

TEST(SourceState, TwoPhotonTermIsBalancedSplitOfTwoZero) {
  // Pure two-photon component: amplitudes (1/2, -1/sqrt2, 1/2) on |20>,|11>,|02>.
  const CMatrix rho = source_state(1.0, 1.0).matrix();
  const ModeSystem s = ModeSystem::anonymous(2, 2);
  CVector phi = CVector::Zero(9);
  phi(idx(s, 2, 0)) = 0.5;
  phi(idx(s, 1, 1)) = -1.0 / std::sqrt(2.0);
  phi(idx(s, 0, 2)) = 0.5;
  EXPECT_LT(max_abs(rho - phi * phi.adjoint()), 1e-15);
}

TEST(SourceState, ValidOnParameterGrid) {
  for (double q : {0.0, 0.01, 0.5, 1.0}) {
    for (double r : {0.0, 0.3, 0.9, 1.0}) {
      const DensityOperator rho = source_state(q, r);
      EXPECT_NO_THROW(DensityOperator(rho.system(), rho.matrix())) << "Q=" << q << " r=" << r;
    }
  }
  EXPECT_THROW(source_state(1.5, 1.0), std::invalid_argument);
}

TEST(Detector, IdealEffects) {
  const CMatrix off = detector_effect(1.0, false).matrix();
  const CMatrix on = detector_effect(1.0, true).matrix();
  CMatrix vac = CMatrix::Zero(3, 3);
  vac(0, 0) = 1.0;
  EXPECT_LT(max_abs(off - vac), 1e-15);
  EXPECT_LT(max_abs(on - (CMatrix::Identity(3, 3) - vac)), 1e-15);
}

TEST(Detector, FirstOrderNoClickOnOnePhoton) {
  const CMatrix off = detector_effect(0.95, false, 2, ChannelFidelity::paper_first_order).matrix();
  EXPECT_NEAR(off(1, 1).real(), 0.05, 1e-15);
}

TEST(Detector, ExactClickOnTwoPhotons) {
  const CMatrix on = detector_effect(0.95, true, 2, ChannelFidelity::exact).matrix();
  EXPECT_NEAR(on(2, 2).real(), 1.0 - 0.05 * 0.05, 1e-15);
}

TEST(Povm, PassiveTwoPhotonEffectVanishesAtBalance) {
  // On the one-photon-per-mode subspace the only contribution is (2t-1)^2 |11><11|.
  const Povm povm = party_povm(0.5, 0.0, PovmVariant::passive);
  const ModeSystem& s = povm.effect('2').system();
  const CMatrix m = povm.effect('2').matrix();
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) {
      for (int c = 0; c <= 1; ++c) {
        for (int d = 0; d <= 1; ++d) EXPECT_LT(std::abs(m(idx(s, a, b), idx(s, c, d))), 1e-15);
      }
    }
  }
}

TEST(Povm, PassiveTwoPhotonEffectCoefficient) {
  for (double t : {0.0, 0.2, 0.9}) {
    const Povm povm = party_povm(t, 0.3, PovmVariant::passive);
    const ModeSystem& s = povm.effect('2').system();
    const double expected = (2.0 * t - 1.0) * (2.0 * t - 1.0);
    EXPECT_NEAR(povm.effect('2').matrix()(idx(s, 1, 1), idx(s, 1, 1)).real(), expected, 1e-14);
  }
}

TEST(Povm, ProjectiveEffectsAreRankOneProjectorsOnSinglePhotonSubspace) {
  for (double t : {0.0, 0.3, 0.5, 0.85, 1.0}) {
    const Povm povm = party_povm(t, 0.7, PovmVariant::projective);
    const ModeSystem& s = povm.effects.front().system();
    CMatrix p = CMatrix::Zero(9, 9);
    for (int a = 0; a <= 1; ++a) {
      for (int b = 0; b <= 1; ++b) p(idx(s, a, b), idx(s, a, b)) = 1.0;
    }
    CMatrix total = CMatrix::Zero(9, 9);
    for (const auto& e : povm.effects) {
      const CMatrix m = e.matrix();
      EXPECT_LT(max_abs(m * m - m), 1e-12) << "t=" << t;
      const CMatrix restricted = p * m * p;
      EXPECT_NEAR(restricted.trace().real(), 1.0, 1e-12);
      EXPECT_LT(max_abs(restricted * restricted - restricted), 1e-12);
      total += m;
    }
    EXPECT_LT(max_abs(total - CMatrix::Identity(9, 9)), 1e-12);
  }
}

TEST(Povm, NumberResolvedTwoPhotonSplitCoefficient) {
  const Povm povm = party_povm(0.3, 0.0, PovmVariant::number_resolved);
  const ModeSystem& s = povm.effect('S').system();
  EXPECT_NEAR(povm.effect('S').matrix()(idx(s, 1, 1), idx(s, 1, 1)).real(), 2.0 * 0.3 * 0.7, 1e-14);
}

TEST(Povm, CompleteAndPositiveOnGrid) {
  for (double t : {0.0, 0.15, 0.5, 0.785, 1.0}) {
    for (double phi : {0.0, 1.0, std::numbers::pi, 2.0 * std::numbers::pi}) {
      for (PovmVariant v : {PovmVariant::passive, PovmVariant::projective, PovmVariant::number_resolved}) {
        const std::vector<double> efficiencies =
            v == PovmVariant::passive ? std::vector<double>{0.0, 0.9, 1.0} : std::vector<double>{1.0};
        for (double nu : efficiencies) {
          const Povm povm = party_povm(t, phi, v, nu);
          EXPECT_LT(max_abs(povm.sum().matrix() - CMatrix::Identity(9, 9)), 1e-12);
          for (const auto& e : povm.effects) EXPECT_TRUE(e.is_positive(1e-10));
        }
      }
    }
  }
}

TEST(Povm, FirstOrderDetectorsStayComplete) {
  const Povm povm = party_povm(0.4, 0.2, PovmVariant::passive, 0.95, ChannelFidelity::paper_first_order);
  EXPECT_LT(max_abs(povm.sum().matrix() - CMatrix::Identity(9, 9)), 1e-12);
}

TEST(Povm, CoarseGrainingIdentities) {
  for (double t : {0.0, 0.1, 0.3, 0.5, 0.65, 0.85, 1.0}) {
    const double phi = 0.4;
    const Povm p = party_povm(t, phi, PovmVariant::passive);
    const Povm pp = party_povm(t, phi, PovmVariant::projective);
    const Povm pn = party_povm(t, phi, PovmVariant::number_resolved);
    auto m = [](const Povm& povm, char label) { return povm.effect(label).matrix(); };
    EXPECT_LT(max_abs(m(p, 'R') - (m(pn, 'R') + m(pn, 'S'))), 1e-12);
    EXPECT_LT(max_abs(m(p, 'L') - (m(pn, 'L') + m(pn, 'K'))), 1e-12);
    EXPECT_LT(max_abs(m(p, '2') - m(pn, '2')), 1e-12);
    EXPECT_LT(max_abs(m(p, '0') - m(pn, '0')), 1e-12);
    EXPECT_LT(max_abs(m(pp, '2') - (m(pn, 'S') + m(pn, 'K') + m(pn, '2'))), 1e-12);
    EXPECT_LT(max_abs(m(pp, 'R') - m(pn, 'R')), 1e-12);
    EXPECT_LT(max_abs(m(pp, 'L') - m(pn, 'L')), 1e-12);
    EXPECT_LT(max_abs(m(pp, '0') - m(pn, '0')), 1e-12);
  }
}

TEST(Povm, NonIdealDetectorsRejectedOutsidePassive) {
  EXPECT_THROW(party_povm(0.5, 0.0, PovmVariant::projective, 0.9), std::invalid_argument);
  EXPECT_THROW(party_povm(0.5, 0.0, PovmVariant::number_resolved, 0.9), std::invalid_argument);
  EXPECT_THROW(party_povm(1.2, 0.0, PovmVariant::passive), std::invalid_argument);
}

TEST(Povm, LabelsFollowAlphabets) {
  EXPECT_EQ(party_povm(0.5, 0.0, PovmVariant::passive).labels, (std::vector<char>{'0', 'L', 'R', '2'}));
  EXPECT_EQ(party_povm(0.5, 0.0, PovmVariant::projective).labels, (std::vector<char>{'0', 'L', 'R', '2'}));
  EXPECT_EQ(party_povm(0.5, 0.0, PovmVariant::number_resolved).labels,
            (std::vector<char>{'0', 'R', 'S', 'L', 'K', '2'}));
  EXPECT_THROW(party_povm(0.5, 0.0, PovmVariant::passive).effect('S'), std::invalid_argument);
}

TEST(Loss, FullTransmissionIsSingleIdentity) {
  for (ChannelFidelity f : {ChannelFidelity::exact, ChannelFidelity::paper_first_order}) {
    const auto kraus = loss_kraus(1.0, 2, f);
    ASSERT_EQ(kraus.size(), 1U);
    EXPECT_LT(max_abs(kraus[0].matrix() - CMatrix::Identity(3, 3)), 1e-15);
  }
}

TEST(Loss, ExactSinglePhoton) {
  const double T = 0.8;
  const ModeSystem one = ModeSystem::anonymous(1, 2);
  const std::vector<int> n1{1};
  const DensityOperator rho = DensityOperator::from_pure(PureState::fock(one, n1));
  const CMatrix out = apply_channel(rho, loss_kraus(T)).matrix();
  CMatrix expected = CMatrix::Zero(3, 3);
  expected(1, 1) = T;
  expected(0, 0) = 1.0 - T;
  EXPECT_LT(max_abs(out - expected), 1e-15);
}

TEST(Loss, ExactIsTracePreservingFirstOrderDeviatesQuadratically) {
  for (double T : {0.0, 0.5, 0.9, 0.99, 0.999}) {
    EXPECT_TRUE(is_complete_kraus_set(loss_kraus(T)));
    const auto first = loss_kraus(T, 2, ChannelFidelity::paper_first_order);
    CMatrix sum = CMatrix::Zero(3, 3);
    for (const auto& k : first) sum += k.matrix().adjoint() * k.matrix();
    const double deviation = max_abs(sum - CMatrix::Identity(3, 3));
    const double loss = 1.0 - T;
    EXPECT_LE(deviation, 1.0 * loss * loss + 1e-15) << "T=" << T;
  }
}

TEST(Heralding, NumberResolvingImpurity) {
  HeraldingSpec spec;  // q = 0.01, eta = 0.7, M = 8
  EXPECT_DOUBLE_EQ(heralding_impurity(spec, true), 0.006875);
  EXPECT_DOUBLE_EQ(heralding_impurity(spec, false), 0.013);
}

TEST(Heralding, PerfectSinglePixelGivesSqueezing) {
  HeraldingSpec spec;
  spec.squeezing = 0.037;
  spec.pixel_efficiency = 1.0;
  spec.pixel_count = 1;
  EXPECT_DOUBLE_EQ(heralding_impurity(spec, true), 0.037);
}

TEST(Heralding, RepetitionRate) {
  HeraldingSpec spec;
  EXPECT_NEAR(repetition_rate(spec), 3.43, 1e-9);
  spec.pulse_rate_hz = 1e9;
  EXPECT_NEAR(repetition_rate(spec), 343.0, 1e-7);
  spec.squeezing = 0.5;
  spec.pixel_efficiency = 1.0;
  spec.pulse_rate_hz = 8e6;
  EXPECT_DOUBLE_EQ(repetition_rate(spec), 1e6);
}

TEST(Heralding, ValidatesSpec) {
  HeraldingSpec spec;
  spec.pixel_count = 0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = {};
  spec.squeezing = 1.5;
  EXPECT_THROW(heralding_impurity(spec, true), std::invalid_argument);
}

TEST(Noise, ValidationAndParsing) {
  NoiseParams n;
  EXPECT_TRUE(n.is_ideal());
  n.detector_efficiency = 1.2;
  EXPECT_THROW(n.validate(), std::invalid_argument);
  EXPECT_EQ(parse_povm_variant(to_string(PovmVariant::number_resolved)), PovmVariant::number_resolved);
  EXPECT_EQ(parse_channel_fidelity(to_string(ChannelFidelity::paper_first_order)), ChannelFidelity::paper_first_order);
  EXPECT_THROW(parse_povm_variant("mystery"), std::invalid_argument);
}

}  // namespace
}  // namespace photonet
