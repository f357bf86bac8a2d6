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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "photonet/certifier.hpp"
#include "photonet/distribution.hpp"
#include "photonet/ring.hpp"
#include "photonet/simplex.hpp"

namespace photonet {
namespace {

double rhs_of(const FeasibilityProblem& p, const std::string& label) {
  const auto it = std::find(p.row_labels.begin(), p.row_labels.end(), label);
  if (it == p.row_labels.end()) throw std::out_of_range("no row " + label);
  return p.equality_rhs(it - p.row_labels.begin());
}

// Verdict boundaries sit near 0.215 and 0.785; keep away from them.
bool near_boundary(double t) { return std::abs(t - 0.215) < 0.01 || std::abs(t - 0.785) < 0.01; }

// Plain recomputation, not calling verify_witness / verify_dual.
void expect_certificate_holds(const FeasibilityProblem& p, const CertificateResult& r) {
  if (r.feasible) {
    ASSERT_TRUE(r.witness.has_value());
    const Eigen::VectorXd& x = *r.witness;
    EXPECT_GE(x.minCoeff(), 0.0);
    EXPECT_LE((p.equality_matrix * x - p.equality_rhs).cwiseAbs().maxCoeff(), 10.0 * r.tolerance);
  } else {
    ASSERT_TRUE(r.dual_certificate.has_value());
    const Eigen::VectorXd& y = *r.dual_certificate;
    // Any x >= 0 with sum(x) <= bound has y.Ax >= min(0, min_j (A^T y)_j) * bound.
    const double floor = std::min(0.0, (p.equality_matrix.transpose() * y).minCoeff()) * p.variable_sum_bound;
    EXPECT_LT(p.equality_rhs.dot(y), floor - r.tolerance);
  }
  EXPECT_TRUE(r.certificate_verified);
}

TEST(TriangleLp, Shape) {
  const FeasibilityProblem p = build_triangle_lp(0.3);
  EXPECT_EQ(p.variable_count(), 16);
  EXPECT_EQ(p.row_count(), 8 + 6 + 1);
  EXPECT_EQ(p.variable_labels.front(), "LLL|0");
  EXPECT_EQ(p.variable_labels.back(), "RRR|1");
  TriangleLpOptions with_marginals;
  with_marginals.include_implied_marginals = true;
  EXPECT_EQ(build_triangle_lp(0.3, with_marginals).row_count(), 8 + 6 + 6 + 1);
  EXPECT_THROW(build_triangle_lp(1.1), std::invalid_argument);
}

TEST(TriangleLp, BalancedRightHandSides) {
  const FeasibilityProblem p = build_triangle_lp(0.5);
  for (const char* key : {"RRL", "RLR", "LRR"}) EXPECT_NEAR(rhs_of(p, std::string("tuple ") + key), 0.25, 1e-15);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(rhs_of(p, "difference party " + std::to_string(k) + " L"), 0.0);
    EXPECT_EQ(rhs_of(p, "difference party " + std::to_string(k) + " R"), 0.0);
  }
}

TEST(TriangleLp, FullTransmissionRightHandSides) {
  const FeasibilityProblem p = build_triangle_lp(1.0);
  EXPECT_NEAR(rhs_of(p, "tuple LLL"), 0.5, 1e-15);
  EXPECT_NEAR(rhs_of(p, "tuple RRR"), 0.5, 1e-15);
  for (const char* key : {"LLR", "LRL", "RLL", "RRL", "RLR", "LRR"}) {
    EXPECT_NEAR(rhs_of(p, std::string("tuple ") + key), 0.0, 1e-15);
  }
  EXPECT_EQ(rhs_of(p, "difference party 1 L"), -0.5);
  EXPECT_EQ(rhs_of(p, "difference party 1 R"), 0.5);
}

TEST(TriangleLp, TupleRowsAreFourTimesClosedForm) {
  for (double t : {0.05, 0.3, 0.6, 0.95}) {
    const FeasibilityProblem p = build_triangle_lp(t);
    const OutcomeDistribution d = closed_form_ideal(t, 0.0);
    for (const char* key : {"LLL", "LLR", "LRL", "RLL", "LRR", "RLR", "RRL", "RRR"}) {
      EXPECT_NEAR(rhs_of(p, std::string("tuple ") + key), 4.0 * d[key], 1e-14) << key;
    }
  }
}

TEST(TriangleLp, DistributionAndClosedFormProgramsCoincide) {
  for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const FeasibilityProblem closed = build_triangle_lp(t);
    for (PovmVariant v : {PovmVariant::passive, PovmVariant::projective}) {
      const FeasibilityProblem from = build_triangle_lp(triangle_distribution(t, {0.0, 0.0, 0.0}, v));
      EXPECT_EQ(from.row_labels, closed.row_labels);
      EXPECT_EQ(from.equality_matrix, closed.equality_matrix);
      EXPECT_LT((from.equality_rhs - closed.equality_rhs).cwiseAbs().maxCoeff(), 1e-12) << "t=" << t;
      EXPECT_EQ(solve_feasibility(from).feasible, solve_feasibility(closed).feasible);
    }
  }
}

TEST(Solve, ReferenceVerdicts) {
  for (double t : {0.1, 0.9}) {
    const FeasibilityProblem p = build_triangle_lp(t);
    const CertificateResult r = solve_feasibility(p);
    EXPECT_FALSE(r.feasible) << "t=" << t;
    EXPECT_GT(r.violation, r.tolerance);
    expect_certificate_holds(p, r);
  }
  const FeasibilityProblem p = build_triangle_lp(0.5);
  const CertificateResult r = solve_feasibility(p);
  EXPECT_TRUE(r.feasible);
  EXPECT_LE(r.violation, r.tolerance);
  expect_certificate_holds(p, r);
}

TEST(Solve, EveryVerdictCarriesACheckedCertificate) {
  for (int i = 0; i <= 40; ++i) {
    const double t = i / 40.0;
    const FeasibilityProblem p = build_triangle_lp(t);
    expect_certificate_holds(p, solve_feasibility(p));
  }
}

TEST(Solve, MirrorSymmetricVerdicts) {
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    if (near_boundary(t)) continue;
    EXPECT_EQ(solve_feasibility(build_triangle_lp(t)).feasible, solve_feasibility(build_triangle_lp(1.0 - t)).feasible)
        << "t=" << t;
  }
}

TEST(Solve, ImpliedMarginalRowsDoNotChangeVerdicts) {
  TriangleLpOptions with_marginals;
  with_marginals.include_implied_marginals = true;
  for (int i = 0; i <= 50; ++i) {
    const double t = i / 50.0;
    EXPECT_EQ(solve_feasibility(build_triangle_lp(t)).feasible,
              solve_feasibility(build_triangle_lp(t, with_marginals)).feasible)
        << "t=" << t;
  }
}

TEST(Solve, Deterministic) {
  for (double t : {0.2, 0.5, 0.88}) {
    const CertificateResult a = solve_feasibility(build_triangle_lp(t));
    const CertificateResult b = solve_feasibility(build_triangle_lp(t));
    EXPECT_EQ(a.feasible, b.feasible);
    EXPECT_EQ(a.violation, b.violation);
    EXPECT_EQ(a.pivots, b.pivots);
    if (a.witness) EXPECT_EQ(*a.witness, *b.witness);
    if (a.dual_certificate) EXPECT_EQ(*a.dual_certificate, *b.dual_certificate);
  }
}

TEST(Solve, VerifiersRejectBogusCertificates) {
  const FeasibilityProblem p = build_triangle_lp(0.9);
  EXPECT_FALSE(verify_dual(p, Eigen::VectorXd::Zero(p.row_count())));
  EXPECT_FALSE(verify_witness(p, Eigen::VectorXd::Zero(p.variable_count())));
  EXPECT_FALSE(verify_witness(p, -Eigen::VectorXd::Ones(p.variable_count())));
}

TEST(Scan, UpperBoundary) {
  const BoundaryReport r = scan_boundary(0.7, 0.9, 0.005);
  ASSERT_EQ(r.boundaries.size(), 1U);
  EXPECT_LE(r.boundaries[0].hi - r.boundaries[0].lo, 0.005);
  EXPECT_TRUE(r.boundaries[0].lo_feasible);
  EXPECT_NEAR(r.boundaries[0].estimate(), 0.785, 0.005);
}

TEST(Scan, LowerBoundary) {
  const BoundaryReport r = scan_boundary(0.1, 0.3, 0.005);
  ASSERT_EQ(r.boundaries.size(), 1U);
  EXPECT_FALSE(r.boundaries[0].lo_feasible);
  EXPECT_NEAR(r.boundaries[0].estimate(), 0.215, 0.005);
}

TEST(Scan, MiddleIsFeasibleThroughout) {
  const BoundaryReport r = scan_boundary(0.4, 0.6, 0.005);
  EXPECT_FALSE(r.sign_change());
  EXPECT_TRUE(r.infeasible_points().empty());
  EXPECT_EQ(r.feasible_points().size(), r.evaluations.size());
  EXPECT_THROW(scan_boundary(0.6, 0.4, 0.005), std::invalid_argument);
}

TEST(RingLp, ThreePartiesAgreeWithTriangle) {
  for (double t : {0.3, 0.9}) {
    const std::vector<double> phases(3, 0.0);
    const FeasibilityProblem ring = build_ring_lp(3, t, ring_distribution(3, t, phases));
    EXPECT_EQ(ring.variable_count(), 16);
    EXPECT_EQ(solve_feasibility(ring).feasible, solve_feasibility(build_triangle_lp(t)).feasible);
  }
  EXPECT_TRUE(solve_feasibility(build_ring_lp(3, 0.3, ring_distribution(3, 0.3, std::vector<double>(3, 0.0)))).feasible);
  EXPECT_FALSE(solve_feasibility(build_ring_lp(3, 0.9, ring_distribution(3, 0.9, std::vector<double>(3, 0.0)))).feasible);
}

TEST(RingLp, FourPartiesAtFullTransmission) {
  const std::vector<double> phases(4, 0.0);
  const FeasibilityProblem p = build_ring_lp(4, 1.0, ring_distribution(4, 1.0, phases));
  EXPECT_EQ(p.variable_count(), 32);
  double tuples = 0.0;
  for (int r = 0; r < p.row_count(); ++r) {
    if (p.row_labels[static_cast<std::size_t>(r)].starts_with("tuple ")) tuples += p.equality_rhs(r);
  }
  EXPECT_NEAR(tuples, 0.125, 1e-12);
}

TEST(RingLp, BalancedDifferencesVanish) {
  for (int n : {4, 5}) {
    const std::vector<double> phases(static_cast<std::size_t>(n), 0.0);
    const FeasibilityProblem p = build_ring_lp(n, 0.5, ring_distribution(n, 0.5, phases));
    for (int r = 0; r < p.row_count(); ++r) {
      if (p.row_labels[static_cast<std::size_t>(r)].starts_with("difference ")) EXPECT_NEAR(p.equality_rhs(r), 0.0, 1e-14);
    }
  }
}

TEST(RingLp, ContractionAndTableBuildersAgree) {
  const std::vector<double> phases(5, 0.0);
  const FeasibilityProblem a = build_ring_lp(5, 0.8, ring_distribution(5, 0.8, phases));
  const FeasibilityProblem b = build_ring_lp(RingContraction(5, 0.8, phases));
  EXPECT_EQ(a.equality_matrix, b.equality_matrix);
  EXPECT_LT((a.equality_rhs - b.equality_rhs).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(build_ring_lp(RingContraction(5, 0.8, phases), 4), std::length_error);
  EXPECT_THROW(build_ring_lp(5, 0.7, ring_distribution(5, 0.8, phases)), std::invalid_argument);
}

TEST(Phase1, FeasibleSystem) {
  Eigen::MatrixXd a(2, 3);
  a << 1, 1, 0, 0, 1, 1;
  Eigen::VectorXd b(2);
  b << 1, 2;
  const Phase1Result r = solve_phase1(a, b);
  EXPECT_NEAR(r.violation, 0.0, 1e-14);
  EXPECT_GE(r.x.minCoeff(), 0.0);
  EXPECT_LT((a * r.x - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Phase1, InfeasibleSystemGivesFarkasDirection) {
  // x1 + x2 = 1 and x1 + x2 = 2 cannot both hold.
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, 1;
  Eigen::VectorXd b(2);
  b << 1, 2;
  const Phase1Result r = solve_phase1(a, b);
  EXPECT_NEAR(r.violation, 1.0, 1e-12);
  EXPECT_GE((a.transpose() * r.farkas).minCoeff(), -1e-12);
  EXPECT_LT(b.dot(r.farkas), 0.0);
  EXPECT_NEAR(r.farkas.cwiseAbs().maxCoeff(), 1.0, 1e-12);
}

TEST(Phase1, NegativeRightHandSideAndLimits) {
  Eigen::MatrixXd a(1, 2);
  a << 1, -1;
  Eigen::VectorXd b(1);
  b << -3;
  const Phase1Result r = solve_phase1(a, b);
  EXPECT_NEAR(r.violation, 0.0, 1e-14);
  EXPECT_NEAR((a * r.x - b).norm(), 0.0, 1e-12);
  Phase1Options no_pivots;
  no_pivots.max_pivots = 0;
  EXPECT_THROW(solve_phase1(a, b, no_pivots), SolverError);
  EXPECT_THROW(solve_phase1(a, Eigen::VectorXd::Zero(2)), std::invalid_argument);
}

}  // namespace
}  // namespace photonet
