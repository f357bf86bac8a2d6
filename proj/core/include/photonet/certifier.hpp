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

// Linear feasibility programs whose infeasibility rules out a local model.
//
// Variables are q(i_1 ... i_N, s) >= 0 with i_k in {L, R} and s in {0, 1},
// ordered with the tuple in lexicographic order (L before R) and s fastest.
// Infeasible means certified nonlocal; feasible means only "not certified".

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "photonet/distribution.hpp"
#include "photonet/ring.hpp"

namespace photonet {

inline constexpr double kDefaultFeasibilityTolerance = 1e-9;

struct FeasibilityProblem {
  std::vector<std::string> variable_labels;  ///< e.g. "LRL|0"
  std::vector<std::string> row_labels;
  Eigen::MatrixXd equality_matrix;
  Eigen::VectorXd equality_rhs;
  /// Upper bound on sum(x) implied by the equalities; used to turn an
  /// approximate Farkas vector into a rigorous one.
  double variable_sum_bound = 1.0;

  int variable_count() const { return static_cast<int>(equality_matrix.cols()); }
  int row_count() const { return static_cast<int>(equality_matrix.rows()); }
};

struct CertificateResult {
  bool feasible = false;
  double violation = 0.0;
  double tolerance = kDefaultFeasibilityTolerance;
  std::optional<Eigen::VectorXd> witness;
  std::optional<Eigen::VectorXd> dual_certificate;
  /// Independent arithmetic check of whichever certificate is present.
  bool certificate_verified = false;
  int pivots = 0;
};

struct TriangleLpOptions {
  /// Re-adds the single-party marginal rows implied by the tuple rows.
  bool include_implied_marginals = false;
};

/// Closed-form right-hand sides.
FeasibilityProblem build_triangle_lp(double transmissivity, const TriangleLpOptions& options = {});

/// Same constraints with right-hand sides read from a three-party passive or
/// projective distribution (both give identical rows).
FeasibilityProblem build_triangle_lp(const OutcomeDistribution& dist, const TriangleLpOptions& options = {});

/// Ring program from an ideal ring distribution's table.
FeasibilityProblem build_ring_lp(int party_count, double transmissivity, const OutcomeDistribution& dist);

/// Ring program from transfer-matrix marginals, for N beyond full tables.
/// Throws std::length_error for N > max_parties.
FeasibilityProblem build_ring_lp(const RingContraction& ring, int max_parties = 16);

CertificateResult solve_feasibility(const FeasibilityProblem& problem,
                                    double tolerance = kDefaultFeasibilityTolerance);

/// x >= 0 and |A x - b|_inf <= 10 * tolerance.
bool verify_witness(const FeasibilityProblem& problem, const Eigen::VectorXd& x,
                    double tolerance = kDefaultFeasibilityTolerance);

/// Shows no x >= 0 with sum(x) <= variable_sum_bound solves A x = b: with
/// d = max(0, -min(A^T y)), requires b^T y + d * bound < -tolerance.
bool verify_dual(const FeasibilityProblem& problem, const Eigen::VectorXd& y,
                 double tolerance = kDefaultFeasibilityTolerance);

struct ScanPoint {
  double transmissivity;
  bool feasible;
  double violation;
};

struct BoundaryReport {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double precision = 0.0;
  std::vector<ScanPoint> evaluations;  ///< every evaluated point, ascending t
  /// Brackets [feasible-side, infeasible-side] (ordered by t), each no wider
  /// than `precision`.
  struct Bracket {
    double lo;
    double hi;
    bool lo_feasible;
    double estimate() const { return 0.5 * (lo + hi); }
  };
  std::vector<Bracket> boundaries;
  bool sign_change() const { return !boundaries.empty(); }
  std::vector<double> infeasible_points() const;
  std::vector<double> feasible_points() const;
};

using ProblemBuilder = std::function<FeasibilityProblem(double)>;

/// Evaluates `coarse_points` evenly spaced t (endpoints included), then
/// bisects every verdict change to `precision`. No verdict change is
/// reported through an empty `boundaries` list.
BoundaryReport scan_boundary(double t_lo, double t_hi, double precision, const ProblemBuilder& builder = {},
                             int coarse_points = 11, double tolerance = kDefaultFeasibilityTolerance);

}  // namespace photonet
