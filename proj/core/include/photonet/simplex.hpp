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

// Phase-1 simplex for  { x >= 0 : A x = b }.
//
// Dense tableau, Bland's rule for entering and leaving variables (ties by
// index), so the pivot sequence and the returned vectors are deterministic.

#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace photonet {

/// Raised when the pivot loop cannot make progress (iteration limit or a
/// numerically singular pivot). Distinct from an infeasible verdict.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

struct Phase1Options {
  double pivot_tolerance = 1e-12;
  int max_pivots = 100000;
};

struct Phase1Result {
  /// Optimal sum of artificial variables (total constraint violation).
  double violation = 0.0;
  /// Primal point read off the final basis; exact when violation is zero.
  Eigen::VectorXd x;
  /// Farkas direction y, scaled to max |y_i| = 1: A^T y >= 0 and b^T y < 0
  /// whenever violation > 0. Undefined (zeros) otherwise.
  Eigen::VectorXd farkas;
  int pivots = 0;
};

Phase1Result solve_phase1(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Phase1Options& options = {});

}  // namespace photonet
