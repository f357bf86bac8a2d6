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

#include "photonet/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace photonet {

Phase1Result solve_phase1(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Phase1Options& options) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != m) throw std::invalid_argument("rhs length does not match row count");
  if (!a.allFinite() || !b.allFinite()) throw std::invalid_argument("non-finite LP data");

  // Rows are flipped so every rhs is non-negative; artificials then form a
  // feasible starting basis.
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b(i) < 0.0) sign(i) = -1.0;
  }

  const Eigen::Index cols = n + m + 1;
  const Eigen::Index rhs = n + m;
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m + 1, cols);
  for (Eigen::Index i = 0; i < m; ++i) {
    tab.row(i).head(n) = sign(i) * a.row(i);
    tab(i, n + i) = 1.0;
    tab(i, rhs) = sign(i) * b(i);
  }
  // Objective row: reduced costs of  min sum(artificials), and -w in the rhs.
  for (Eigen::Index i = 0; i < m; ++i) {
    tab.row(m).head(n) -= tab.row(i).head(n);
    tab(m, rhs) -= tab(i, rhs);
  }

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  const double eps = options.pivot_tolerance;
  Phase1Result result;
  while (true) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (tab(m, j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double coef = tab(i, enter);
      if (coef <= eps) continue;
      const double ratio = tab(i, rhs) / coef;
      const bool tie = leave >= 0 && std::abs(ratio - best) <= eps * std::max(1.0, std::abs(best));
      if ((!tie && ratio < best) ||
          (tie && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        best = std::min(best, ratio);
        leave = i;
      }
    }
    if (leave < 0) throw SolverError("phase-1 objective unbounded; pivot column has no positive entry");
    if (++result.pivots > options.max_pivots) throw SolverError("simplex pivot limit reached");

    tab.row(leave) /= tab(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double factor = tab(i, enter);
      if (factor != 0.0) tab.row(i) -= factor * tab.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  if (!tab.allFinite()) throw SolverError("simplex tableau became non-finite");

  result.violation = std::max(0.0, -tab(m, rhs));
  result.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index var = basis[static_cast<std::size_t>(i)];
    if (var < n) result.x(var) = std::max(0.0, tab(i, rhs));
  }

  // Simplex multipliers of the flipped system are 1 - (reduced cost of each
  // artificial); negating and undoing the flip gives the Farkas direction.
  result.farkas = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) result.farkas(i) = -sign(i) * (1.0 - tab(m, n + i));
  const double scale = result.farkas.cwiseAbs().maxCoeff();
  if (scale > 0.0) result.farkas /= scale;
  return result;
}

}  // namespace photonet
