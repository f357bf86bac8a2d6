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

#include "photonet/certifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "photonet/parallel.hpp"
#include "photonet/simplex.hpp"

namespace photonet {

namespace {

constexpr std::array<char, 2> kChi{'L', 'R'};

std::string tuple_of(std::size_t index, int parties) {
  std::string key(static_cast<std::size_t>(parties), 'L');
  for (int k = parties - 1; k >= 0; --k) {
    key[static_cast<std::size_t>(k)] = kChi[index & 1U];
    index >>= 1U;
  }
  return key;
}

// Shared skeleton of the triangle and ring programs. Row blocks:
//   tuple rows       sum_s q(x, s)                   = tuple_rhs(x)
//   [marginal rows]  sum_{x: x_k = i} sum_s q(x, s)  = sum of the tuple rhs
//   difference rows  sum_{x: x_k = i} q(x,0) - q(x,1) = diff_rhs(k, i)
//   [normalization]  sum q = 1
class ProgramBuilder {
 public:
  explicit ProgramBuilder(int parties) : parties_(parties), tuples_(std::size_t{1} << parties) {
    for (std::size_t x = 0; x < tuples_; ++x) {
      const std::string key = tuple_of(x, parties);
      labels_.push_back(key + "|0");
      labels_.push_back(key + "|1");
    }
  }

  void tuple_rows(const std::function<double(const std::string&)>& rhs) {
    for (std::size_t x = 0; x < tuples_; ++x) {
      const std::string key = tuple_of(x, parties_);
      Eigen::VectorXd row = Eigen::VectorXd::Zero(columns());
      row(static_cast<Eigen::Index>(2 * x)) = 1.0;
      row(static_cast<Eigen::Index>(2 * x + 1)) = 1.0;
      tuple_rhs_.push_back(rhs(key));
      add("tuple " + key, row, tuple_rhs_.back());
    }
  }

  void marginal_rows() {
    for (int k = 0; k < parties_; ++k) {
      for (char i : kChi) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(columns());
        double value = 0.0;
        for (std::size_t x = 0; x < tuples_; ++x) {
          if (tuple_of(x, parties_)[static_cast<std::size_t>(k)] != i) continue;
          row(static_cast<Eigen::Index>(2 * x)) = 1.0;
          row(static_cast<Eigen::Index>(2 * x + 1)) = 1.0;
          value += tuple_rhs_[x];
        }
        add(std::string("marginal party ") + std::to_string(k) + " " + i, row, value);
      }
    }
  }

  void difference_rows(const std::function<double(int, char)>& rhs) {
    for (int k = 0; k < parties_; ++k) {
      for (char i : kChi) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(columns());
        for (std::size_t x = 0; x < tuples_; ++x) {
          if (tuple_of(x, parties_)[static_cast<std::size_t>(k)] != i) continue;
          row(static_cast<Eigen::Index>(2 * x)) = 1.0;
          row(static_cast<Eigen::Index>(2 * x + 1)) = -1.0;
        }
        add(std::string("difference party ") + std::to_string(k) + " " + i, row, rhs(k, i));
      }
    }
  }

  void normalization_row() { add("normalization", Eigen::VectorXd::Ones(columns()), 1.0); }

  FeasibilityProblem finish(double sum_bound) const {
    FeasibilityProblem problem;
    problem.variable_labels = labels_;
    problem.row_labels = row_labels_;
    problem.equality_matrix.resize(static_cast<Eigen::Index>(rows_.size()), columns());
    problem.equality_rhs.resize(static_cast<Eigen::Index>(rows_.size()));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      problem.equality_matrix.row(static_cast<Eigen::Index>(r)) = rows_[r].transpose();
      problem.equality_rhs(static_cast<Eigen::Index>(r)) = rhs_[r];
    }
    problem.variable_sum_bound = sum_bound;
    return problem;
  }

  double tuple_total() const {
    double s = 0.0;
    for (double v : tuple_rhs_) s += v;
    return s;
  }

 private:
  Eigen::Index columns() const { return static_cast<Eigen::Index>(2 * tuples_); }
  void add(std::string label, Eigen::VectorXd row, double value) {
    if (!std::isfinite(value)) throw std::domain_error("non-finite LP right-hand side");
    row_labels_.push_back(std::move(label));
    rows_.push_back(std::move(row));
    rhs_.push_back(value);
  }

  int parties_;
  std::size_t tuples_;
  std::vector<std::string> labels_;
  std::vector<std::string> row_labels_;
  std::vector<Eigen::VectorXd> rows_;
  std::vector<double> rhs_;
  std::vector<double> tuple_rhs_;
};

void require_unit_interval(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("transmissivity must lie in [0, 1]");
}

// Probability that party k outputs `label` and the neighbour at `offset`
// (+1 or -1) outputs `neighbour`, all other parties summed.
std::string neighbour_pattern(int parties, int k, char label, int offset, char neighbour) {
  std::string pattern(static_cast<std::size_t>(parties), '*');
  pattern[static_cast<std::size_t>(k)] = label;
  pattern[static_cast<std::size_t>((k + offset + parties) % parties)] = neighbour;
  return pattern;
}

}  // namespace

FeasibilityProblem build_triangle_lp(double t, const TriangleLpOptions& options) {
  require_unit_interval(t);
  const double s = t * (1.0 - t);
  const double r = std::sqrt(s);
  const double a = std::pow(1.0 - t, 1.5);
  const double b = std::pow(t, 1.5);
  ProgramBuilder builder(3);
  builder.tuple_rows([&](const std::string& key) {
    switch (std::count(key.begin(), key.end(), 'L')) {
      case 3: return 0.5 * (a + b) * (a + b);
      case 0: return 0.5 * (a - b) * (a - b);
      case 1: return 0.5 * s * (1.0 + 2.0 * r);
      default: return 0.5 * s * (1.0 - 2.0 * r);
    }
  });
  if (options.include_implied_marginals) builder.marginal_rows();
  builder.difference_rows([&](int, char i) { return i == 'L' ? 0.5 - t : t - 0.5; });
  builder.normalization_row();
  return builder.finish(1.0);
}

FeasibilityProblem build_triangle_lp(const OutcomeDistribution& dist, const TriangleLpOptions& options) {
  if (dist.party_count() != 3 || dist.alphabet() != passive_alphabet()) {
    throw std::invalid_argument("triangle LP needs a three-party distribution over {0, L, R, 2}");
  }
  ProgramBuilder builder(3);
  builder.tuple_rows([&](const std::string& key) { return 4.0 * dist[key]; });
  if (options.include_implied_marginals) builder.marginal_rows();
  builder.difference_rows([&](int k, char i) {
    double value = 0.0;
    for (char other : {'L', 'R', '2'}) {
      std::string next_silent(3, '0');
      next_silent[static_cast<std::size_t>(k)] = i;
      next_silent[static_cast<std::size_t>((k + 2) % 3)] = other;
      std::string prev_silent(3, '0');
      prev_silent[static_cast<std::size_t>(k)] = i;
      prev_silent[static_cast<std::size_t>((k + 1) % 3)] = other;
      value += dist[next_silent] - dist[prev_silent];
    }
    return 4.0 * value;
  });
  builder.normalization_row();
  return builder.finish(1.0);
}

FeasibilityProblem build_ring_lp(int parties, double t, const OutcomeDistribution& dist) {
  if (parties < 3) throw std::invalid_argument("a ring needs at least three parties");
  if (dist.party_count() != parties || dist.alphabet() != passive_alphabet()) {
    throw std::invalid_argument("distribution does not match the ring (party count or alphabet)");
  }
  if (std::abs(dist.metadata().transmissivity - t) > 1e-12) {
    throw std::invalid_argument("distribution metadata has a different transmissivity");
  }
  if (parties > 16) throw std::length_error("ring LP limited to 16 parties");
  const double scale = std::ldexp(1.0, -(parties - 3));
  ProgramBuilder builder(parties);
  builder.tuple_rows([&](const std::string& key) { return dist[key]; });
  builder.difference_rows([&](int k, char i) {
    return scale * (dist.marginal(neighbour_pattern(parties, k, i, +1, '0')) -
                    dist.marginal(neighbour_pattern(parties, k, i, -1, '0')));
  });
  return builder.finish(builder.tuple_total());
}

FeasibilityProblem build_ring_lp(const RingContraction& ring, int max_parties) {
  const int parties = ring.party_count();
  if (parties > max_parties) throw std::length_error("ring LP exceeds the configured party limit");
  if (ring.variant() != PovmVariant::passive) throw std::invalid_argument("ring LP needs the passive measurement");
  const double scale = std::ldexp(1.0, -(parties - 3));
  ProgramBuilder builder(parties);
  builder.tuple_rows([&](const std::string& key) { return ring.probability(key); });
  builder.difference_rows([&](int k, char i) {
    return scale * (ring.probability(neighbour_pattern(parties, k, i, +1, '0')) -
                    ring.probability(neighbour_pattern(parties, k, i, -1, '0')));
  });
  return builder.finish(builder.tuple_total());
}

bool verify_witness(const FeasibilityProblem& problem, const Eigen::VectorXd& x, double tolerance) {
  if (x.size() != problem.equality_matrix.cols()) return false;
  if ((x.array() < 0.0).any()) return false;
  const Eigen::VectorXd residual = problem.equality_matrix * x - problem.equality_rhs;
  return residual.cwiseAbs().maxCoeff() <= 10.0 * tolerance;
}

bool verify_dual(const FeasibilityProblem& problem, const Eigen::VectorXd& y, double tolerance) {
  if (y.size() != problem.equality_matrix.rows() || !y.allFinite()) return false;
  const Eigen::VectorXd reduced = problem.equality_matrix.transpose() * y;
  const double deficit = std::max(0.0, -reduced.minCoeff());
  return problem.equality_rhs.dot(y) + deficit * problem.variable_sum_bound < -tolerance;
}

CertificateResult solve_feasibility(const FeasibilityProblem& problem, double tolerance) {
  if (problem.equality_matrix.rows() != problem.equality_rhs.size()) {
    throw std::invalid_argument("malformed feasibility problem");
  }
  const Phase1Result phase1 = solve_phase1(problem.equality_matrix, problem.equality_rhs);
  CertificateResult result;
  result.tolerance = tolerance;
  result.violation = phase1.violation;
  result.pivots = phase1.pivots;
  result.feasible = phase1.violation <= tolerance;
  if (result.feasible) {
    result.witness = phase1.x;
    result.certificate_verified = verify_witness(problem, phase1.x, tolerance);
  } else {
    result.dual_certificate = phase1.farkas;
    result.certificate_verified = verify_dual(problem, phase1.farkas, tolerance);
  }
  return result;
}

std::vector<double> BoundaryReport::infeasible_points() const {
  std::vector<double> out;
  for (const auto& e : evaluations) {
    if (!e.feasible) out.push_back(e.transmissivity);
  }
  return out;
}

std::vector<double> BoundaryReport::feasible_points() const {
  std::vector<double> out;
  for (const auto& e : evaluations) {
    if (e.feasible) out.push_back(e.transmissivity);
  }
  return out;
}

BoundaryReport scan_boundary(double t_lo, double t_hi, double precision, const ProblemBuilder& builder,
                             int coarse_points, double tolerance) {
  if (!(t_lo < t_hi)) throw std::invalid_argument("scan needs t_lo < t_hi");
  if (!(precision > 0.0)) throw std::invalid_argument("precision must be positive");
  if (coarse_points < 2) throw std::invalid_argument("scan needs at least two coarse points");
  const ProblemBuilder build = builder ? builder : ProblemBuilder([](double t) { return build_triangle_lp(t); });
  auto evaluate = [&](double t) {
    const CertificateResult r = solve_feasibility(build(t), tolerance);
    return ScanPoint{t, r.feasible, r.violation};
  };

  BoundaryReport report;
  report.t_lo = t_lo;
  report.t_hi = t_hi;
  report.precision = precision;
  const auto n = static_cast<std::size_t>(coarse_points);
  const std::vector<ScanPoint> coarse = parallel_map(n, [&](std::size_t i) {
    const double t = i + 1 == n ? t_hi : t_lo + (t_hi - t_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return evaluate(t);
  });
  report.evaluations = coarse;

  for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
    if (coarse[i].feasible == coarse[i + 1].feasible) continue;
    ScanPoint lo = coarse[i];
    ScanPoint hi = coarse[i + 1];
    while (hi.transmissivity - lo.transmissivity > precision) {
      const ScanPoint mid = evaluate(0.5 * (lo.transmissivity + hi.transmissivity));
      report.evaluations.push_back(mid);
      (mid.feasible == lo.feasible ? lo : hi) = mid;
    }
    report.boundaries.push_back({lo.transmissivity, hi.transmissivity, lo.feasible});
  }
  std::sort(report.evaluations.begin(), report.evaluations.end(),
            [](const ScanPoint& a, const ScanPoint& b) { return a.transmissivity < b.transmissivity; });
  return report;
}

}  // namespace photonet
