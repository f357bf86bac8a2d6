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

// Local (classical) models on a ring of N parties with one uniform latent per
// source. Party k responds to (lambda_{k-1}, lambda_k), where lambda_k is the
// source shared with party k+1; for N = 3 that is the triangle.
//
// Training uses a jittered product grid: G points per source, one per
// stratum [g/G, (g+1)/G), redrawn every step. The model distribution on the
// grid is then an exact trace of G x G response matrices,
//
//     p(a_0 ... a_{N-1}) = Tr(F_0[a_0] F_1[a_1] ... F_{N-1}[a_{N-1}]) / G^N,
//     F_k[a](x, y) = response of party k to (lambda_{k-1} = x, lambda_k = y),
//
// which is an unbiased estimate of the latent integral over G^N latent tuples
// at the cost of N * G^2 network evaluations.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "photonet/distribution.hpp"
#include "photonet/perceptron.hpp"

namespace photonet {

class ResponseNetwork {
 public:
  ResponseNetwork(int party_count, std::vector<char> alphabet, int hidden_layers = 4, int hidden_width = 20);

  int party_count() const { return static_cast<int>(parties_.size()); }
  const std::vector<char>& alphabet() const { return alphabet_; }
  const Perceptron& party(int k) const { return parties_.at(static_cast<std::size_t>(k)); }

  void initialize(std::uint64_t seed);

  /// Response probabilities (alphabet x batch) of party k for latents in
  /// [0,1]; row 0 of `latents` is lambda_{k-1}, row 1 is lambda_k.
  Eigen::MatrixXd respond(int k, const Eigen::MatrixXd& latents, Perceptron::Tape* tape = nullptr) const;

  Eigen::Index parameter_count() const;
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::Ref<const Eigen::VectorXd>& flat);

  /// Replaces party k's network (used for fixed-response tests and imports).
  void set_party(int k, Perceptron network);

 private:
  std::vector<char> alphabet_;
  std::vector<Perceptron> parties_;
};

struct TrainingConfig {
  std::size_t batch_latent_samples = 8192;  ///< target latent tuples per step
  int steps = 5000;
  double learning_rate = 1e-3;
  double decay_factor = 0.3;
  std::vector<double> decay_points{0.5, 0.8};  ///< fractions of `steps`
  int restarts = 30;
  std::size_t eval_samples = 1000000;
  std::uint64_t seed = 0;
  int hidden_layers = 4;
  int hidden_width = 20;

  void validate() const;
  /// Largest G with G^N <= batch_latent_samples (at least 1).
  int grid_points_per_source(int party_count) const;
  double learning_rate_at(int step) const;
};

struct RestartRecord {
  std::uint64_t seed = 0;
  double distance = 0.0;  ///< NaN when diverged
  double final_training_distance = 0.0;  ///< grid distance at the last step
  int steps_completed = 0;
  bool diverged = false;
  std::string message;
};

struct FitResult {
  double distance = 0.0;
  ResponseNetwork model;
  std::size_t best_restart = 0;
  std::vector<RestartRecord> restarts;
  std::vector<double> residual;  ///< model - target per joint outcome
  TrainingConfig config;
};

/// i.i.d. Monte Carlo estimate of the model distribution from `samples`
/// latent tuples.
OutcomeDistribution estimate_distribution(const ResponseNetwork& model, std::size_t samples, std::uint64_t seed);

double euclidean_distance(const OutcomeDistribution& p, const OutcomeDistribution& q);

/// Per-source latent points, each in [0,1].
struct LatentGrid {
  std::vector<Eigen::VectorXd> points;
};

LatentGrid jittered_grid(int sources, int points_per_source, std::mt19937_64& rng);

struct GridLoss {
  double distance = 0.0;   ///< Euclidean distance on the grid
  double objective = 0.0;  ///< squared distance, the quantity trained on
  std::vector<double> model_table;
  Eigen::VectorXd gradient;  ///< d objective / d parameters; empty unless requested
};

/// Distance between the grid model distribution and `target`, optionally
/// with the gradient of the squared distance with respect to
/// ResponseNetwork::parameters(). Training descends the squared distance:
/// it has the same minimizer, and its stochastic gradient stays unbiased
/// near the optimum where the unit-norm gradient of the plain distance is
/// dominated by sampling noise.
GridLoss grid_loss(const ResponseNetwork& model, const OutcomeDistribution& target, const LatentGrid& grid,
                   bool with_gradient);

/// One restart seeded with config.seed.
FitResult train_local_model(const OutcomeDistribution& target, const TrainingConfig& config);

/// Restart r uses seed config.seed + r; restarts run on the worker pool and
/// give the same result as sequential execution. Throws std::runtime_error
/// only when every restart diverges.
FitResult fit_best_of(const OutcomeDistribution& target, const TrainingConfig& config);

}  // namespace photonet
