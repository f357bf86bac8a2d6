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

#include "photonet/fitter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "photonet/parallel.hpp"

namespace photonet {

namespace {

constexpr int kMaxParties = 6;
constexpr std::size_t kEstimateChunk = 4096;
constexpr std::uint64_t kEvalSeedOffset = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kGridSeedMix = 0xD1B54A32D192ED03ULL;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void require_compatible(const ResponseNetwork& model, const OutcomeDistribution& target) {
  if (model.party_count() != target.party_count() || model.alphabet() != target.alphabet()) {
    throw std::invalid_argument("model and target differ in party count or alphabet");
  }
}

// F[k][a] = G x G response matrix of party k for label a.
using ResponseMatrices = std::vector<std::vector<Eigen::MatrixXd>>;

// Visits every assignment of labels to the parties k+1, ..., k+N-1 (cyclic
// order) together with the product F[k+1][.] ... F[k+N-1][.].
template <typename Visit>
void for_each_cyclic_product(const ResponseMatrices& f, int k, Visit&& visit) {
  const int n = static_cast<int>(f.size());
  const std::size_t a = f[0].size();
  const int depth_count = n - 1;
  std::vector<std::size_t> digit(static_cast<std::size_t>(depth_count), 0);
  std::vector<Eigen::MatrixXd> prefix(static_cast<std::size_t>(depth_count));
  int depth = 0;
  while (depth >= 0) {
    const auto d = static_cast<std::size_t>(depth);
    if (digit[d] == a) {
      digit[d] = 0;
      --depth;
      if (depth >= 0) ++digit[static_cast<std::size_t>(depth)];
      continue;
    }
    const auto party = static_cast<std::size_t>((k + 1 + depth) % n);
    if (depth == 0) {
      prefix[0] = f[party][digit[0]];
    } else {
      prefix[d].noalias() = prefix[d - 1] * f[party][digit[d]];
    }
    if (depth + 1 == depth_count) {
      visit(digit, prefix[d]);
      ++digit[d];
    } else {
      ++depth;
    }
  }
}

// Table index of the tuple with label `own` at party k and `rest` at
// k+1, ..., k+N-1.
std::size_t cyclic_index(int n, std::size_t a, int k, std::size_t own, const std::vector<std::size_t>& rest) {
  std::vector<std::size_t> labels(static_cast<std::size_t>(n));
  labels[static_cast<std::size_t>(k)] = own;
  for (int j = 0; j + 1 < n; ++j) labels[static_cast<std::size_t>((k + 1 + j) % n)] = rest[static_cast<std::size_t>(j)];
  std::size_t index = 0;
  for (std::size_t label : labels) index = index * a + label;
  return index;
}

struct RestartRun {
  ResponseNetwork model;
  RestartRecord record;
  std::vector<double> residual;
};

RestartRun run_restart(const OutcomeDistribution& target, const TrainingConfig& config, std::uint64_t seed) {
  const int n = target.party_count();
  RestartRun run{ResponseNetwork(n, target.alphabet(), config.hidden_layers, config.hidden_width), {}, {}};
  run.record.seed = seed;
  run.model.initialize(seed);

  std::mt19937_64 rng(seed ^ kGridSeedMix);
  const int g = config.grid_points_per_source(n);
  Eigen::VectorXd theta = run.model.parameters();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theta.size());
  constexpr double beta1 = 0.9;
  constexpr double beta2 = 0.999;
  constexpr double adam_eps = 1e-8;
  double bias1 = 1.0;
  double bias2 = 1.0;

  for (int step = 0; step < config.steps; ++step) {
    const LatentGrid grid = jittered_grid(n, g, rng);
    const GridLoss loss = grid_loss(run.model, target, grid, true);
    if (!std::isfinite(loss.objective) || !loss.gradient.allFinite()) {
      run.record.diverged = true;
      run.record.distance = std::numeric_limits<double>::quiet_NaN();
      run.record.message = "non-finite loss at step " + std::to_string(step);
      run.record.steps_completed = step;
      return run;
    }
    run.record.final_training_distance = loss.distance;
    bias1 *= beta1;
    bias2 *= beta2;
    m = beta1 * m + (1.0 - beta1) * loss.gradient;
    v = beta2 * v + (1.0 - beta2) * loss.gradient.cwiseAbs2();
    const double lr = config.learning_rate_at(step);
    theta.array() -= lr * (m.array() / (1.0 - bias1)) / ((v.array() / (1.0 - bias2)).sqrt() + adam_eps);
    run.model.set_parameters(theta);
  }
  run.record.steps_completed = config.steps;

  const OutcomeDistribution estimate = estimate_distribution(run.model, config.eval_samples, seed + kEvalSeedOffset);
  run.record.distance = euclidean_distance(estimate, target);
  run.residual.resize(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) run.residual[i] = estimate.at(i) - target.at(i);
  return run;
}

}  // namespace

ResponseNetwork::ResponseNetwork(int party_count, std::vector<char> alphabet, int hidden_layers, int hidden_width)
    : alphabet_(std::move(alphabet)) {
  if (party_count < 3 || party_count > kMaxParties) {
    throw std::invalid_argument("response networks support 3 to 6 parties");
  }
  if (alphabet_.size() < 1) throw std::invalid_argument("empty outcome alphabet");
  for (int k = 0; k < party_count; ++k) {
    parties_.emplace_back(2, hidden_layers, hidden_width, static_cast<int>(alphabet_.size()));
  }
}

void ResponseNetwork::initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (auto& p : parties_) p.initialize(rng);
}

Eigen::MatrixXd ResponseNetwork::respond(int k, const Eigen::MatrixXd& latents, Perceptron::Tape* tape) const {
  if (latents.rows() != 2) throw std::invalid_argument("party responses take two latents");
  const Eigen::MatrixXd inputs = (2.0 * latents.array() - 1.0).matrix();
  return party(k).forward(inputs, tape);
}

Eigen::Index ResponseNetwork::parameter_count() const {
  Eigen::Index count = 0;
  for (const auto& p : parties_) count += p.parameter_count();
  return count;
}

Eigen::VectorXd ResponseNetwork::parameters() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index offset = 0;
  for (const auto& p : parties_) {
    flat.segment(offset, p.parameter_count()) = p.parameters();
    offset += p.parameter_count();
  }
  return flat;
}

void ResponseNetwork::set_parameters(const Eigen::Ref<const Eigen::VectorXd>& flat) {
  if (flat.size() != parameter_count()) throw std::invalid_argument("parameter vector has wrong size");
  Eigen::Index offset = 0;
  for (auto& p : parties_) {
    p.set_parameters(flat.segment(offset, p.parameter_count()));
    offset += p.parameter_count();
  }
}

void ResponseNetwork::set_party(int k, Perceptron network) {
  if (network.input_dim() != 2 || network.output_dim() != static_cast<int>(alphabet_.size())) {
    throw std::invalid_argument("party network has the wrong input or output size");
  }
  parties_.at(static_cast<std::size_t>(k)) = std::move(network);
}

void TrainingConfig::validate() const {
  if (batch_latent_samples < 1) throw std::invalid_argument("batch_latent_samples must be positive");
  if (steps < 1) throw std::invalid_argument("steps must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw std::invalid_argument("learning_rate must be positive");
  if (!(decay_factor > 0.0 && decay_factor <= 1.0)) throw std::invalid_argument("decay_factor must lie in (0, 1]");
  for (double point : decay_points) {
    if (!(point >= 0.0 && point <= 1.0)) throw std::invalid_argument("decay points must lie in [0, 1]");
  }
  if (restarts < 1) throw std::invalid_argument("restarts must be positive");
  if (eval_samples < 1) throw std::invalid_argument("eval_samples must be positive");
  if (hidden_layers < 1 || hidden_width < 1) throw std::invalid_argument("network shape must be positive");
}

int TrainingConfig::grid_points_per_source(int party_count) const {
  int g = 1;
  while (std::pow(static_cast<double>(g + 1), party_count) <= static_cast<double>(batch_latent_samples)) ++g;
  return g;
}

double TrainingConfig::learning_rate_at(int step) const {
  double lr = learning_rate;
  for (double point : decay_points) {
    if (step >= static_cast<int>(std::lround(point * steps))) lr *= decay_factor;
  }
  return lr;
}

OutcomeDistribution estimate_distribution(const ResponseNetwork& model, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("sample count must be positive");
  const int n = model.party_count();
  const auto a = static_cast<Eigen::Index>(model.alphabet().size());
  Eigen::Index table_size = 1;
  for (int k = 0; k < n; ++k) table_size *= a;

  std::mt19937_64 rng(seed);
  Eigen::VectorXd table = Eigen::VectorXd::Zero(table_size);
  std::vector<Eigen::MatrixXd> outputs(static_cast<std::size_t>(n));
  for (std::size_t done = 0; done < samples;) {
    const auto batch = static_cast<Eigen::Index>(std::min(kEstimateChunk, samples - done));
    Eigen::MatrixXd latent(n, batch);
    for (Eigen::Index b = 0; b < batch; ++b) {
      for (int k = 0; k < n; ++k) latent(k, b) = uniform01(rng);
    }
    for (int k = 0; k < n; ++k) {
      Eigen::MatrixXd pair(2, batch);
      pair.row(0) = latent.row((k + n - 1) % n);
      pair.row(1) = latent.row(k);
      outputs[static_cast<std::size_t>(k)] = model.respond(k, pair);
    }
    // Row p*A + a of the next joint block is row p of the current block
    // times party k's probability of label a.
    Eigen::MatrixXd joint = outputs[0];
    for (int k = 1; k < n; ++k) {
      const Eigen::MatrixXd& out = outputs[static_cast<std::size_t>(k)];
      Eigen::MatrixXd next(joint.rows() * a, batch);
      for (Eigen::Index p = 0; p < joint.rows(); ++p) {
        for (Eigen::Index l = 0; l < a; ++l) next.row(p * a + l) = joint.row(p).cwiseProduct(out.row(l));
      }
      joint.swap(next);
    }
    table += joint.rowwise().sum();
    done += static_cast<std::size_t>(batch);
  }
  table /= static_cast<double>(samples);

  DistributionMetadata meta;
  meta.generator = "local_model_estimate";
  return OutcomeDistribution(model.alphabet(), n, std::vector<double>(table.data(), table.data() + table.size()),
                             std::move(meta));
}

double euclidean_distance(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  if (p.party_count() != q.party_count() || p.alphabet() != q.alphabet()) {
    throw std::invalid_argument("distributions differ in party count or alphabet");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p.at(i) - q.at(i);
    sum += d * d;
  }
  return std::sqrt(sum);
}

LatentGrid jittered_grid(int sources, int points_per_source, std::mt19937_64& rng) {
  if (sources < 1 || points_per_source < 1) throw std::invalid_argument("invalid latent grid shape");
  LatentGrid grid;
  for (int s = 0; s < sources; ++s) {
    Eigen::VectorXd points(points_per_source);
    for (int g = 0; g < points_per_source; ++g) points(g) = (g + uniform01(rng)) / points_per_source;
    grid.points.push_back(std::move(points));
  }
  return grid;
}

GridLoss grid_loss(const ResponseNetwork& model, const OutcomeDistribution& target, const LatentGrid& grid,
                   bool with_gradient) {
  require_compatible(model, target);
  const int n = model.party_count();
  if (grid.points.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("grid needs one axis per source");
  const Eigen::Index g = grid.points[0].size();
  for (const auto& axis : grid.points) {
    if (axis.size() != g) throw std::invalid_argument("grid axes must have equal length");
  }
  const std::size_t a = model.alphabet().size();
  const double weight = std::pow(static_cast<double>(g), -n);

  std::vector<Perceptron::Tape> tapes(static_cast<std::size_t>(n));
  ResponseMatrices f(static_cast<std::size_t>(n), std::vector<Eigen::MatrixXd>(a));
  for (int k = 0; k < n; ++k) {
    const Eigen::VectorXd& left = grid.points[static_cast<std::size_t>((k + n - 1) % n)];
    const Eigen::VectorXd& right = grid.points[static_cast<std::size_t>(k)];
    Eigen::MatrixXd latents(2, g * g);
    for (Eigen::Index x = 0; x < g; ++x) {
      for (Eigen::Index y = 0; y < g; ++y) {
        latents(0, x * g + y) = left(x);
        latents(1, x * g + y) = right(y);
      }
    }
    const Eigen::MatrixXd out = model.respond(k, latents, &tapes[static_cast<std::size_t>(k)]);
    for (std::size_t l = 0; l < a; ++l) {
      // Row-major fill: column x*g + y of `out` becomes entry (x, y).
      Eigen::MatrixXd m(g, g);
      for (Eigen::Index x = 0; x < g; ++x) m.row(x) = out.row(static_cast<Eigen::Index>(l)).segment(x * g, g);
      f[static_cast<std::size_t>(k)][l] = std::move(m);
    }
  }

  GridLoss result;
  result.model_table.assign(target.size(), 0.0);
  for_each_cyclic_product(f, 0, [&](const std::vector<std::size_t>& rest, const Eigen::MatrixXd& r) {
    for (std::size_t own = 0; own < a; ++own) {
      result.model_table[cyclic_index(n, a, 0, own, rest)] = weight * f[0][own].cwiseProduct(r.transpose()).sum();
    }
  });
  std::vector<double> diff(target.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    diff[i] = result.model_table[i] - target.at(i);
    sum += diff[i] * diff[i];
  }
  result.objective = sum;
  result.distance = std::sqrt(sum);
  if (!with_gradient) return result;

  result.gradient = Eigen::VectorXd::Zero(model.parameter_count());
  Eigen::Index offset = 0;
  for (int k = 0; k < n; ++k) {
    // dL/dF_k[a] = sum over the other labels of g(tuple) * R^T * weight.
    std::vector<Eigen::MatrixXd> h(a, Eigen::MatrixXd::Zero(g, g));
    for_each_cyclic_product(f, k, [&](const std::vector<std::size_t>& rest, const Eigen::MatrixXd& r) {
      for (std::size_t own = 0; own < a; ++own) {
        const double coef = 2.0 * diff[cyclic_index(n, a, k, own, rest)];
        if (coef != 0.0) h[own] += coef * r;
      }
    });
    Eigen::MatrixXd grad_out(static_cast<Eigen::Index>(a), g * g);
    for (std::size_t l = 0; l < a; ++l) {
      const Eigen::MatrixXd d = weight * h[l].transpose();
      for (Eigen::Index x = 0; x < g; ++x) grad_out.row(static_cast<Eigen::Index>(l)).segment(x * g, g) = d.row(x);
    }
    const Perceptron& party = model.party(k);
    party.backward(tapes[static_cast<std::size_t>(k)], grad_out, result.gradient.segment(offset, party.parameter_count()));
    offset += party.parameter_count();
  }
  return result;
}

FitResult train_local_model(const OutcomeDistribution& target, const TrainingConfig& config) {
  TrainingConfig single = config;
  single.restarts = 1;
  return fit_best_of(target, single);
}

FitResult fit_best_of(const OutcomeDistribution& target, const TrainingConfig& config) {
  config.validate();
  if (target.party_count() < 3 || target.party_count() > kMaxParties) {
    throw std::invalid_argument("local-model fitting supports 3 to 6 parties");
  }
  std::vector<RestartRun> runs = parallel_map(static_cast<std::size_t>(config.restarts), [&](std::size_t r) {
    return run_restart(target, config, config.seed + r);
  });

  std::size_t best = runs.size();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (runs[r].record.diverged) continue;
    if (best == runs.size() || runs[r].record.distance < runs[best].record.distance) best = r;
  }
  if (best == runs.size()) throw std::runtime_error("every restart diverged");

  FitResult result{runs[best].record.distance, runs[best].model, best, {}, runs[best].residual, config};
  for (auto& run : runs) result.restarts.push_back(run.record);
  return result;
}

}  // namespace photonet
