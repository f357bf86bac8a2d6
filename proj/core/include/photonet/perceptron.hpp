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

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace photonet {

/// Fully connected network: ReLU hidden layers, softmax output. Batches are
/// column-major, one sample per column.
class Perceptron {
 public:
  Perceptron(int input_dim, int hidden_layers, int hidden_width, int output_dim);

  int input_dim() const { return static_cast<int>(weights_.front().cols()); }
  int output_dim() const { return static_cast<int>(weights_.back().rows()); }
  int hidden_layers() const { return static_cast<int>(weights_.size()) - 1; }
  int hidden_width() const;
  Eigen::Index parameter_count() const;

  /// He-normal hidden weights, variance 1/fan_in for the output layer, zero
  /// biases.
  void initialize(std::mt19937_64& rng);

  /// Activations kept for the backward pass.
  struct Tape {
    std::vector<Eigen::MatrixXd> layer_inputs;  ///< input, then each hidden output
    Eigen::MatrixXd probabilities;
  };

  Eigen::MatrixXd forward(const Eigen::MatrixXd& inputs, Tape* tape = nullptr) const;

  /// Adds dLoss/dparameters to `gradient` given dLoss/dprobabilities.
  void backward(const Tape& tape, const Eigen::MatrixXd& grad_probabilities, Eigen::Ref<Eigen::VectorXd> gradient) const;

  /// Flattened as, per layer, W (column-major) then b.
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::Ref<const Eigen::VectorXd>& flat);

  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }

 private:
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

}  // namespace photonet
