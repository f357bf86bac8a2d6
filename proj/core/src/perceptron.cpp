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

#include "photonet/perceptron.hpp"

#include <cmath>
#include <stdexcept>

namespace photonet {

Perceptron::Perceptron(int input_dim, int hidden_layers, int hidden_width, int output_dim) {
  if (input_dim < 1 || hidden_layers < 0 || hidden_width < 1 || output_dim < 1) {
    throw std::invalid_argument("invalid perceptron shape");
  }
  int fan_in = input_dim;
  for (int l = 0; l < hidden_layers; ++l) {
    weights_.emplace_back(Eigen::MatrixXd::Zero(hidden_width, fan_in));
    biases_.emplace_back(Eigen::VectorXd::Zero(hidden_width));
    fan_in = hidden_width;
  }
  weights_.emplace_back(Eigen::MatrixXd::Zero(output_dim, fan_in));
  biases_.emplace_back(Eigen::VectorXd::Zero(output_dim));
}

int Perceptron::hidden_width() const {
  return weights_.size() > 1 ? static_cast<int>(weights_.front().rows()) : 0;
}

Eigen::Index Perceptron::parameter_count() const {
  Eigen::Index count = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) count += weights_[l].size() + biases_[l].size();
  return count;
}

void Perceptron::initialize(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const bool output = l + 1 == weights_.size();
    const double fan_in = static_cast<double>(weights_[l].cols());
    const double stddev = std::sqrt((output ? 1.0 : 2.0) / fan_in);
    for (Eigen::Index j = 0; j < weights_[l].cols(); ++j) {
      for (Eigen::Index i = 0; i < weights_[l].rows(); ++i) weights_[l](i, j) = stddev * normal(rng);
    }
    biases_[l].setZero();
  }
}

Eigen::MatrixXd Perceptron::forward(const Eigen::MatrixXd& inputs, Tape* tape) const {
  if (inputs.rows() != input_dim()) throw std::invalid_argument("perceptron input has wrong dimension");
  if (tape != nullptr) {
    tape->layer_inputs.clear();
    tape->layer_inputs.push_back(inputs);
  }
  Eigen::MatrixXd h = inputs;
  for (std::size_t l = 0; l + 1 < weights_.size(); ++l) {
    Eigen::MatrixXd z = weights_[l] * h;
    z.colwise() += biases_[l];
    h = z.cwiseMax(0.0);
    if (tape != nullptr) tape->layer_inputs.push_back(h);
  }
  Eigen::MatrixXd scores = weights_.back() * h;
  scores.colwise() += biases_.back();
  const Eigen::RowVectorXd top = scores.colwise().maxCoeff();
  scores.rowwise() -= top;
  Eigen::MatrixXd p = scores.array().exp().matrix();
  const Eigen::RowVectorXd norm = p.colwise().sum();
  p.array().rowwise() /= norm.array();
  if (tape != nullptr) tape->probabilities = p;
  return p;
}

void Perceptron::backward(const Tape& tape, const Eigen::MatrixXd& grad_probabilities,
                          Eigen::Ref<Eigen::VectorXd> gradient) const {
  if (gradient.size() != parameter_count()) throw std::invalid_argument("gradient buffer has wrong size");
  const Eigen::MatrixXd& p = tape.probabilities;
  // Softmax Jacobian: dz = p * (g - <p, g>) per column.
  const Eigen::RowVectorXd inner = p.cwiseProduct(grad_probabilities).colwise().sum();
  Eigen::MatrixXd delta = grad_probabilities;
  delta.rowwise() -= inner;
  delta = delta.cwiseProduct(p);

  std::vector<Eigen::Index> offsets(weights_.size());
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    offsets[l] = offset;
    offset += weights_[l].size() + biases_[l].size();
  }
  for (std::size_t l = weights_.size(); l-- > 0;) {
    const Eigen::MatrixXd& h = tape.layer_inputs[l];
    const Eigen::Index w_size = weights_[l].size();
    Eigen::Map<Eigen::MatrixXd> gw(gradient.data() + offsets[l], weights_[l].rows(), weights_[l].cols());
    gw.noalias() += delta * h.transpose();
    gradient.segment(offsets[l] + w_size, biases_[l].size()) += delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = weights_[l].transpose() * delta;
      delta = back.cwiseProduct((h.array() > 0.0).cast<double>().matrix());
    }
  }
}

Eigen::VectorXd Perceptron::parameters() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    flat.segment(offset, weights_[l].size()) = Eigen::Map<const Eigen::VectorXd>(weights_[l].data(), weights_[l].size());
    offset += weights_[l].size();
    flat.segment(offset, biases_[l].size()) = biases_[l];
    offset += biases_[l].size();
  }
  return flat;
}

void Perceptron::set_parameters(const Eigen::Ref<const Eigen::VectorXd>& flat) {
  if (flat.size() != parameter_count()) throw std::invalid_argument("parameter vector has wrong size");
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::Map<Eigen::VectorXd>(weights_[l].data(), weights_[l].size()) = flat.segment(offset, weights_[l].size());
    offset += weights_[l].size();
    biases_[l] = flat.segment(offset, biases_[l].size());
    offset += biases_[l].size();
  }
}

}  // namespace photonet
