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

#include "photonet/serialize.hpp"

#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace photonet {

namespace {

using Json = nlohmann::ordered_json;

Json noise_to_json(const NoiseParams& noise) {
  return Json{{"impurity", noise.impurity},
              {"channel_transmissivity", noise.channel_transmissivity},
              {"detector_efficiency", noise.detector_efficiency},
              {"werner_visibility", noise.werner_visibility},
              {"fidelity", std::string(to_string(noise.fidelity))}};
}

NoiseParams noise_from_json(const Json& j) {
  NoiseParams noise;
  noise.impurity = j.at("impurity").get<double>();
  noise.channel_transmissivity = j.at("channel_transmissivity").get<double>();
  noise.detector_efficiency = j.at("detector_efficiency").get<double>();
  noise.werner_visibility = j.at("werner_visibility").get<double>();
  noise.fidelity = parse_channel_fidelity(j.at("fidelity").get<std::string>());
  return noise;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json config_to_json(const TrainingConfig& c) {
  return Json{{"batch_latent_samples", c.batch_latent_samples},
              {"steps", c.steps},
              {"learning_rate", c.learning_rate},
              {"decay_factor", c.decay_factor},
              {"decay_points", c.decay_points},
              {"restarts", c.restarts},
              {"eval_samples", c.eval_samples},
              {"seed", c.seed},
              {"hidden_layers", c.hidden_layers},
              {"hidden_width", c.hidden_width},
              {"optimizer", "adam"}};
}

}  // namespace

std::string_view library_version() { return PHOTONET_VERSION; }

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string distribution_to_json(const OutcomeDistribution& dist) {
  const DistributionMetadata& meta = dist.metadata();
  Json doc;
  doc["format"] = "photonet.distribution";
  doc["metadata"] = Json{{"party_count", dist.party_count()},
                         {"alphabet", std::string(dist.alphabet().begin(), dist.alphabet().end())},
                         {"transmissivity", meta.transmissivity},
                         {"phases", meta.phases},
                         {"variant", std::string(to_string(meta.variant))},
                         {"noise", noise_to_json(meta.noise)},
                         {"normalized", dist.normalization() == Normalization::normalized},
                         {"generator", meta.generator},
                         {"version", std::string(library_version())}};
  Json table = Json::object();
  for (std::size_t i = 0; i < dist.size(); ++i) table[dist.key_of(i)] = dist.at(i);
  doc["probabilities"] = std::move(table);
  return doc.dump(2) + "\n";
}

OutcomeDistribution distribution_from_json(std::string_view text) {
  try {
    const Json doc = Json::parse(text);
    if (doc.at("format").get<std::string>() != "photonet.distribution") {
      throw std::invalid_argument("not a distribution document");
    }
    const Json& meta_json = doc.at("metadata");
    const std::string alphabet_text = meta_json.at("alphabet").get<std::string>();
    const std::vector<char> alphabet(alphabet_text.begin(), alphabet_text.end());
    const int parties = meta_json.at("party_count").get<int>();

    DistributionMetadata meta;
    meta.transmissivity = meta_json.at("transmissivity").get<double>();
    meta.phases = meta_json.at("phases").get<std::vector<double>>();
    meta.variant = parse_povm_variant(meta_json.at("variant").get<std::string>());
    meta.noise = noise_from_json(meta_json.at("noise"));
    meta.generator = meta_json.at("generator").get<std::string>();
    const Normalization normalization =
        meta_json.at("normalized").get<bool>() ? Normalization::normalized : Normalization::unnormalized;

    // Sized from the alphabet; every key must be present exactly once.
    std::size_t size = 1;
    for (int k = 0; k < parties; ++k) size *= alphabet.size();
    const Json& table_json = doc.at("probabilities");
    if (table_json.size() != size) throw std::invalid_argument("probability table is incomplete");
    std::vector<double> table(size, 0.0);
    OutcomeDistribution keys(alphabet, parties, std::vector<double>(size, 0.0), {}, Normalization::unnormalized);
    for (const auto& [key, value] : table_json.items()) table[keys.index_of(key)] = value.get<double>();
    return OutcomeDistribution(alphabet, parties, std::move(table), std::move(meta), normalization);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed distribution document: ") + e.what());
  }
}

std::string certificate_to_json(const FeasibilityProblem& problem, const CertificateResult& result,
                                double transmissivity) {
  Json doc;
  doc["format"] = "photonet.certificate";
  doc["version"] = std::string(library_version());
  doc["transmissivity"] = transmissivity;
  doc["verdict"] = result.feasible ? "feasible" : "infeasible";
  doc["violation"] = result.violation;
  doc["tolerance"] = result.tolerance;
  doc["certificate_verified"] = result.certificate_verified;
  doc["pivots"] = result.pivots;
  Json matrix = Json::array();
  for (Eigen::Index r = 0; r < problem.equality_matrix.rows(); ++r) {
    matrix.push_back(vector_to_json(problem.equality_matrix.row(r).transpose()));
  }
  doc["problem"] = Json{{"variables", problem.variable_labels},
                        {"rows", problem.row_labels},
                        {"equality_matrix", std::move(matrix)},
                        {"equality_rhs", vector_to_json(problem.equality_rhs)},
                        {"variable_sum_bound", problem.variable_sum_bound}};
  if (result.witness) doc["witness"] = vector_to_json(*result.witness);
  if (result.dual_certificate) doc["dual_certificate"] = vector_to_json(*result.dual_certificate);
  return doc.dump(2) + "\n";
}

std::string fit_result_to_json(const FitResult& result, bool include_weights) {
  Json doc;
  doc["format"] = "photonet.fit";
  doc["version"] = std::string(library_version());
  doc["config"] = config_to_json(result.config);
  doc["distance"] = result.distance;
  doc["best_restart"] = result.best_restart;
  Json restarts = Json::array();
  for (const auto& r : result.restarts) {
    restarts.push_back(Json{{"seed", r.seed},
                            {"distance", r.diverged ? Json(nullptr) : Json(r.distance)},
                            {"final_training_distance", r.final_training_distance},
                            {"steps_completed", r.steps_completed},
                            {"diverged", r.diverged},
                            {"message", r.message}});
  }
  doc["restarts"] = std::move(restarts);
  doc["residual"] = result.residual;
  if (include_weights) {
    Json parties = Json::array();
    for (int k = 0; k < result.model.party_count(); ++k) {
      const Perceptron& p = result.model.party(k);
      Json layers = Json::array();
      for (std::size_t l = 0; l < p.weights().size(); ++l) {
        Json rows = Json::array();
        for (Eigen::Index i = 0; i < p.weights()[l].rows(); ++i) rows.push_back(vector_to_json(p.weights()[l].row(i).transpose()));
        layers.push_back(Json{{"weights", std::move(rows)}, {"bias", vector_to_json(p.biases()[l])}});
      }
      parties.push_back(Json{{"layers", std::move(layers)}});
    }
    doc["model"] = Json{{"alphabet", std::string(result.model.alphabet().begin(), result.model.alphabet().end())},
                        {"input_map", "2u - 1"},
                        {"parties", std::move(parties)}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace photonet
