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

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace photonet {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Occupation numbers, one entry per mode, in the system's mode order.
using Occupation = std::vector<int>;

namespace tolerance {
inline constexpr double unitarity = 1e-12;
inline constexpr double hermiticity = 1e-12;
inline constexpr double positivity = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double probability_clip = 1e-10;
inline constexpr double state_norm = 1e-12;
}  // namespace tolerance

/// A set of labeled bosonic modes, each truncated at `cutoff` photons.
///
/// Basis ordering is lexicographic in the occupation tuple with the
/// last-listed mode varying fastest:
///
///     index(n_0, ..., n_{M-1}) = sum_k n_k * (cutoff + 1)^(M - 1 - k)
///
/// This ordering is frozen; serialized operators depend on it.
class ModeSystem {
 public:
  ModeSystem(std::vector<std::string> labels, int cutoff);

  /// Anonymous modes labeled "m0", "m1", ...
  static ModeSystem anonymous(int mode_count, int cutoff);

  int mode_count() const { return static_cast<int>(labels_.size()); }
  int cutoff() const { return cutoff_; }
  int local_dimension() const { return cutoff_ + 1; }
  std::size_t dimension() const { return dimension_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Throws std::invalid_argument for an unknown label.
  int mode_index(std::string_view label) const;

  std::size_t index_of(std::span<const int> occupation) const;
  Occupation occupation_of(std::size_t index) const;

  /// Same mode count and cutoff; labels may differ.
  bool same_shape(const ModeSystem& other) const;

  bool operator==(const ModeSystem& other) const = default;

 private:
  std::vector<std::string> labels_;
  int cutoff_ = 0;
  std::size_t dimension_ = 0;
};

/// Canonical basis enumeration, in index order.
std::vector<Occupation> occupation_basis(const ModeSystem& system);

/// A square operator on a mode system: unitaries, Kraus operators, effects.
class LinearOperator {
 public:
  LinearOperator(ModeSystem system, CMatrix matrix);

  static LinearOperator identity(const ModeSystem& system);

  const ModeSystem& system() const { return system_; }
  const CMatrix& matrix() const { return matrix_; }

  /// Same matrix on a system with new labels (same count and cutoff).
  LinearOperator relabeled(std::vector<std::string> labels) const;

  LinearOperator adjoint() const;
  LinearOperator operator*(const LinearOperator& rhs) const;
  LinearOperator operator+(const LinearOperator& rhs) const;
  LinearOperator scaled(Complex factor) const;

  bool is_hermitian(double tol = tolerance::hermiticity) const;
  bool is_unitary(double tol = tolerance::unitarity) const;
  /// Hermitian with smallest eigenvalue >= -tol.
  bool is_positive(double tol = tolerance::positivity) const;

 private:
  ModeSystem system_;
  CMatrix matrix_;
};

class PureState {
 public:
  /// Throws unless the squared norm is 1 within tolerance::state_norm.
  PureState(ModeSystem system, CVector amplitudes);

  /// Basis state |occupation>.
  static PureState fock(const ModeSystem& system, std::span<const int> occupation);

  const ModeSystem& system() const { return system_; }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::span<const int> occupation) const;

 private:
  ModeSystem system_;
  CVector amplitudes_;
};

enum class Normalization { normalized, unnormalized };

/// Hermitian, positive semidefinite operator. Trace is checked to be one
/// unless constructed as Normalization::unnormalized (first-order loss
/// channels do not preserve trace exactly).
class DensityOperator {
 public:
  DensityOperator(ModeSystem system, CMatrix matrix,
                  Normalization normalization = Normalization::normalized);

  static DensityOperator from_pure(const PureState& state);

  /// Skips the eigenvalue check. For operations that preserve positivity by
  /// construction (tensor products, permutations, partial traces, channels).
  static DensityOperator assume_valid(ModeSystem system, CMatrix matrix,
                                      Normalization normalization = Normalization::normalized);

  const ModeSystem& system() const { return system_; }
  const CMatrix& matrix() const { return matrix_; }
  Normalization normalization() const { return normalization_; }
  double trace() const { return matrix_.trace().real(); }

  DensityOperator relabeled(std::vector<std::string> labels) const;

 private:
  struct Unchecked {};
  DensityOperator(Unchecked, ModeSystem system, CMatrix matrix, Normalization normalization);

  ModeSystem system_;
  CMatrix matrix_;
  Normalization normalization_;
};

/// Unitary on two modes induced by the mode transformation
///
///     a1_in^+ =  sqrt(t) a1_out^+ - e^{-i phi} sqrt(1-t) a2_out^+
///     a2_in^+ =  e^{i phi} sqrt(1-t) a1_out^+ + sqrt(t) a2_out^+
///
/// acting on Fock states |m n> = (a1^+)^m (a2^+)^n / sqrt(m! n!) |00>.
/// Photon number is conserved, so the truncation at `cutoff` per mode is
/// exact on every subspace with total photon number <= cutoff.
LinearOperator beamsplitter_unitary(double transmissivity, double phase, int cutoff);

/// op (on a sub-system shaped like `target_modes`) tensored with identity,
/// placed on the named modes of `system`.
LinearOperator embed(const LinearOperator& op, std::span<const std::string> target_modes,
                     const ModeSystem& system);

/// Kronecker product; the result's modes are lhs's followed by rhs's.
/// Labels must be distinct across the two factors.
LinearOperator tensor_product(const LinearOperator& lhs, const LinearOperator& rhs);
DensityOperator tensor_product(const DensityOperator& lhs, const DensityOperator& rhs);

/// Reorders modes. `new_order` lists the labels of `rho`'s system in the
/// order they should appear in the result.
DensityOperator permute_modes(const DensityOperator& rho, std::span<const std::string> new_order);

/// Reduced state on `keep_modes`, in the order given.
DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::string> keep_modes);

/// sum_k K_k rho K_k^+. The result is normalized only when rho is and the
/// Kraus set is complete (sum K^+ K = 1).
DensityOperator apply_channel(const DensityOperator& rho, std::span<const LinearOperator> kraus);

/// Tr[rho * effect], clipped into [0, 1] when within
/// tolerance::probability_clip of the boundary. Throws std::domain_error
/// when the value is negative beyond that, which signals an invalid effect.
double born_probability(const DensityOperator& rho, const LinearOperator& effect);

/// True when sum_k K_k^+ K_k equals identity within tol.
bool is_complete_kraus_set(std::span<const LinearOperator> kraus, double tol = tolerance::unitarity);

}  // namespace photonet
