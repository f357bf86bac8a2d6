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

#include "photonet/fock.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace photonet {

namespace {

double factorial(int n) {
  double out = 1.0;
  for (int k = 2; k <= n; ++k) out *= k;
  return out;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

Complex ipow(Complex base, int exponent) {
  Complex out = 1.0;
  for (int k = 0; k < exponent; ++k) out *= base;
  return out;
}

// Splits every basis index of `system` into (index on `modes`, index on the
// remaining modes). Both sub-indices follow the frozen ordering convention.
struct Factorization {
  std::vector<std::size_t> sub;
  std::vector<std::size_t> rest;
  std::size_t sub_dimension = 1;
  std::size_t rest_dimension = 1;
};

Factorization factorize(const ModeSystem& system, std::span<const int> modes) {
  const int d = system.local_dimension();
  std::vector<bool> selected(system.mode_count(), false);
  for (int m : modes) selected[m] = true;
  Factorization f;
  for (std::size_t k = 0; k < modes.size(); ++k) f.sub_dimension *= d;
  f.rest_dimension = system.dimension() / f.sub_dimension;
  f.sub.resize(system.dimension());
  f.rest.resize(system.dimension());
  for (std::size_t i = 0; i < system.dimension(); ++i) {
    const Occupation occ = system.occupation_of(i);
    std::size_t s = 0;
    for (int m : modes) s = s * d + occ[m];
    std::size_t r = 0;
    for (int m = 0; m < system.mode_count(); ++m) {
      if (!selected[m]) r = r * d + occ[m];
    }
    f.sub[i] = s;
    f.rest[i] = r;
  }
  return f;
}

std::vector<int> resolve_modes(const ModeSystem& system, std::span<const std::string> labels) {
  std::vector<int> modes;
  modes.reserve(labels.size());
  std::set<int> seen;
  for (const auto& label : labels) {
    const int m = system.mode_index(label);
    if (!seen.insert(m).second) throw std::invalid_argument("duplicate mode label: " + label);
    modes.push_back(m);
  }
  return modes;
}

void check_hermitian(const CMatrix& m, const char* what) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tolerance::hermiticity * scale) {
    throw std::invalid_argument(std::string(what) + " is not Hermitian");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ModeSystem

ModeSystem::ModeSystem(std::vector<std::string> labels, int cutoff)
    : labels_(std::move(labels)), cutoff_(cutoff) {
  if (labels_.empty()) throw std::invalid_argument("mode system needs at least one mode");
  if (cutoff_ < 1) throw std::invalid_argument("cutoff must be >= 1");
  std::set<std::string> unique(labels_.begin(), labels_.end());
  if (unique.size() != labels_.size()) throw std::invalid_argument("mode labels must be distinct");
  dimension_ = 1;
  for (std::size_t k = 0; k < labels_.size(); ++k) dimension_ *= static_cast<std::size_t>(cutoff_ + 1);
}

ModeSystem ModeSystem::anonymous(int mode_count, int cutoff) {
  if (mode_count < 1) throw std::invalid_argument("mode_count must be positive");
  std::vector<std::string> labels;
  for (int k = 0; k < mode_count; ++k) labels.push_back("m" + std::to_string(k));
  return ModeSystem(std::move(labels), cutoff);
}

int ModeSystem::mode_index(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::invalid_argument("unknown mode label: " + std::string(label));
  return static_cast<int>(it - labels_.begin());
}

std::size_t ModeSystem::index_of(std::span<const int> occupation) const {
  if (static_cast<int>(occupation.size()) != mode_count()) {
    throw std::invalid_argument("occupation tuple has wrong length");
  }
  std::size_t index = 0;
  for (int n : occupation) {
    if (n < 0 || n > cutoff_) throw std::out_of_range("occupation exceeds cutoff");
    index = index * static_cast<std::size_t>(cutoff_ + 1) + static_cast<std::size_t>(n);
  }
  return index;
}

Occupation ModeSystem::occupation_of(std::size_t index) const {
  if (index >= dimension_) throw std::out_of_range("basis index out of range");
  Occupation occ(labels_.size());
  const auto d = static_cast<std::size_t>(cutoff_ + 1);
  for (int k = mode_count() - 1; k >= 0; --k) {
    occ[k] = static_cast<int>(index % d);
    index /= d;
  }
  return occ;
}

bool ModeSystem::same_shape(const ModeSystem& other) const {
  return mode_count() == other.mode_count() && cutoff_ == other.cutoff_;
}

std::vector<Occupation> occupation_basis(const ModeSystem& system) {
  std::vector<Occupation> basis;
  basis.reserve(system.dimension());
  for (std::size_t i = 0; i < system.dimension(); ++i) basis.push_back(system.occupation_of(i));
  return basis;
}

// ---------------------------------------------------------------------------
// LinearOperator

LinearOperator::LinearOperator(ModeSystem system, CMatrix matrix)
    : system_(std::move(system)), matrix_(std::move(matrix)) {
  const auto dim = static_cast<Eigen::Index>(system_.dimension());
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw std::invalid_argument("operator dimension does not match its mode system");
  }
}

LinearOperator LinearOperator::identity(const ModeSystem& system) {
  const auto dim = static_cast<Eigen::Index>(system.dimension());
  return LinearOperator(system, CMatrix::Identity(dim, dim));
}

LinearOperator LinearOperator::relabeled(std::vector<std::string> labels) const {
  return LinearOperator(ModeSystem(std::move(labels), system_.cutoff()), matrix_);
}

LinearOperator LinearOperator::adjoint() const { return LinearOperator(system_, matrix_.adjoint()); }

LinearOperator LinearOperator::operator*(const LinearOperator& rhs) const {
  if (!system_.same_shape(rhs.system_)) throw std::invalid_argument("operator shape mismatch");
  return LinearOperator(system_, matrix_ * rhs.matrix_);
}

LinearOperator LinearOperator::operator+(const LinearOperator& rhs) const {
  if (!system_.same_shape(rhs.system_)) throw std::invalid_argument("operator shape mismatch");
  return LinearOperator(system_, matrix_ + rhs.matrix_);
}

LinearOperator LinearOperator::scaled(Complex factor) const {
  return LinearOperator(system_, matrix_ * factor);
}

bool LinearOperator::is_hermitian(double tol) const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool LinearOperator::is_unitary(double tol) const {
  const auto dim = matrix_.rows();
  return (matrix_ * matrix_.adjoint() - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= tol;
}

bool LinearOperator::is_positive(double tol) const {
  if (!is_hermitian(std::max(tol, tolerance::hermiticity))) return false;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tol;
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(ModeSystem system, CVector amplitudes)
    : system_(std::move(system)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != static_cast<Eigen::Index>(system_.dimension())) {
    throw std::invalid_argument("amplitude vector does not match its mode system");
  }
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > tolerance::state_norm) {
    throw std::invalid_argument("pure state is not normalized");
  }
}

PureState PureState::fock(const ModeSystem& system, std::span<const int> occupation) {
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(system.dimension()));
  amps(static_cast<Eigen::Index>(system.index_of(occupation))) = 1.0;
  return PureState(system, std::move(amps));
}

Complex PureState::amplitude(std::span<const int> occupation) const {
  return amplitudes_(static_cast<Eigen::Index>(system_.index_of(occupation)));
}

// ---------------------------------------------------------------------------
// DensityOperator

DensityOperator::DensityOperator(Unchecked, ModeSystem system, CMatrix matrix,
                                 Normalization normalization)
    : system_(std::move(system)), matrix_(std::move(matrix)), normalization_(normalization) {
  const auto dim = static_cast<Eigen::Index>(system_.dimension());
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw std::invalid_argument("density matrix dimension does not match its mode system");
  }
}

DensityOperator::DensityOperator(ModeSystem system, CMatrix matrix, Normalization normalization)
    : DensityOperator(Unchecked{}, std::move(system), std::move(matrix), normalization) {
  check_hermitian(matrix_, "density matrix");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tolerance::positivity) {
    throw std::invalid_argument("density matrix is not positive semidefinite");
  }
  if (normalization_ == Normalization::normalized &&
      std::abs(matrix_.trace().real() - 1.0) > tolerance::trace) {
    throw std::invalid_argument("density matrix does not have unit trace");
  }
}

DensityOperator DensityOperator::from_pure(const PureState& state) {
  const CVector& v = state.amplitudes();
  return DensityOperator(Unchecked{}, state.system(), v * v.adjoint(), Normalization::normalized);
}

DensityOperator DensityOperator::assume_valid(ModeSystem system, CMatrix matrix,
                                              Normalization normalization) {
  return DensityOperator(Unchecked{}, std::move(system), std::move(matrix), normalization);
}

DensityOperator DensityOperator::relabeled(std::vector<std::string> labels) const {
  return DensityOperator(Unchecked{}, ModeSystem(std::move(labels), system_.cutoff()), matrix_,
                         normalization_);
}

// ---------------------------------------------------------------------------
// Operations

LinearOperator beamsplitter_unitary(double transmissivity, double phase, int cutoff) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw std::invalid_argument("beamsplitter transmissivity must lie in [0, 1]");
  }
  const ModeSystem system = ModeSystem::anonymous(2, cutoff);
  const double st = std::sqrt(transmissivity);
  const double sr = std::sqrt(1.0 - transmissivity);
  // Rows: input creation operators; columns: output creation operators.
  const Complex u00 = st;
  const Complex u01 = -std::polar(sr, -phase);
  const Complex u10 = std::polar(sr, phase);
  const Complex u11 = st;

  const int d = cutoff + 1;
  CMatrix u = CMatrix::Zero(d * d, d * d);
  for (int m = 0; m <= cutoff; ++m) {
    for (int n = 0; n <= cutoff; ++n) {
      const double in_norm = 1.0 / std::sqrt(factorial(m) * factorial(n));
      const int col = m * d + n;
      for (int k = 0; k <= m; ++k) {
        for (int l = 0; l <= n; ++l) {
          const int out1 = k + l;
          const int out2 = (m - k) + (n - l);
          if (out1 > cutoff || out2 > cutoff) continue;
          const Complex coeff = binomial(m, k) * ipow(u00, k) * ipow(u01, m - k) *
                                binomial(n, l) * ipow(u10, l) * ipow(u11, n - l);
          u(out1 * d + out2, col) +=
              coeff * in_norm * std::sqrt(factorial(out1) * factorial(out2));
        }
      }
    }
  }
  return LinearOperator(system, std::move(u));
}

LinearOperator embed(const LinearOperator& op, std::span<const std::string> target_modes,
                     const ModeSystem& system) {
  if (static_cast<int>(target_modes.size()) != op.system().mode_count() ||
      op.system().cutoff() != system.cutoff()) {
    throw std::invalid_argument("operator shape does not match the target modes");
  }
  const std::vector<int> modes = resolve_modes(system, target_modes);
  const Factorization f = factorize(system, modes);

  // Full index of every (rest, sub) pair.
  std::vector<std::size_t> full(system.dimension());
  for (std::size_t i = 0; i < system.dimension(); ++i) {
    full[f.rest[i] * f.sub_dimension + f.sub[i]] = i;
  }
  const auto dim = static_cast<Eigen::Index>(system.dimension());
  CMatrix out = CMatrix::Zero(dim, dim);
  const CMatrix& m = op.matrix();
  for (std::size_t r = 0; r < f.rest_dimension; ++r) {
    const std::size_t base = r * f.sub_dimension;
    for (std::size_t a = 0; a < f.sub_dimension; ++a) {
      for (std::size_t b = 0; b < f.sub_dimension; ++b) {
        out(static_cast<Eigen::Index>(full[base + a]), static_cast<Eigen::Index>(full[base + b])) =
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
    }
  }
  return LinearOperator(system, std::move(out));
}

namespace {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ModeSystem joined(const ModeSystem& lhs, const ModeSystem& rhs) {
  if (lhs.cutoff() != rhs.cutoff()) throw std::invalid_argument("tensor factors need equal cutoffs");
  std::vector<std::string> labels = lhs.labels();
  labels.insert(labels.end(), rhs.labels().begin(), rhs.labels().end());
  return ModeSystem(std::move(labels), lhs.cutoff());
}

}  // namespace

LinearOperator tensor_product(const LinearOperator& lhs, const LinearOperator& rhs) {
  return LinearOperator(joined(lhs.system(), rhs.system()), kron(lhs.matrix(), rhs.matrix()));
}

DensityOperator tensor_product(const DensityOperator& lhs, const DensityOperator& rhs) {
  const bool normalized = lhs.normalization() == Normalization::normalized &&
                          rhs.normalization() == Normalization::normalized;
  return DensityOperator::assume_valid(
      joined(lhs.system(), rhs.system()), kron(lhs.matrix(), rhs.matrix()),
      normalized ? Normalization::normalized : Normalization::unnormalized);
}

DensityOperator permute_modes(const DensityOperator& rho, std::span<const std::string> new_order) {
  const ModeSystem& old_system = rho.system();
  if (static_cast<int>(new_order.size()) != old_system.mode_count()) {
    throw std::invalid_argument("permutation must list every mode exactly once");
  }
  const std::vector<int> source = resolve_modes(old_system, new_order);
  ModeSystem new_system(std::vector<std::string>(new_order.begin(), new_order.end()),
                        old_system.cutoff());
  std::vector<Eigen::Index> perm(new_system.dimension());
  Occupation old_occ(old_system.mode_count());
  for (std::size_t i = 0; i < new_system.dimension(); ++i) {
    const Occupation occ = new_system.occupation_of(i);
    for (int k = 0; k < new_system.mode_count(); ++k) old_occ[source[k]] = occ[k];
    perm[i] = static_cast<Eigen::Index>(old_system.index_of(old_occ));
  }
  const auto dim = static_cast<Eigen::Index>(new_system.dimension());
  CMatrix out(dim, dim);
  const CMatrix& m = rho.matrix();
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) out(i, j) = m(perm[i], perm[j]);
  }
  return DensityOperator::assume_valid(std::move(new_system), std::move(out), rho.normalization());
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::string> keep_modes) {
  const ModeSystem& system = rho.system();
  const std::vector<int> modes = resolve_modes(system, keep_modes);
  const Factorization f = factorize(system, modes);
  std::vector<std::size_t> full(system.dimension());
  for (std::size_t i = 0; i < system.dimension(); ++i) {
    full[f.rest[i] * f.sub_dimension + f.sub[i]] = i;
  }
  const auto dim = static_cast<Eigen::Index>(f.sub_dimension);
  CMatrix out = CMatrix::Zero(dim, dim);
  const CMatrix& m = rho.matrix();
  for (std::size_t r = 0; r < f.rest_dimension; ++r) {
    const std::size_t base = r * f.sub_dimension;
    for (Eigen::Index b = 0; b < dim; ++b) {
      for (Eigen::Index a = 0; a < dim; ++a) {
        out(a, b) += m(static_cast<Eigen::Index>(full[base + static_cast<std::size_t>(a)]),
                       static_cast<Eigen::Index>(full[base + static_cast<std::size_t>(b)]));
      }
    }
  }
  ModeSystem reduced(std::vector<std::string>(keep_modes.begin(), keep_modes.end()),
                     system.cutoff());
  return DensityOperator::assume_valid(std::move(reduced), std::move(out), rho.normalization());
}

bool is_complete_kraus_set(std::span<const LinearOperator> kraus, double tol) {
  if (kraus.empty()) return false;
  const auto dim = kraus.front().matrix().rows();
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (const auto& k : kraus) sum += k.matrix().adjoint() * k.matrix();
  return (sum - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= tol;
}

DensityOperator apply_channel(const DensityOperator& rho, std::span<const LinearOperator> kraus) {
  if (kraus.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
  const auto dim = rho.matrix().rows();
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& k : kraus) {
    if (!k.system().same_shape(rho.system())) {
      throw std::invalid_argument("Kraus operator dimension does not match the state");
    }
    out.noalias() += k.matrix() * rho.matrix() * k.matrix().adjoint();
  }
  // Restore exact Hermiticity lost to rounding.
  out = 0.5 * (out + out.adjoint()).eval();
  const bool normalized =
      rho.normalization() == Normalization::normalized && is_complete_kraus_set(kraus);
  return DensityOperator::assume_valid(
      rho.system(), std::move(out),
      normalized ? Normalization::normalized : Normalization::unnormalized);
}

double born_probability(const DensityOperator& rho, const LinearOperator& effect) {
  if (!effect.system().same_shape(rho.system())) {
    throw std::invalid_argument("effect dimension does not match the state");
  }
  // Tr[rho E] = sum_ij rho_ij E_ji = sum_ij conj(rho_ji) E_ji for Hermitian rho,
  // which avoids a strided transpose of the 729 x 729 triangle matrices.
  const double p = rho.matrix().conjugate().cwiseProduct(effect.matrix()).sum().real();
  if (p < -tolerance::probability_clip) {
    throw std::domain_error("negative Born probability: effect is not positive");
  }
  if (p < 0.0) return 0.0;
  if (p > 1.0 && p <= 1.0 + tolerance::probability_clip) return 1.0;
  return p;
}

}  // namespace photonet
