#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fbt/errors.hpp"

namespace fbt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Entries within this distance of the admissible set are clipped onto it.
inline constexpr double kValidationTol = 1e-12;
/// Allowed deviation of a raw distribution's sum from 1.
inline constexpr double kNormalizationTol = 1e-9;
/// Eigenvalues at or below this value are exact zeros for logs and entropies.
inline constexpr double kSupportFloor = 1e-14;
inline constexpr std::size_t kDefaultDimensionCap = 4096;

enum class StateKind { Classical, Quantum };

const char* to_string(StateKind kind);

/// Finite probability vector. Only obtainable through validate_distribution,
/// so every instance satisfies nonnegativity and unit sum.
class ProbabilityDistribution {
 public:
  static constexpr StateKind kind = StateKind::Classical;

  std::size_t dim() const { return static_cast<std::size_t>(weights_.size()); }
  const RealVector& weights() const { return weights_; }
  double operator[](std::size_t i) const { return weights_[static_cast<Eigen::Index>(i)]; }
  std::span<const double> span() const { return {weights_.data(), dim()}; }

  friend bool operator==(const ProbabilityDistribution& a, const ProbabilityDistribution& b) {
    return a.weights_.size() == b.weights_.size() && a.weights_ == b.weights_;
  }

 private:
  explicit ProbabilityDistribution(RealVector w) : weights_(std::move(w)) {}
  friend ProbabilityDistribution validate_distribution(const RealVector& raw);
  friend struct StateAccess;

  RealVector weights_;
};

/// Hermitian, positive-semidefinite, unit-trace matrix. Only obtainable
/// through validate_density or from library operations that preserve the
/// invariants.
class DensityMatrix {
 public:
  static constexpr StateKind kind = StateKind::Quantum;

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }

  friend bool operator==(const DensityMatrix& a, const DensityMatrix& b) {
    return a.matrix_.rows() == b.matrix_.rows() && a.matrix_ == b.matrix_;
  }

 private:
  explicit DensityMatrix(Matrix m) : matrix_(std::move(m)) {}
  friend DensityMatrix validate_density(const Matrix& raw);
  friend struct StateAccess;

  Matrix matrix_;
};

/// Library-internal construction of states whose invariants hold by
/// construction (Kronecker products, convex mixtures of valid states, ...).
struct StateAccess {
  static ProbabilityDistribution trusted(RealVector w) { return ProbabilityDistribution(std::move(w)); }
  static DensityMatrix trusted(Matrix m) { return DensityMatrix(std::move(m)); }
};

/// Clips entries in [-tol, 0) to zero and renormalizes. Throws
/// NegativeWeight / NotNormalized / EmptyState.
ProbabilityDistribution validate_distribution(const RealVector& raw);
ProbabilityDistribution validate_distribution(std::span<const double> raw);
ProbabilityDistribution validate_distribution(std::initializer_list<double> raw);

/// Symmetrizes, clips small negative eigenvalues, renormalizes the trace.
/// Throws NotSquare / EmptyState / NotHermitian / NotPositive / NotUnitTrace.
DensityMatrix validate_density(const Matrix& raw);

DensityMatrix diagonal_state(const ProbabilityDistribution& p);

/// Eigenvalues in descending order with matching unitary eigenvector columns.
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;

  Matrix reconstruct() const;
};

SpectralDecomposition spectral_decomposition(const Matrix& hermitian);
SpectralDecomposition spectral_decomposition(const DensityMatrix& rho);
RealVector eigenvalues_descending(const Matrix& hermitian);

/// V f(Lambda) V^dagger.
template <class Fn>
Matrix spectral_apply(const SpectralDecomposition& sd, Fn&& fn) {
  RealVector mapped(sd.eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped[i] = fn(sd.eigenvalues[i]);
  return sd.eigenvectors * mapped.asDiagonal() * sd.eigenvectors.adjoint();
}

Matrix mat_sqrt(const DensityMatrix& rho);

struct SupportLog {
  Matrix log;        ///< ln restricted to the support, zero on its complement
  Matrix projector;  ///< projector onto eigenvectors with eigenvalue > floor
  Eigen::Index rank = 0;
};

SupportLog mat_log_on_support(const DensityMatrix& rho, double floor = kSupportFloor);

double von_neumann_entropy(const DensityMatrix& rho, double floor = kSupportFloor);
double shannon_entropy(const ProbabilityDistribution& p, double floor = kSupportFloor);

/// Kronecker product; throws DimensionCap when d_a * d_b exceeds cap.
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b,
                             std::size_t cap = kDefaultDimensionCap);
/// a^{(x)k}; k = 0 gives the 1x1 state [1].
DensityMatrix tensor_power(const DensityMatrix& a, int k, std::size_t cap = kDefaultDimensionCap);

/// G G^dagger / tr(G G^dagger) with G a d x rank matrix of complex normal deviates.
DensityMatrix random_state(int d, int rank, std::uint64_t seed);
/// Eigenvalues of a full-rank random_state, for classical test inputs.
ProbabilityDistribution random_distribution(int d, std::uint64_t seed);

/// Mixes in delta * I/d and renormalizes: (rho + delta I/d) / (1 + delta).
DensityMatrix with_ridge(const DensityMatrix& rho, double delta);

bool commutes(const DensityMatrix& a, const DensityMatrix& b, double tol = 1e-10);

/// Zero-sum real vector, the classical tangent direction dp.
class ClassicalTangent {
 public:
  static ClassicalTangent make(const RealVector& raw);

  std::size_t dim() const { return static_cast<std::size_t>(delta_.size()); }
  const RealVector& delta() const { return delta_; }

 private:
  explicit ClassicalTangent(RealVector d) : delta_(std::move(d)) {}
  RealVector delta_;
};

/// Hermitian traceless matrix, the quantum tangent direction d rho.
class QuantumTangent {
 public:
  static QuantumTangent make(const Matrix& raw);
  static QuantumTangent from_classical(const ClassicalTangent& dp);

  std::size_t dim() const { return static_cast<std::size_t>(delta_.rows()); }
  const Matrix& delta() const { return delta_; }

 private:
  explicit QuantumTangent(Matrix d) : delta_(std::move(d)) {}
  Matrix delta_;
};

/// A random Hermitian traceless direction with unit Frobenius norm.
QuantumTangent random_tangent(int d, std::uint64_t seed);

/// Largest entrywise modulus.
double max_abs(const Matrix& m);

}  // namespace fbt
