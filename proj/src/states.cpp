#include "fbt/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fbt/kernels.hpp"

namespace fbt {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Below this many ulps of drift a validated state is left bit-for-bit alone,
// which is what makes re-validation idempotent.
double roundoff_band(std::size_t d) { return 64.0 * kEps * static_cast<double>(std::max<std::size_t>(d, 1)); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Matrix hermitian_part(const Matrix& a) { return (a + a.adjoint()) * 0.5; }

}  // namespace

const char* to_string(StateKind kind) { return kind == StateKind::Classical ? "classical" : "quantum"; }

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

ProbabilityDistribution validate_distribution(const RealVector& raw) {
  if (raw.size() == 0) fail(ErrorCode::EmptyState, "distribution has no entries");
  RealVector w = raw;
  bool clipped = false;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i])) fail(ErrorCode::InvalidArgument, "non-finite weight at index " + std::to_string(i));
    if (w[i] < -kValidationTol) {
      fail(ErrorCode::NegativeWeight, "weight " + fmt(w[i]) + " at index " + std::to_string(i) + " is negative");
    }
    if (w[i] < 0.0) {
      w[i] = 0.0;
      clipped = true;
    }
  }
  const double total = w.sum();
  if (std::abs(total - 1.0) > kNormalizationTol) {
    fail(ErrorCode::NotNormalized, "weights sum to " + fmt(total));
  }
  if (clipped || std::abs(total - 1.0) > roundoff_band(static_cast<std::size_t>(w.size()))) w /= total;
  return ProbabilityDistribution(std::move(w));
}

ProbabilityDistribution validate_distribution(std::span<const double> raw) {
  return validate_distribution(RealVector(Eigen::Map<const RealVector>(raw.data(), static_cast<Eigen::Index>(raw.size()))));
}

ProbabilityDistribution validate_distribution(std::initializer_list<double> raw) {
  return validate_distribution(std::span<const double>(raw.begin(), raw.size()));
}

DensityMatrix validate_density(const Matrix& raw) {
  if (raw.rows() != raw.cols()) {
    fail(ErrorCode::NotSquare, std::to_string(raw.rows()) + "x" + std::to_string(raw.cols()) + " matrix");
  }
  if (raw.size() == 0) fail(ErrorCode::EmptyState, "density matrix has no entries");
  if (!raw.allFinite()) fail(ErrorCode::InvalidArgument, "non-finite matrix entry");
  const double asym = max_abs(raw - raw.adjoint());
  if (asym > kValidationTol) fail(ErrorCode::NotHermitian, "max |A - A^dagger| = " + fmt(asym));

  Matrix h = hermitian_part(raw);
  const double trace = h.trace().real();
  if (std::abs(trace - 1.0) > kNormalizationTol) fail(ErrorCode::NotUnitTrace, "trace = " + fmt(trace));

  const SpectralDecomposition sd = spectral_decomposition(h);
  const double min_eig = sd.eigenvalues[sd.eigenvalues.size() - 1];
  if (min_eig < -kValidationTol) fail(ErrorCode::NotPositive, "smallest eigenvalue " + fmt(min_eig));
  if (min_eig < -16.0 * kEps) {
    h = hermitian_part(spectral_apply(sd, [](double x) { return std::max(x, 0.0); }));
  }
  const double clipped_trace = h.trace().real();
  if (std::abs(clipped_trace - 1.0) > roundoff_band(static_cast<std::size_t>(h.rows()))) h /= clipped_trace;
  return DensityMatrix(std::move(h));
}

DensityMatrix diagonal_state(const ProbabilityDistribution& p) {
  return StateAccess::trusted(Matrix(p.weights().cast<Complex>().asDiagonal()));
}

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition spectral_decomposition(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) fail(ErrorCode::InvalidArgument, "eigensolver did not converge");
  SpectralDecomposition sd;
  sd.eigenvalues = solver.eigenvalues().reverse();
  sd.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return sd;
}

SpectralDecomposition spectral_decomposition(const DensityMatrix& rho) { return spectral_decomposition(rho.matrix()); }

RealVector eigenvalues_descending(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail(ErrorCode::InvalidArgument, "eigensolver did not converge");
  return solver.eigenvalues().reverse();
}

Matrix mat_sqrt(const DensityMatrix& rho) {
  return spectral_apply(spectral_decomposition(rho), [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

SupportLog mat_log_on_support(const DensityMatrix& rho, double floor) {
  if (!(floor > 0.0)) fail(ErrorCode::InvalidArgument, "support floor must be positive");
  const SpectralDecomposition sd = spectral_decomposition(rho);
  SupportLog out;
  out.log = spectral_apply(sd, [floor](double x) { return x > floor ? std::log(x) : 0.0; });
  out.projector = spectral_apply(sd, [floor](double x) { return x > floor ? 1.0 : 0.0; });
  out.rank = (sd.eigenvalues.array() > floor).count();
  return out;
}

double von_neumann_entropy(const DensityMatrix& rho, double floor) {
  const RealVector ev = eigenvalues_descending(rho.matrix());
  return kernels::entropy({ev.data(), static_cast<std::size_t>(ev.size())}, floor);
}

double shannon_entropy(const ProbabilityDistribution& p, double floor) { return kernels::entropy(p.span(), floor); }

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b, std::size_t cap) {
  const std::size_t dim = a.dim() * b.dim();
  if (dim > cap) {
    fail(ErrorCode::DimensionCap, "composite dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(cap));
  }
  return StateAccess::trusted(kernels::kron(a.matrix(), b.matrix()));
}

DensityMatrix tensor_power(const DensityMatrix& a, int k, std::size_t cap) {
  if (k < 0) fail(ErrorCode::InvalidArgument, "negative tensor power");
  double dim = std::pow(static_cast<double>(a.dim()), k);
  if (dim > static_cast<double>(cap)) {
    fail(ErrorCode::DimensionCap, "composite dimension " + fmt(dim) + " exceeds cap " + std::to_string(cap));
  }
  DensityMatrix out = StateAccess::trusted(Matrix(Matrix::Ones(1, 1)));
  for (int i = 0; i < k; ++i) out = tensor_product(out, a, cap);
  return out;
}

DensityMatrix random_state(int d, int rank, std::uint64_t seed) {
  if (d < 1 || rank < 1 || rank > d) {
    fail(ErrorCode::BadRank, "need 1 <= rank <= d, got d=" + std::to_string(d) + " rank=" + std::to_string(rank));
  }
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix g(d, rank);
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = Complex(normal(gen), normal(gen));
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return validate_density(hermitian_part(m));
}

ProbabilityDistribution random_distribution(int d, std::uint64_t seed) {
  const RealVector ev = eigenvalues_descending(random_state(d, d, seed).matrix());
  return validate_distribution(RealVector(ev / ev.sum()));
}

DensityMatrix with_ridge(const DensityMatrix& rho, double delta) {
  if (!(delta >= 0.0)) fail(ErrorCode::InvalidArgument, "ridge must be nonnegative");
  if (delta == 0.0) return rho;
  const auto d = static_cast<Eigen::Index>(rho.dim());
  Matrix m = rho.matrix();
  m.diagonal().array() += delta / static_cast<double>(d);
  m /= (1.0 + delta);
  return StateAccess::trusted(std::move(m));
}

bool commutes(const DensityMatrix& a, const DensityMatrix& b, double tol) {
  if (a.dim() != b.dim()) fail(ErrorCode::DimensionMismatch, "commutator of states with different dimensions");
  const Matrix ab = a.matrix() * b.matrix();
  return max_abs(ab - ab.adjoint()) <= tol;  // (ab)^dagger = ba for Hermitian a, b
}

ClassicalTangent ClassicalTangent::make(const RealVector& raw) {
  if (raw.size() == 0) fail(ErrorCode::EmptyState, "empty perturbation");
  if (!raw.allFinite()) fail(ErrorCode::InvalidArgument, "non-finite perturbation entry");
  const double scale = std::max(1.0, raw.cwiseAbs().maxCoeff());
  if (std::abs(raw.sum()) > kValidationTol * scale) fail(ErrorCode::NotTangent, "perturbation sums to " + fmt(raw.sum()));
  return ClassicalTangent(raw);
}

QuantumTangent QuantumTangent::make(const Matrix& raw) {
  if (raw.rows() != raw.cols()) fail(ErrorCode::NotSquare, "perturbation must be square");
  if (raw.size() == 0) fail(ErrorCode::EmptyState, "empty perturbation");
  if (!raw.allFinite()) fail(ErrorCode::InvalidArgument, "non-finite perturbation entry");
  const double scale = std::max(1.0, max_abs(raw));
  if (max_abs(raw - raw.adjoint()) > kValidationTol * scale) fail(ErrorCode::NotHermitian, "perturbation not Hermitian");
  const Complex tr = raw.trace();
  if (std::abs(tr) > kValidationTol * scale) fail(ErrorCode::NotTangent, "perturbation trace " + fmt(tr.real()));
  return QuantumTangent(hermitian_part(raw));
}

QuantumTangent QuantumTangent::from_classical(const ClassicalTangent& dp) {
  return QuantumTangent(Matrix(dp.delta().cast<Complex>().asDiagonal()));
}

QuantumTangent random_tangent(int d, std::uint64_t seed) {
  if (d < 1) fail(ErrorCode::InvalidArgument, "dimension must be positive");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = Complex(normal(gen), normal(gen));
  Matrix h = hermitian_part(g);
  h.diagonal().array() -= h.trace() / static_cast<double>(d);
  const double norm = h.norm();
  if (norm > 0.0) h /= norm;
  return QuantumTangent::make(hermitian_part(h));
}

}  // namespace fbt
